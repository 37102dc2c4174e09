#pragma once

#include <cstdint>
#include <vector>

#include "skillml/signal.hpp"

namespace skillml {

// Two-population trial generator with a separability knob. The skilled model
// is a chain of minimum-jerk submovements inside an ellipsoidal workspace with
// a small shared sensor-noise floor; novice trials add delta-scaled positional
// jitter, extra submovements, force tremor and pedal chatter. At delta = 0
// both classes draw from the identical distribution.
struct GeneratorConfig {
    int n_skilled = 23;
    int n_novice = 92;
    double delta = 0.0;
    double sample_rate_hz = 100.0;
    double segment_duration_s = 180.0;
    std::vector<int> scenarios = {1, 2, 3, 4, 5, 6};
    std::uint64_t seed = 0;

    // individual perturbation toggles, mostly for ground-truth tests
    bool perturb_jitter = true;
    bool perturb_submovements = true;
    bool perturb_force_tremor = true;
    bool perturb_pedal_chatter = true;
};

Dataset generate(const GeneratorConfig& config);

// Catalog feature ids the generator's active delta-perturbations are built to
// move, for selection tests. Empty at delta = 0.
std::vector<int> describe_ground_truth(const GeneratorConfig& config);

} // namespace skillml
