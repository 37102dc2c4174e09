#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace skillml {

// One uniformly sampled signal. Third derivatives need four points, so
// validation rejects anything shorter.
struct Channel {
    std::vector<double> samples;
    double sample_rate_hz = 0.0;
    std::string name;

    std::size_t size() const { return samples.size(); }
    double duration_s() const {
        return samples.empty() ? 0.0
                               : static_cast<double>(samples.size() - 1) / sample_rate_hz;
    }
};

enum class TumorColor : std::uint8_t { black, glioma, white };
enum class Region : std::uint8_t { r1, r2, r3, r4, background };
enum class Label : std::uint8_t { novice = 0, skilled = 1 };

const char* to_string(TumorColor c);
const char* to_string(Region r);
const char* to_string(Label l);
TumorColor tumor_color_from_string(const std::string& s);
Region region_from_string(const std::string& s);
Label label_from_string(const std::string& s);

// One tumor-resection segment: the recording of one participant removing one
// tumor of one scenario. Scenario-level analysis concatenates a subject's
// three segments.
struct Trial {
    std::string id;
    std::string subject_id;
    int scenario_id = 0;               // 1..6
    int tumor_id = 0;                  // 1..3
    TumorColor tumor_color = TumorColor::black;
    double tumor_stiffness_kpa = 0.0;  // 3, 9 or 15
    Label label = Label::novice;
    double duration_s = 0.0;

    std::array<Channel, 3> position;   // x, y, z in mm
    std::array<Channel, 3> angles;     // roll, pitch, yaw in rad
    Channel force;                     // newtons
    std::vector<std::uint8_t> pedal;   // activation state per sample
    std::vector<Region> region;        // per-sample tag

    std::size_t sample_count() const { return force.size(); }
    double sample_rate_hz() const { return force.sample_rate_hz; }
};

struct Dataset {
    std::vector<Trial> trials;

    std::size_t count(Label l) const;
};

// Scenario layout: scenarios 1-3 fix the color and vary stiffness by tumor,
// 4-6 fix the stiffness and vary color by tumor.
TumorColor expected_tumor_color(int scenario_id, int tumor_id);
double expected_tumor_stiffness(int scenario_id, int tumor_id);

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

ValidationReport validate_trial(const Trial& trial);
ValidationReport validate_dataset(const Dataset& dataset);

// Numerical differentiation, order 1-3. Second-order central stencils in the
// interior, second-order one-sided at the endpoints; orders 2 and 3 compose
// first derivatives. Output has the same length as the input.
Channel differentiate(const Channel& channel, int order);
std::vector<double> differentiate(std::span<const double> samples, double sample_rate_hz,
                                  int order);

// Pointwise Euclidean norm of the three position first derivatives.
Channel speed(const std::array<Channel, 3>& position);

} // namespace skillml
