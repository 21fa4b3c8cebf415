#pragma once

#include "sta/ctrlh.hpp"
#include "sta/ermakov.hpp"
#include "sta/pulse.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sta::shell {

enum class Scenario { rap, rap_cd, rap_cd_approx, cd_terms, oscillator, check };

// Throws ConfigError for unknown names.
Scenario parse_scenario(std::string_view name);
std::string_view scenario_name(Scenario s);

// Atomic pulse parameters as plain frequencies; converted with a factor 2pi.
struct AtomConfig {
    double gamma_mhz = 2.0;
    double omega0_mhz = 100.0;
    double a_ghz2 = 0.01;    // a = (2pi)^2 x a_ghz2 GHz^2
    double b_ghz2 = 0.00025; // b = (2pi)^2 x b_ghz2 GHz^2

    pulse::ChirpedGaussianParams params() const;
};

struct OscillatorConfig {
    double omega0_hz = 250.0;
    double omegaf_hz = 2.5;
    double tf_ms = 25.0;
    double mass_kg = 1.44e-25;
    double q0_um = 1.0;
    double v0_um_per_ms = 0.0;

    ermakov::ExpansionSpec spec() const;
};

inline constexpr double kDefaultAtomDtNs = 1e-3;
inline constexpr double kDefaultOscillatorDtMs = 1e-2;

struct RunConfig {
    Scenario scenario = Scenario::rap;
    AtomConfig atom;
    OscillatorConfig oscillator;
    std::optional<double> dt; // ns for atomic scenarios, ms for the oscillator
    double window_factor = pulse::kDefaultWindowFactor;
    bool approx = false;
    double tolerance_scale = 1.0;
    std::string output; // empty: standard output

    double atom_dt_ns() const { return dt.value_or(kDefaultAtomDtNs); }
    double oscillator_dt_ms() const { return dt.value_or(kDefaultOscillatorDtMs); }

    // Throws ConfigError naming the offending field.
    void validate() const;
};

// Strict JSON parsing on top of `base`: unknown keys and wrongly typed
// values raise ConfigError naming the key path.
RunConfig parse_config(std::string_view json_text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

// 17 significant digits, locale independent.
std::string format_double(double v);

// Columns t_ns, P1, P2, norm2, adiab_ratio; psi0 = |2> under H_a0.
void run_rap(const RunConfig& cfg, std::ostream& out);

// Columns t_ns, P1, P2, norm2, abs_c_minus; psi0 = |chi_+(t_start)> under
// H_a (or its Re C-truncated form when approx is set).
void run_rap_cd(const RunConfig& cfg, bool approx, std::ostream& out);

// Columns t_ns, ReC, ImC, adiab_ratio.
void run_cd_terms(const RunConfig& cfg, std::ostream& out);

// Phase-space trajectory: one period at w0 before the ramp, the ramp, one
// period at wf after it. Closed-form and Hamilton-equation columns.
void run_oscillator(const RunConfig& cfg, std::ostream& out);

struct CheckItem {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0; // upper bound, or lower end of `range`
    std::optional<double> upper; // set for interval checks [threshold, upper]
    bool passed = false;
};

struct CheckReport {
    std::vector<CheckItem> items;

    bool all_passed() const;
    void print(std::ostream& out) const;
};

struct CheckOptions {
    // Hamiltonian whose transitionless property is verified; replaceable so a
    // corrupted construction can be shown to fail.
    std::function<ComplexMat2(const pulse::PulseSchedule&, double)> h_a = ctrlh::h_a;
};

CheckReport run_check(const RunConfig& cfg, const CheckOptions& options = {});

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitCheckFailed = 4;

// Runs cfg.scenario, writing CSV/report to cfg.output (or `out`), and
// maps errors to exit codes with a message on `err`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

} // namespace sta::shell
