#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "wscap/channels.hpp"

namespace wscap {

// Inclusive uniform grid lo, lo+step, ..., hi. The point count is fixed up
// front from (hi-lo)/step so results never depend on accumulated rounding.
struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    double step = 1.0;

    static GridSpec parse(const std::string& text);  // "MIN:MAX:STEP"
    std::vector<double> points() const;
};

struct SweepSpec {
    GridSpec grid;
    std::size_t n = 2000;       // block length for the vector-noise columns
    double power = 1.0;         // per-use input power budget
    std::string units = "bits";  // "bits" or "nats"; applied once, when writing
    std::size_t threads = 0;    // 0 selects the hardware default
    NoiseModel model = NoiseModel::ar1;
    double rho = -0.3;
    std::string cov_path;       // square covariance CSV for the custom model
    std::size_t oracle_m = 65;  // input letters for the discretized reference
    std::size_t oracle_k = 800;  // output bins for the discretized reference
};

struct SweepOutcome {
    std::size_t rows = 0;
    std::size_t failed_rows = 0;   // every value cell empty
    std::size_t flagged_rows = 0;  // at least one diagnostic or empty cell
    std::vector<std::string> warnings;
};

// Amplitude-constrained unit-noise Gaussian channel versus SNR in dB.
// Columns: snr_db, delta_theta, c_exact_oracle, c_high, c_bin, c_low.
SweepOutcome run_fig2a(const SweepSpec& spec, std::ostream& os);

// Gamma channel, theta0 = 27.5/kappa and delta_theta = 22.5/kappa.
// Columns: kappa, c_high, c_bin, c_low.
SweepOutcome run_fig2b(const SweepSpec& spec, std::ostream& os);

// Correlated Gaussian noise: capacity-to-power ratio versus lag-1
// correlation. Columns: rho, c_per_p_ar1, c_per_p_ar1_numeric,
// c_per_p_ma1_numeric (empty where the moving-average model is refused).
SweepOutcome run_fig3(const SweepSpec& spec, std::ostream& os);

// Fisher information matrix of the selected noise model plus the decay
// profile of its first row, |J[0][k]| against the lag k.
SweepOutcome run_fi_structure(const SweepSpec& spec, std::ostream& matrix_os,
                              std::ostream& profile_os);

// 0 on success (warnings included), 2 when every row failed.
int exit_code_for(const SweepOutcome& outcome);

// Shortest round-trippable decimal form.
std::string format_cell(double value);

// Flat key=value file; '#' starts a comment, blank lines are skipped.
std::map<std::string, std::string> parse_config(std::istream& in);

}  // namespace wscap
