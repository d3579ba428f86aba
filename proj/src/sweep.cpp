#include "wscap/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "wscap/capacity.hpp"
#include "wscap/fisher.hpp"
#include "wscap/oracle.hpp"

namespace wscap {

namespace {

struct RowResult {
    std::vector<std::optional<double>> vals;
    std::vector<std::string> notes;
    bool flagged = false;
    bool psd = false;  // sign-matched covariance check failed (informational)
};

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
    if (threads == 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        threads = hw == 0 ? 1 : hw;
    }
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

double unit_divisor(const std::string& units) {
    if (units == "nats") return 1.0;
    if (units == "bits") return std::numbers::ln2;
    throw std::invalid_argument("units must be 'bits' or 'nats', got '" + units + "'");
}

// Values are computed in nats and divided exactly once, here.
void write_table(std::ostream& os, const std::vector<std::string>& header,
                 const std::vector<RowResult>& rows, const std::vector<bool>& convert,
                 double divisor) {
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c) os << ',';
        os << header[c];
    }
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (c) os << ',';
            if (c < row.vals.size() && row.vals[c])
                os << format_cell(convert[c] ? *row.vals[c] / divisor : *row.vals[c]);
        }
        os << '\n';
    }
}

SweepOutcome collect(const std::vector<RowResult>& rows, std::size_t first_value_col) {
    SweepOutcome out;
    out.rows = rows.size();
    for (const auto& row : rows) {
        bool flagged = row.flagged;
        bool all_empty = true;
        for (std::size_t c = first_value_col; c < row.vals.size(); ++c) {
            if (row.vals[c])
                all_empty = false;
            else
                flagged = true;
        }
        if (all_empty) ++out.failed_rows;
        if (flagged) ++out.flagged_rows;
        out.warnings.insert(out.warnings.end(), row.notes.begin(), row.notes.end());
    }
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// MA(1) inversion is refused past this correlation; see ma1_fisher.
constexpr double kMa1Limit = 0.42 + 1e-12;

}  // namespace

GridSpec GridSpec::parse(const std::string& text) {
    const auto fail = [&] {
        return std::invalid_argument("grid must be MIN:MAX:STEP, got '" + text + "'");
    };
    const std::size_t p1 = text.find(':');
    const std::size_t p2 = p1 == std::string::npos ? p1 : text.find(':', p1 + 1);
    if (p2 == std::string::npos || text.find(':', p2 + 1) != std::string::npos) throw fail();

    const auto num = [&](const std::string& field) {
        const std::string s = trim(field);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (...) {
            throw fail();
        }
        if (used != s.size() || !std::isfinite(v)) throw fail();
        return v;
    };

    GridSpec g;
    g.lo = num(text.substr(0, p1));
    g.hi = num(text.substr(p1 + 1, p2 - p1 - 1));
    g.step = num(text.substr(p2 + 1));
    if (!(g.step > 0.0)) throw std::invalid_argument("grid step must be > 0");
    if (!(g.lo <= g.hi)) throw std::invalid_argument("grid requires MIN <= MAX");
    return g;
}

std::vector<double> GridSpec::points() const {
    if (!(step > 0.0) || !(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw std::invalid_argument("invalid grid");
    const std::size_t count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> p(count);
    for (std::size_t i = 0; i < count; ++i) p[i] = lo + step * static_cast<double>(i);
    return p;
}

int exit_code_for(const SweepOutcome& outcome) {
    return (outcome.rows > 0 && outcome.failed_rows == outcome.rows) ? 2 : 0;
}

std::string format_cell(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::map<std::string, std::string> parse_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const std::size_t h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

SweepOutcome run_fig2a(const SweepSpec& spec, std::ostream& os) {
    const double divisor = unit_divisor(spec.units);
    const std::vector<double> snr = spec.grid.points();
    const std::vector<std::string> header{"snr_db", "delta_theta", "c_exact_oracle",
                                          "c_high",  "c_bin",      "c_low"};

    std::vector<RowResult> rows(snr.size());
    parallel_for(snr.size(), spec.threads, [&](std::size_t i) {
        RowResult& row = rows[i];
        row.vals.assign(6, std::nullopt);
        const double db = snr[i];
        const double dt = std::pow(10.0, db / 20.0);
        row.vals[0] = db;
        row.vals[1] = dt;
        const std::string at = " at snr_db=" + format_cell(db);
        const AwgnChannel ch(1.0);
        try {
            const BlahutArimotoResult oracle =
                awgn_amplitude_oracle(dt, spec.oracle_m, spec.oracle_k);
            row.vals[2] = oracle.capacity_nats;
            if (!oracle.converged) {
                row.flagged = true;
                row.notes.push_back("c_exact_oracle bracket still open" + at);
            }
        } catch (const std::exception& e) {
            row.notes.push_back("c_exact_oracle failed" + at + ": " + e.what());
        }
        try {
            row.vals[3] = c_high_memoryless(1.0, dt).nats;
        } catch (const std::exception& e) {
            row.notes.push_back(std::string("c_high failed") + at + ": " + e.what());
        }
        try {
            const CapacityEstimate b = c_bin(ch, 0.0, dt);
            row.vals[4] = b.nats;
            if (b.diagnostics.quadrature_warning) {
                row.flagged = true;
                row.notes.push_back("c_bin quadrature warning" + at);
            }
        } catch (const std::exception& e) {
            row.notes.push_back(std::string("c_bin failed") + at + ": " + e.what());
        }
        try {
            row.vals[5] = c_low(ch, -dt, dt).nats;
        } catch (const std::exception& e) {
            row.notes.push_back(std::string("c_low failed") + at + ": " + e.what());
        }
    });

    const SweepOutcome out = collect(rows, 2);
    write_table(os, header, rows, {false, false, true, true, true, true}, divisor);
    return out;
}

SweepOutcome run_fig2b(const SweepSpec& spec, std::ostream& os) {
    const double divisor = unit_divisor(spec.units);
    const std::vector<double> kappas = spec.grid.points();
    const std::vector<std::string> header{"kappa", "c_high", "c_bin", "c_low"};

    std::vector<RowResult> rows(kappas.size());
    parallel_for(kappas.size(), spec.threads, [&](std::size_t i) {
        RowResult& row = rows[i];
        row.vals.assign(4, std::nullopt);
        const double kappa = kappas[i];
        row.vals[0] = kappa;
        const std::string at = " at kappa=" + format_cell(kappa);
        try {
            const GammaChannel ch(kappa);
            const double theta0 = 27.5 / kappa;
            const double dt = 22.5 / kappa;
            row.vals[1] = c_high_memoryless(*ch.fisher_analytic(theta0), dt).nats;
            const CapacityEstimate b = c_bin(ch, theta0, dt);
            row.vals[2] = b.nats;
            if (b.diagnostics.quadrature_warning) {
                row.flagged = true;
                row.notes.push_back("c_bin quadrature warning" + at);
            }
            const CapacityEstimate lo = c_low(ch, 5.0 / kappa, 50.0 / kappa);
            row.vals[3] = lo.nats;
            if (lo.diagnostics.quadrature_warning) {
                row.flagged = true;
                row.notes.push_back("c_low quadrature warning" + at);
            }
        } catch (const std::exception& e) {
            row.notes.push_back(std::string("row failed") + at + ": " + e.what());
        }
    });

    const SweepOutcome out = collect(rows, 1);
    write_table(os, header, rows, {false, true, true, true}, divisor);
    return out;
}

SweepOutcome run_fig3(const SweepSpec& spec, std::ostream& os) {
    const double divisor = unit_divisor(spec.units);
    if (spec.n < 2) throw std::invalid_argument("fig3 requires n >= 2");
    if (!(spec.power > 0.0)) throw std::invalid_argument("fig3 requires power > 0");
    const std::vector<double> rhos = spec.grid.points();
    const std::vector<std::string> header{"rho", "c_per_p_ar1", "c_per_p_ar1_numeric",
                                          "c_per_p_ma1_numeric"};
    const double p = spec.power;
    const double dt = std::sqrt(p);

    std::vector<RowResult> rows(rhos.size());
    parallel_for(rhos.size(), spec.threads, [&](std::size_t i) {
        RowResult& row = rows[i];
        row.vals.assign(4, std::nullopt);
        const double rho = rhos[i];
        row.vals[0] = rho;
        const std::string at = " at rho=" + format_cell(rho);
        try {
            row.vals[1] = ar1_capacity(p, rho).nats / p;
        } catch (const std::exception& e) {
            row.notes.push_back(std::string("c_per_p_ar1 failed") + at + ": " + e.what());
        }
        try {
            const CapacityEstimate est = c_high_memory(ar1_fisher(rho, spec.n), dt);
            row.vals[2] = est.nats / p;
            row.psd = row.psd || est.diagnostics.psd_violation;
        } catch (const std::exception& e) {
            row.notes.push_back(std::string("c_per_p_ar1_numeric failed") + at + ": " + e.what());
        }
        if (std::fabs(rho) <= kMa1Limit) {
            try {
                const CapacityEstimate est = c_high_memory(ma1_fisher(rho, spec.n), dt);
                row.vals[3] = est.nats / p;
                row.psd = row.psd || est.diagnostics.psd_violation;
            } catch (const std::exception& e) {
                row.notes.push_back(std::string("c_per_p_ma1_numeric failed") + at + ": " +
                                    e.what());
            }
        }
    });

    SweepOutcome out = collect(rows, 1);

    std::size_t skipped = 0;
    for (double rho : rhos) skipped += std::fabs(rho) > kMa1Limit ? 1 : 0;
    if (skipped > 0)
        out.warnings.push_back("c_per_p_ma1_numeric omitted for " + std::to_string(skipped) +
                               " grid point(s) with |rho| > 0.42 (ill-conditioned inversion)");

    std::size_t psd_rows = 0;
    for (const auto& row : rows) psd_rows += row.psd ? 1 : 0;
    if (psd_rows > 0)
        out.warnings.push_back(
            "sign-matched input covariance is not PSD for " + std::to_string(psd_rows) +
            " grid point(s); the reported value is the finite-block supremum, approached "
            "but not attained by stationary inputs");

    // Finite-block sanity: halving n should barely move the numeric columns.
    if (spec.n >= 4 && !rhos.empty()) {
        const auto rel_change = [&](const FisherMatrix& full, const FisherMatrix& half) {
            const double a = c_high_memory(full, dt).nats / p;
            const double b = c_high_memory(half, dt).nats / p;
            return std::fabs(a - b) / std::max(std::fabs(a), 1e-300);
        };
        double rho_ar = 0.0;
        for (double r : rhos)
            if (std::fabs(r) > std::fabs(rho_ar)) rho_ar = r;
        try {
            const double d = rel_change(ar1_fisher(rho_ar, spec.n), ar1_fisher(rho_ar, spec.n / 2));
            out.warnings.push_back("finite-block check (ar1, rho=" + format_cell(rho_ar) +
                                   "): n vs n/2 relative change " + format_cell(d));
        } catch (const std::exception&) {
        }
        double rho_ma = 0.0;
        bool any_ma = false;
        for (double r : rhos)
            if (std::fabs(r) <= kMa1Limit && std::fabs(r) >= std::fabs(rho_ma)) {
                rho_ma = r;
                any_ma = true;
            }
        if (any_ma && rho_ma != 0.0) {
            try {
                const double d =
                    rel_change(ma1_fisher(rho_ma, spec.n), ma1_fisher(rho_ma, spec.n / 2));
                out.warnings.push_back("finite-block check (ma1, rho=" + format_cell(rho_ma) +
                                       "): n vs n/2 relative change " + format_cell(d));
            } catch (const std::exception&) {
            }
        }
    }

    write_table(os, header, rows, {false, true, true, true}, divisor);
    return out;
}

SweepOutcome run_fi_structure(const SweepSpec& spec, std::ostream& matrix_os,
                              std::ostream& profile_os) {
    unit_divisor(spec.units);  // validate; the Fisher matrix itself is unitless
    SweepOutcome out;

    FisherMatrix j;
    try {
        switch (spec.model) {
            case NoiseModel::ar1:
                j = ar1_fisher(spec.rho, spec.n);
                break;
            case NoiseModel::ma1:
                j = ma1_fisher(spec.rho, spec.n);
                break;
            case NoiseModel::custom:
                if (spec.cov_path.empty())
                    throw std::invalid_argument("custom model requires a covariance CSV path");
                j = fisher_gaussian_vector(load_covariance_csv(spec.cov_path));
                break;
        }
    } catch (const IllConditionedError& e) {
        out.rows = 1;
        out.failed_rows = 1;
        out.flagged_rows = 1;
        out.warnings.push_back(e.what());
        return out;
    }

    const std::size_t n = j.size();
    for (std::size_t c = 0; c < n; ++c) {
        if (c) matrix_os << ',';
        matrix_os << 'v' << c;
    }
    matrix_os << '\n';
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < n; ++c) {
            if (c) matrix_os << ',';
            matrix_os << format_cell(j.matrix(i, c));
        }
        matrix_os << '\n';
    }

    profile_os << "k,abs_value\n";
    for (std::size_t k = 0; k < n; ++k)
        profile_os << k << ',' << format_cell(std::fabs(j.matrix(0, k))) << '\n';

    out.rows = n;
    return out;
}

}  // namespace wscap
