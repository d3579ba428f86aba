#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wscap/sweep.hpp"

namespace {

struct Options {
    std::string out;
    std::string units = "bits";
    std::size_t n = 2000;
    std::string grid;
    std::size_t threads = 0;
    double power = 1.0;
    std::string model = "ar1";
    double rho = -0.3;
    std::string cov;
    std::string config;
};

// One settable key: the CLI option wins over the config file value.
struct ConfigKey {
    std::string name;
    CLI::Option* opt;
    std::function<void(const std::string&)> apply;
};

std::size_t to_size(const std::string& s, const std::string& key) {
    try {
        std::size_t used = 0;
        const unsigned long v = std::stoul(s, &used);
        if (used == s.size()) return v;
    } catch (...) {
    }
    throw std::invalid_argument("config key '" + key + "': expected a nonnegative integer, got '" +
                                s + "'");
}

double to_double(const std::string& s, const std::string& key) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (...) {
    }
    throw std::invalid_argument("config key '" + key + "': expected a number, got '" + s + "'");
}

void apply_config_file(const std::string& path, std::vector<ConfigKey>& keys) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    for (const auto& [key, value] : wscap::parse_config(in)) {
        const auto it = std::find_if(keys.begin(), keys.end(),
                                     [&](const ConfigKey& c) { return c.name == key; });
        if (it == keys.end()) throw std::invalid_argument("unknown config key '" + key + "'");
        if (it->opt != nullptr && it->opt->count() > 0) continue;
        it->apply(value);
    }
}

wscap::NoiseModel parse_model(const std::string& m) {
    if (m == "ar1") return wscap::NoiseModel::ar1;
    if (m == "ma1") return wscap::NoiseModel::ma1;
    if (m == "custom") return wscap::NoiseModel::custom;
    throw std::invalid_argument("model must be ar1, ma1, or custom, got '" + m + "'");
}

std::string profile_path(const std::string& out) {
    const std::size_t slash = out.find_last_of('/');
    const std::size_t dot = out.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return out + "_profile";
    return out.substr(0, dot) + "_profile" + out.substr(dot);
}

int write_output(const std::string& out, const std::string& body) {
    if (out == "-") {
        std::cout << body;
        return 0;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot open output file '" << out << "'\n";
        return 1;
    }
    f << body;
    f.flush();
    if (!f.good()) {
        std::cerr << "error: failed writing '" << out << "'\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weak-signal capacity sweeps for noisy scalar and vector channels"};
    app.require_subcommand(1);

    struct Sub {
        CLI::App* cmd = nullptr;
        Options opt;
        std::vector<ConfigKey> keys;
    };

    const auto add_common = [](Sub& s) {
        Options& o = s.opt;
        CLI::Option* out = s.cmd->add_option("--out", o.out, "output CSV path; '-' for stdout")
                               ->capture_default_str();
        CLI::Option* units = s.cmd->add_option("--units", o.units, "bits or nats")
                                 ->check(CLI::IsMember({"bits", "nats"}))
                                 ->capture_default_str();
        CLI::Option* n =
            s.cmd->add_option("--n", o.n, "block length for the vector-noise computations")
                ->capture_default_str();
        CLI::Option* grid =
            s.cmd->add_option("--grid", o.grid, "sweep grid MIN:MAX:STEP")->capture_default_str();
        CLI::Option* threads =
            s.cmd->add_option("--threads", o.threads, "worker threads; 0 picks the hardware count")
                ->capture_default_str();
        s.cmd->add_option("--config", o.config, "key=value file; command-line flags win");
        s.keys.push_back({"out", out, [&o](const std::string& v) { o.out = v; }});
        s.keys.push_back({"units", units, [&o](const std::string& v) { o.units = v; }});
        s.keys.push_back({"n", n, [&o](const std::string& v) { o.n = to_size(v, "n"); }});
        s.keys.push_back({"grid", grid, [&o](const std::string& v) { o.grid = v; }});
        s.keys.push_back(
            {"threads", threads, [&o](const std::string& v) { o.threads = to_size(v, "threads"); }});
    };

    Sub f2a;
    f2a.opt.out = "fig2a.csv";
    f2a.opt.grid = "-30:10:2";
    f2a.cmd = app.add_subcommand(
        "fig2a", "amplitude-constrained unit-noise Gaussian channel swept over SNR (dB)");
    add_common(f2a);

    Sub f2b;
    f2b.opt.out = "fig2b.csv";
    f2b.opt.grid = "0.75:4.5:0.25";
    f2b.cmd = app.add_subcommand("fig2b",
                                 "gamma channel swept over the shape parameter kappa");
    add_common(f2b);

    Sub f3;
    f3.opt.out = "fig3.csv";
    f3.opt.grid = "-0.9:0.9:0.05";
    f3.cmd = app.add_subcommand(
        "fig3", "capacity-to-power ratio of correlated Gaussian noise swept over rho");
    add_common(f3);
    {
        CLI::Option* pw =
            f3.cmd->add_option("--power", f3.opt.power, "per-use input power budget")
                ->capture_default_str();
        Options& o = f3.opt;
        f3.keys.push_back({"power", pw, [&o](const std::string& v) { o.power = to_double(v, "power"); }});
    }

    Sub fis;
    fis.opt.out = "fi_structure.csv";
    fis.opt.n = 50;
    fis.cmd = app.add_subcommand(
        "fi-structure", "Fisher information matrix of a noise model plus its first-row profile");
    add_common(fis);
    {
        Options& o = fis.opt;
        CLI::Option* model = fis.cmd->add_option("--model", o.model, "noise model")
                                 ->check(CLI::IsMember({"ar1", "ma1", "custom"}))
                                 ->capture_default_str();
        CLI::Option* rho =
            fis.cmd->add_option("--rho", o.rho, "lag-1 noise correlation")->capture_default_str();
        CLI::Option* cov =
            fis.cmd->add_option("--cov", o.cov, "covariance CSV (square, no header) for custom");
        fis.keys.push_back({"model", model, [&o](const std::string& v) { o.model = v; }});
        fis.keys.push_back({"rho", rho, [&o](const std::string& v) { o.rho = to_double(v, "rho"); }});
        fis.keys.push_back({"cov", cov, [&o](const std::string& v) { o.cov = v; }});
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    Sub* active = &fis;
    if (f2a.cmd->parsed()) active = &f2a;
    if (f2b.cmd->parsed()) active = &f2b;
    if (f3.cmd->parsed()) active = &f3;

    try {
        if (!active->opt.config.empty()) apply_config_file(active->opt.config, active->keys);

        wscap::SweepSpec spec;
        spec.units = active->opt.units;
        spec.n = active->opt.n;
        spec.threads = active->opt.threads;
        spec.power = active->opt.power;
        spec.rho = active->opt.rho;
        spec.cov_path = active->opt.cov;
        spec.model = parse_model(active->opt.model);
        if (!active->opt.grid.empty()) spec.grid = wscap::GridSpec::parse(active->opt.grid);

        wscap::SweepOutcome outcome;
        std::ostringstream body;
        std::ostringstream profile;
        if (active == &f2a)
            outcome = wscap::run_fig2a(spec, body);
        else if (active == &f2b)
            outcome = wscap::run_fig2b(spec, body);
        else if (active == &f3)
            outcome = wscap::run_fig3(spec, body);
        else
            outcome = wscap::run_fi_structure(spec, body, profile);

        for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << '\n';

        if (active == &fis) {
            if (active->opt.out == "-") {
                std::cout << body.str() << '\n' << profile.str();
            } else {
                if (const int rc = write_output(active->opt.out, body.str())) return rc;
                if (const int rc = write_output(profile_path(active->opt.out), profile.str()))
                    return rc;
            }
        } else {
            if (const int rc = write_output(active->opt.out, body.str())) return rc;
        }
        return wscap::exit_code_for(outcome);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
