// SPDX-License-Identifier: Apache-2.0
// shadowsec: secrecy metrics for dual-hop multicast relaying over kappa-mu shadowed fading.

#include "shadowsec/config.hpp"
#include "shadowsec/errors.hpp"
#include "shadowsec/montecarlo.hpp"
#include "shadowsec/sweep.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

namespace {

using namespace shadowsec;

enum Exit { kOk = 0, kConfigError = 1, kNumericalError = 2, kToleranceFailure = 3 };

struct Common {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::vector<std::string> methods;
    std::vector<std::string> metrics;
    bool no_timestamp = false;
    int threads = 1;
};

std::string timestamp_comment() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return std::string("generated ") + buf;
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_)
                throw ConfigError(path + ": cannot open output file");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

ScenarioConfig load(const Common& c) {
    ScenarioConfig cfg = load_config(c.config);
    if (c.seed)
        cfg.simulation.seed = *c.seed;
    if (c.trials) {
        if (*c.trials < 1)
            throw ConfigError("--trials: expected an integer >= 1");
        cfg.simulation.trials = *c.trials;
    }
    return cfg;
}

RunOptions run_options(const Common& c) {
    RunOptions o;
    o.threads = c.threads;
    o.record_timing = !c.no_timestamp;
    for (const auto& m : c.methods)
        o.methods.push_back(method_from_string(m));
    for (const auto& m : c.metrics)
        o.metrics.push_back(metric_from_string(m));
    return o;
}

int rows_exit(const std::vector<SweepRow>& rows) {
    for (const auto& r : rows)
        if (!r.ok())
            return kNumericalError;
    return kOk;
}

void add_common(CLI::App* cmd, Common& c, bool needs_config = true) {
    auto* opt = cmd->add_option("--config", c.config, "Scenario JSON file");
    if (needs_config)
        opt->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", c.out, "Output CSV path (default stdout)");
    cmd->add_option("--seed", c.seed, "Monte Carlo seed (overrides the config)");
    cmd->add_option("--trials", c.trials, "Monte Carlo trials (overrides the config)");
    cmd->add_flag("--no-header-timestamp", c.no_timestamp, "Omit the timestamp line and write wall_ms as 0");
    cmd->add_option("--threads", c.threads, "Sweep points evaluated concurrently")->check(CLI::PositiveNumber);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Secrecy metrics for dual-hop multicast relay networks over kappa-mu shadowed fading"};
    app.require_subcommand(1);
    Common common;
    std::optional<double> rate;
    std::string hop = "pq";
    std::uint64_t count = 10000;

    auto* eval = app.add_subcommand("eval", "Evaluate metrics at the base scenario of a config");
    add_common(eval, common);
    eval->add_option("--method", common.methods, "closed_form, quadrature or monte_carlo (repeatable)");
    eval->add_option("--metric", common.metrics, "pnsmc, sopm or esmc (repeatable)");
    eval->add_option("--rate", rate, "Target secrecy rate in bits/s/Hz for sopm");

    auto* sweep = app.add_subcommand("sweep", "Run the sweep of a config and write CSV rows");
    add_common(sweep, common);
    sweep->add_option("--method", common.methods, "Restrict to these methods (repeatable)");
    sweep->add_option("--metric", common.metrics, "Restrict to these metrics (repeatable)");

    auto* compare = app.add_subcommand("compare", "Check closed-form, quadrature and Monte Carlo agreement on a sweep");
    add_common(compare, common);
    compare->add_option("--metric", common.metrics, "Restrict to these metrics (repeatable)");

    auto* sample = app.add_subcommand("sample", "Write raw SNR draws of one hop to CSV");
    add_common(sample, common);
    sample->add_option("--hop", hop, "sp, pq or pw")->check(CLI::IsMember({"sp", "pq", "pw"}));
    sample->add_option("--count", count, "Number of draws")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Help and version requests exit 0; malformed invocations count as config errors.
        return app.exit(e) == 0 ? kOk : kConfigError;
    }

    try {
        ScenarioConfig cfg = load(common);
        RunOptions opts = run_options(common);
        Output out(common.out);
        const std::string comment = common.no_timestamp ? std::string() : timestamp_comment();

        if (eval->parsed()) {
            if (rate) {
                if (!(*rate > 0.0))
                    throw ConfigError("--rate: expected a value > 0");
                cfg.base.target_rate = *rate;
            }
            const auto& metrics = opts.metrics.empty() ? cfg.sweep.metrics : opts.metrics;
            if (std::find(metrics.begin(), metrics.end(), Metric::sopm) != metrics.end() && !(cfg.base.target_rate > 0.0))
                throw ConfigError("sopm needs a target rate (--rate or sweep.target_rate)");
            const auto rows = run_point(cfg, opts);
            write_csv(out.stream(), rows, comment);
            return rows_exit(rows);
        }
        if (sweep->parsed()) {
            const auto rows = run_sweep(cfg, opts);
            write_csv(out.stream(), rows, comment);
            return rows_exit(rows);
        }
        if (compare->parsed()) {
            const auto rows = compare_methods(cfg, opts);
            write_compare_csv(out.stream(), rows, comment);
            int code = kOk;
            for (const auto& r : rows) {
                if (r.status() == "fail")
                    return kToleranceFailure;
                if (r.status() == "error")
                    code = kNumericalError;
            }
            return code;
        }
        if (sample->parsed()) {
            const NetworkConfig net = cfg.base.resolved();
            const FadingParams& p = hop == "sp" ? net.hop_sp : hop == "pq" ? net.hop_pq : net.hop_pw;
            const int antennas = hop == "sp" ? 1 : hop == "pq" ? net.antennas_rx : net.antennas_eve;
            const auto draws = sample_hop(p, antennas, count, cfg.simulation.seed, cfg.simulation.threads);
            std::ostream& os = out.stream();
            if (!comment.empty())
                os << "# " << comment << "\r\n";
            os << "index,snr\r\n";
            for (std::size_t i = 0; i < draws.size(); ++i)
                os << i << ',' << format_number(draws[i]) << "\r\n";
            return kOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumericalError;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kNumericalError;
    }
    return kOk;
}
