#include "shadowsec/config.hpp"
#include "shadowsec/sweep.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

using namespace shadowsec;
using nlohmann::json;

namespace {

std::string config_path(const std::string& name) { return std::string(SHADOWSEC_CONFIG_DIR) + "/" + name + ".json"; }

std::string csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    write_csv(os, rows);
    return os.str();
}

ScenarioConfig small_mc_sweep() {
    auto cfg = load_config(config_path("fig6_sopm_rate"));
    cfg.sweep.methods = {Method::closed_form, Method::quadrature, Method::monte_carlo};
    cfg.sweep.metrics = {Metric::pnsmc, Metric::sopm, Metric::esmc};
    cfg.simulation.trials = 20'000;
    cfg.simulation.seed = 7;
    cfg.sweep.curves.resize(2);
    return cfg;
}

} // namespace

TEST_CASE("csv header and row order") {
    auto cfg = small_mc_sweep();
    RunOptions opts;
    opts.record_timing = false;
    const auto rows = run_sweep(cfg, opts);
    REQUIRE(rows.size() == 2 * cfg.sweep.grid.size() * 3 * 3);
    std::size_t i = 0;
    for (const auto& curve : cfg.sweep.curves)
        for (double v : cfg.sweep.grid)
            for (Metric metric : cfg.sweep.metrics)
                for (Method method : cfg.sweep.methods) {
                    const auto& r = rows[i++];
                    CHECK(r.curve == curve.label);
                    CHECK(r.value == v);
                    CHECK(r.metric == metric);
                    CHECK(r.method == method);
                    CHECK(r.ok());
                    CHECK(r.wall_ms == 0.0);
                }
    const std::string text = csv(rows);
    CHECK(text.rfind("curve,variable,value,metric,method,result,result_positive,stderr_or_tail,terms_used,wall_ms,error\r\n", 0) ==
          0);
    std::ostringstream with_comment;
    write_csv(with_comment, rows, "generated now");
    CHECK(with_comment.str().rfind("# generated now\r\n", 0) == 0);
}

TEST_CASE("csv output is identical across thread counts") {
    const auto cfg = small_mc_sweep();
    RunOptions one;
    one.record_timing = false;
    RunOptions many = one;
    many.threads = 4;
    const std::string a = csv(run_sweep(cfg, one));
    const std::string b = csv(run_sweep(cfg, many));
    CHECK(a == b);
    CHECK(a == csv(run_sweep(cfg, one)));
}

TEST_CASE("fig-7 sopm falls with more relays") {
    const auto cfg = load_config(config_path("fig7_sopm_relays"));
    RunOptions opts;
    opts.methods = {Method::quadrature};
    const auto rows = run_sweep(cfg, opts);
    const std::size_t n = cfg.sweep.grid.size();
    REQUIRE(rows.size() == 4 * n);
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t c = 1; c < 4; ++c) {
            CAPTURE(cfg.sweep.grid[p]);
            CAPTURE(c);
            REQUIRE(rows[c * n + p].ok());
            CHECK(rows[c * n + p].result.value < rows[(c - 1) * n + p].result.value);
        }
}

TEST_CASE("fig-10 presets give four distinct esmc curves") {
    const auto cfg = load_config(config_path("fig10_esmc_presets"));
    RunOptions opts;
    opts.methods = {Method::quadrature};
    const auto rows = run_sweep(cfg, opts);
    const std::size_t n = cfg.sweep.grid.size();
    REQUIRE(rows.size() == 4 * n);
    // Curves: rayleigh, nakagami, rician, shadowed_rician.
    CHECK(cfg.sweep.curves[3].label == "shadowed_rician");
    CHECK(cfg.sweep.curves[2].label == "rician");
    CHECK(std::fabs(rows[3 * n].result.value - rows[2 * n].result.value) > 0.01);
}

TEST_CASE("single point on the symmetric network") {
    auto cfg = load_config(config_path("symmetric"));
    RunOptions opts;
    opts.metrics = {Metric::pnsmc};
    opts.methods = {Method::closed_form, Method::quadrature};
    const auto rows = run_point(cfg, opts);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(r.ok());
        CHECK(std::fabs(r.result.value - 0.5) <= 0.002);
        CHECK(r.variable == "none");
    }
}

TEST_CASE("point failures become error rows") {
    auto cfg = load_config(config_path("fig3_pnsmc_mu"));
    cfg.sweep.curves = {{"bad", json{{"mu_pq", 1.25}}}};
    RunOptions opts;
    opts.methods = {Method::closed_form, Method::quadrature};
    const auto rows = run_sweep(cfg, opts);
    REQUIRE(rows.size() == 2 * cfg.sweep.grid.size());
    CHECK_FALSE(rows[0].ok());
    CHECK(rows[1].ok());
    const std::string text = csv(rows);
    CHECK(text.find("error: ") != std::string::npos);
}

TEST_CASE("compare reports agreement") {
    auto cfg = small_mc_sweep();
    cfg.simulation.trials = 200'000;
    cfg.sweep.curves.resize(1);
    cfg.sweep.grid = {0.0, 10.0};
    RunOptions opts;
    opts.record_timing = false;
    const auto rows = compare_methods(cfg, opts);
    REQUIRE(rows.size() == 2 * 3);
    for (const auto& r : rows) {
        CAPTURE(to_string(r.metric));
        CHECK(r.status() == "pass");
        CHECK(r.mc_stderr > 0.0);
    }
    CompareTolerances strict;
    strict.z = 0.0;
    const auto tight = compare_methods(cfg, opts, strict);
    bool any_fail = false;
    for (const auto& r : tight)
        any_fail = any_fail || r.status() == "fail";
    CHECK(any_fail);
    std::ostringstream os;
    write_compare_csv(os, rows);
    CHECK(os.str().find(",pass,") != std::string::npos);
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(std::nan("")).empty());
    CHECK(format_number(-INFINITY) == "-inf");
}
