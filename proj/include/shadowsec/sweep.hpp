// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "shadowsec/config.hpp"
#include "shadowsec/metrics.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace shadowsec {

struct SweepRow {
    std::string curve;
    std::string variable;
    double value = 0.0;
    Metric metric = Metric::pnsmc;
    Method method = Method::quadrature;
    MetricResult result;
    double wall_ms = 0.0;
    std::string error; // empty on success

    [[nodiscard]] bool ok() const { return error.empty(); }
};

struct RunOptions {
    int threads = 1;             // sweep points evaluated concurrently
    bool record_timing = true;   // false writes wall_ms = 0 for reproducible output
    std::vector<Method> methods; // overrides the sweep methods when nonempty
    std::vector<Metric> metrics; // overrides the sweep metrics when nonempty
};

// One row per (curve, grid value, metric, method), in that nesting order.
// Failures at a point become rows with `error` set; the run continues.
std::vector<SweepRow> run_sweep(const ScenarioConfig& cfg, const RunOptions& opts);

// Rows for the base scenario only (no sweep variable).
std::vector<SweepRow> run_point(const ScenarioConfig& cfg, const RunOptions& opts);

// RFC 4180 CSV. A nonempty `comment` is written first as "# comment".
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows, const std::string& comment = {});

struct CompareTolerances {
    double probability = 5e-4; // |closed_form - quadrature| for pnsmc and sopm
    double capacity = 5e-3;    // same for esmc, bits/s/Hz
    double z = 2.5758;         // Monte Carlo two-sided 99% interval (Wilson for probabilities)
};

struct CompareRow {
    std::string curve;
    std::string variable;
    double value = 0.0;
    Metric metric = Metric::pnsmc;
    double closed_form = 0.0;
    double quadrature = 0.0;
    double monte_carlo = 0.0;
    double mc_stderr = 0.0;
    bool analytic_ok = false;
    bool mc_ok = false;
    std::string error;

    [[nodiscard]] std::string status() const { return !error.empty() ? "error" : (analytic_ok && mc_ok ? "pass" : "fail"); }
};

// Runs all three methods on the sweep and checks pairwise agreement.
std::vector<CompareRow> compare_methods(const ScenarioConfig& cfg, const RunOptions& opts, const CompareTolerances& tol = {});
void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows, const std::string& comment = {});

std::string format_number(double v);

} // namespace shadowsec
