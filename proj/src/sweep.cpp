// SPDX-License-Identifier: Apache-2.0
#include "shadowsec/sweep.hpp"

#include "shadowsec/errors.hpp"
#include "shadowsec/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <thread>

namespace shadowsec {

namespace {

struct Task {
    std::size_t curve = 0;
    std::size_t point = 0;
    Method method = Method::quadrature;
};

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::string join_warnings(const std::vector<std::string>& w) {
    std::string out;
    for (const auto& s : w) {
        if (!out.empty())
            out += "; ";
        out += s;
    }
    return out;
}

template <typename Work>
void run_pool(std::size_t count, int threads, Work&& work) {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
                work(i);
        });
    for (auto& t : pool)
        t.join();
}

std::vector<SweepRow> make_rows(const std::string& curve, const std::string& variable, double value,
                                const std::vector<Metric>& metrics, Method method, double ms, const std::string& error,
                                const std::vector<MetricResult>& results) {
    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < metrics.size(); ++i) {
        SweepRow row;
        row.curve = curve;
        row.variable = variable;
        row.value = value;
        row.metric = metrics[i];
        row.method = method;
        row.wall_ms = ms;
        row.error = error;
        if (error.empty()) {
            row.result = results[i];
        } else {
            row.result.metric = metrics[i];
            row.result.method = method;
            row.result.value = std::numeric_limits<double>::quiet_NaN();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<SweepRow> evaluate_task(const ScenarioConfig& cfg, const Scenario& scenario, const std::string& curve,
                                    const std::string& variable, double value, const std::vector<Metric>& metrics,
                                    Method method, bool timing) {
    const auto start = std::chrono::steady_clock::now();
    std::string error;
    std::vector<MetricResult> results;
    try {
        const NetworkConfig net = scenario.resolved();
        results = evaluate_metrics(net, metrics, scenario.target_rate, method, cfg.eval_options());
    } catch (const std::exception& e) {
        error = e.what();
    }
    const double ms =
        timing ? std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count() : 0.0;
    return make_rows(curve, variable, value, metrics, method, ms, error, results);
}

} // namespace

std::string format_number(double v) {
    if (std::isnan(v))
        return "";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& cfg, const RunOptions& opts) {
    if (!cfg.has_sweep)
        throw ConfigError("sweep: section missing from config");
    const SweepSpec& sw = cfg.sweep;
    const std::vector<Method>& methods = opts.methods.empty() ? sw.methods : opts.methods;
    const std::vector<Metric>& metrics = opts.metrics.empty() ? sw.metrics : opts.metrics;

    std::vector<Task> tasks;
    for (std::size_t c = 0; c < sw.curves.size(); ++c)
        for (std::size_t p = 0; p < sw.grid.size(); ++p)
            for (Method m : methods)
                tasks.push_back({c, p, m});

    std::vector<std::vector<SweepRow>> slots(tasks.size());
    run_pool(tasks.size(), opts.threads, [&](std::size_t i) {
        const Task& t = tasks[i];
        const CurveSpec& curve = sw.curves[t.curve];
        const double value = sw.grid[t.point];
        Scenario scenario = cfg.base;
        try {
            for (const auto& [k, v] : curve.overrides.items())
                if (k != "comment")
                    scenario.apply(k, v);
            scenario.apply(sw.variable, nlohmann::json(value));
        } catch (const std::exception& e) {
            slots[i] = make_rows(curve.label, sw.variable, value, metrics, t.method, 0.0, e.what(), {});
            return;
        }
        slots[i] = evaluate_task(cfg, scenario, curve.label, sw.variable, value, metrics, t.method, opts.record_timing);
    });

    // Order: curve, grid value, metric, method.
    std::vector<SweepRow> rows;
    const std::size_t per_point = methods.size();
    for (std::size_t c = 0; c < sw.curves.size(); ++c)
        for (std::size_t p = 0; p < sw.grid.size(); ++p) {
            const std::size_t base = (c * sw.grid.size() + p) * per_point;
            for (std::size_t k = 0; k < metrics.size(); ++k)
                for (std::size_t m = 0; m < per_point; ++m)
                    rows.push_back(slots[base + m][k]);
        }
    return rows;
}

std::vector<SweepRow> run_point(const ScenarioConfig& cfg, const RunOptions& opts) {
    const std::vector<Method>& methods = opts.methods.empty() ? cfg.sweep.methods : opts.methods;
    const std::vector<Metric>& metrics = opts.metrics.empty() ? cfg.sweep.metrics : opts.metrics;
    std::vector<std::vector<SweepRow>> slots(methods.size());
    run_pool(methods.size(), opts.threads, [&](std::size_t i) {
        slots[i] = evaluate_task(cfg, cfg.base, "base", "none", std::numeric_limits<double>::quiet_NaN(), metrics,
                                 methods[i], opts.record_timing);
    });
    std::vector<SweepRow> rows;
    for (std::size_t k = 0; k < metrics.size(); ++k)
        for (std::size_t m = 0; m < methods.size(); ++m)
            rows.push_back(slots[m][k]);
    return rows;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows, const std::string& comment) {
    if (!comment.empty())
        out << "# " << comment << "\r\n";
    out << "curve,variable,value,metric,method,result,result_positive,stderr_or_tail,terms_used,wall_ms,error\r\n";
    for (const auto& r : rows) {
        std::string note = r.error;
        if (note.empty())
            note = join_warnings(r.result.warnings);
        out << csv_field(r.curve) << ',' << csv_field(r.variable) << ',' << format_number(r.value) << ','
            << to_string(r.metric) << ',' << to_string(r.method) << ',' << (r.ok() ? format_number(r.result.value) : "")
            << ',' << (r.ok() ? format_number(r.result.value_positive) : "") << ','
            << (r.ok() ? format_number(r.result.tail_estimate) : "") << ',' << (r.ok() ? std::to_string(r.result.terms_used) : "")
            << ',' << format_number(std::round(r.wall_ms * 1000.0) / 1000.0) << ',' << csv_field(r.ok() ? note : "error: " + note)
            << "\r\n";
    }
}

std::vector<CompareRow> compare_methods(const ScenarioConfig& cfg, const RunOptions& opts, const CompareTolerances& tol) {
    RunOptions all = opts;
    all.methods = {Method::closed_form, Method::quadrature, Method::monte_carlo};
    const std::vector<SweepRow> rows = run_sweep(cfg, all);
    std::vector<CompareRow> out;
    for (std::size_t i = 0; i + 2 < rows.size(); i += 3) {
        const SweepRow& cf = rows[i];
        const SweepRow& qd = rows[i + 1];
        const SweepRow& mc = rows[i + 2];
        CompareRow c;
        c.curve = cf.curve;
        c.variable = cf.variable;
        c.value = cf.value;
        c.metric = cf.metric;
        c.closed_form = cf.result.value;
        c.quadrature = qd.result.value;
        c.monte_carlo = mc.result.value;
        c.mc_stderr = mc.result.tail_estimate;
        for (const SweepRow* r : {&cf, &qd, &mc})
            if (!r->ok() && c.error.empty())
                c.error = to_string(r->method) + ": " + r->error;
        if (c.error.empty()) {
            const double limit = c.metric == Metric::esmc ? tol.capacity : tol.probability;
            c.analytic_ok = std::fabs(c.closed_form - c.quadrature) < limit;
            if (c.metric == Metric::esmc) {
                const double band = tol.z * c.mc_stderr;
                c.mc_ok = std::fabs(c.monte_carlo - c.quadrature) <= band && std::fabs(c.monte_carlo - c.closed_form) <= band;
            } else {
                const Interval ci = wilson_interval(c.monte_carlo, cfg.simulation.trials, tol.z);
                c.mc_ok = ci.contains(c.quadrature) && ci.contains(c.closed_form);
            }
        }
        out.push_back(std::move(c));
    }
    return out;
}

void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows, const std::string& comment) {
    if (!comment.empty())
        out << "# " << comment << "\r\n";
    out << "curve,variable,value,metric,closed_form,quadrature,monte_carlo,mc_stderr,analytic_delta,mc_z,status,error\r\n";
    for (const auto& r : rows) {
        const bool ok = r.error.empty();
        const double delta = r.closed_form - r.quadrature;
        const double z = r.mc_stderr > 0.0 ? (r.monte_carlo - r.quadrature) / r.mc_stderr : 0.0;
        out << csv_field(r.curve) << ',' << csv_field(r.variable) << ',' << format_number(r.value) << ','
            << to_string(r.metric) << ',' << (ok ? format_number(r.closed_form) : "") << ','
            << (ok ? format_number(r.quadrature) : "") << ',' << (ok ? format_number(r.monte_carlo) : "") << ','
            << (ok ? format_number(r.mc_stderr) : "") << ',' << (ok ? format_number(delta) : "") << ','
            << (ok ? format_number(z) : "") << ',' << r.status() << ',' << csv_field(r.error) << "\r\n";
    }
}

} // namespace shadowsec
