// SPDX-License-Identifier: Apache-2.0
#include "shadowsec/config.hpp"

#include "shadowsec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <regex>
#include <set>

namespace shadowsec {

using nlohmann::json;

namespace {

const std::set<std::string> kCountKeys = {"relays", "receivers", "eavesdroppers", "antennas_rx", "antennas_eve"};
const std::set<std::string> kHopNames = {"sp", "pq", "pw"};

[[noreturn]] void fail(const std::string& key, const std::string& what) { throw ConfigError(key + ": " + what); }

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object())
        fail(where, "expected an object");
    for (const auto& [k, v] : obj.items()) {
        if (k == "comment")
            continue;
        if (!allowed.count(k))
            fail(where.empty() ? k : where + "." + k, "unknown key");
    }
}

double get_number(const json& v, const std::string& key) {
    if (!v.is_number())
        fail(key, "expected a number");
    return v.get<double>();
}

int get_count(const json& v, const std::string& key) {
    const double d = get_number(v, key);
    if (d != std::floor(d) || d < 1 || d > 1e6)
        fail(key, "expected an integer >= 1");
    return static_cast<int>(d);
}

double get_shadowing(const json& v, const std::string& key) {
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf" || s == "infinity" || s == "INF")
            return kInfiniteShadowing;
        fail(key, "expected a number > 0 or \"inf\"");
    }
    const double m = get_number(v, key);
    if (!(m > 0.0))
        fail(key, "expected m > 0 or \"inf\"");
    return m;
}

FadingParams& hop_by_name(NetworkConfig& net, const std::string& name) {
    if (name == "sp")
        return net.hop_sp;
    if (name == "pq")
        return net.hop_pq;
    return net.hop_pw;
}

void apply_preset(FadingParams& hop, const std::string& spec) {
    const FadingParams shape = preset_params(spec);
    hop.kappa = shape.kappa;
    hop.mu = shape.mu;
    hop.m = shape.m;
}

void parse_hop(const json& obj, const std::string& where, FadingParams& hop, bool& snr_given) {
    check_keys(obj, where, {"preset", "kappa", "mu", "m", "avg_snr_db"});
    if (obj.contains("preset")) {
        if (!obj["preset"].is_string())
            fail(where + ".preset", "expected a string");
        apply_preset(hop, obj["preset"].get<std::string>());
    }
    if (obj.contains("kappa"))
        hop.kappa = get_number(obj["kappa"], where + ".kappa");
    if (obj.contains("mu"))
        hop.mu = get_number(obj["mu"], where + ".mu");
    if (obj.contains("m"))
        hop.m = get_shadowing(obj["m"], where + ".m");
    if (obj.contains("avg_snr_db")) {
        hop.avg_snr = db_to_linear(get_number(obj["avg_snr_db"], where + ".avg_snr_db"));
        snr_given = true;
    }
    try {
        hop.validate();
    } catch (const ConfigError& e) {
        fail(where, e.what());
    }
}

std::vector<std::string> get_string_list(const json& v, const std::string& key) {
    if (!v.is_array() || v.empty())
        fail(key, "expected a nonempty array of strings");
    std::vector<std::string> out;
    for (const auto& e : v) {
        if (!e.is_string())
            fail(key, "expected strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

template <typename T, typename Parse>
std::vector<T> parse_unique(const json& v, const std::string& key, Parse parse) {
    std::vector<T> out;
    for (const auto& s : get_string_list(v, key)) {
        T item;
        try {
            item = parse(s);
        } catch (const ConfigError& e) {
            fail(key, e.what());
        }
        if (std::find(out.begin(), out.end(), item) != out.end())
            fail(key, "duplicate entry '" + s + "'");
        out.push_back(item);
    }
    return out;
}

} // namespace

FadingParams preset_params(const std::string& spec) {
    static const std::regex pattern(R"(^\s*([a-z_]+)\s*(?:\((.*)\))?\s*$)");
    static const std::regex arg(R"(^\s*([A-Za-z]+)\s*=\s*([^,\s]+)\s*$)");
    std::smatch m;
    if (!std::regex_match(spec, m, pattern))
        throw ConfigError("malformed preset '" + spec + "'");
    const std::string name = m[1];
    std::map<std::string, double> args;
    if (m[2].matched) {
        const std::string body = m[2];
        std::size_t start = 0;
        while (start <= body.size()) {
            const std::size_t comma = body.find(',', start);
            const std::string piece = body.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            std::smatch a;
            if (!std::regex_match(piece, a, arg))
                throw ConfigError("malformed preset argument '" + piece + "' in '" + spec + "'");
            const std::string value = a[2];
            double d = 0.0;
            if (value == "inf")
                d = kInfiniteShadowing;
            else {
                std::size_t used = 0;
                try {
                    d = std::stod(value, &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used != value.size())
                    throw ConfigError("preset argument '" + piece + "' is not a number");
            }
            args[a[1]] = d;
            if (comma == std::string::npos)
                break;
            start = comma + 1;
        }
    }
    auto take = [&](const std::string& key) {
        auto it = args.find(key);
        if (it == args.end())
            throw ConfigError("preset '" + name + "' needs argument " + key);
        const double v = it->second;
        args.erase(it);
        return v;
    };
    FadingParams p;
    if (name == "one_sided_gaussian") {
        p = {0.0, 0.5, kInfiniteShadowing, 1.0};
    } else if (name == "rayleigh") {
        p = {0.0, 1.0, kInfiniteShadowing, 1.0};
    } else if (name == "nakagami") {
        p = {0.0, take("m"), kInfiniteShadowing, 1.0};
    } else if (name == "rician") {
        p = {take("K"), 1.0, kInfiniteShadowing, 1.0};
    } else if (name == "shadowed_rician") {
        const double k = take("K");
        p = {k, 1.0, take("m"), 1.0};
    } else {
        throw ConfigError("unknown preset '" + name +
                          "' (expected one_sided_gaussian, rayleigh, nakagami(m=..), rician(K=..), shadowed_rician(K=..,m=..))");
    }
    if (!args.empty())
        throw ConfigError("preset '" + name + "' does not take argument " + args.begin()->first);
    p.validate();
    return p;
}

bool is_count_variable(const std::string& key) { return kCountKeys.count(key) > 0; }

bool is_sweep_variable(const std::string& key) {
    if (is_count_variable(key) || key == "target_rate")
        return true;
    static const std::regex hop_key(R"(^(snr_(sp|pq|pw)_db|(kappa|mu|m)_(sp|pq|pw))$)");
    return std::regex_match(key, hop_key);
}

void Scenario::apply(const std::string& key, const json& value) {
    if (key == "relays")
        net.relays = get_count(value, key);
    else if (key == "receivers")
        net.receivers = get_count(value, key);
    else if (key == "eavesdroppers")
        net.eavesdroppers = get_count(value, key);
    else if (key == "antennas_rx")
        net.antennas_rx = get_count(value, key);
    else if (key == "antennas_eve")
        net.antennas_eve = get_count(value, key);
    else if (key == "target_rate") {
        target_rate = get_number(value, key);
        if (!(target_rate > 0.0))
            fail(key, "expected a value > 0");
    } else if (key == "tie_first_hop") {
        if (!value.is_boolean())
            fail(key, "expected a boolean");
        tie_first_hop = value.get<bool>();
    } else if (key == "preset") {
        if (!value.is_string())
            fail(key, "expected a string");
        for (const auto& h : kHopNames)
            apply_preset(hop_by_name(net, h), value.get<std::string>());
    } else {
        static const std::regex hop_key(R"(^(snr|kappa|mu|m|preset)_(sp|pq|pw)(_db)?$)");
        std::smatch m;
        if (!std::regex_match(key, m, hop_key) || (m[1] == "snr") != m[3].matched)
            fail(key, "unknown setting");
        FadingParams& hop = hop_by_name(net, m[2]);
        const std::string field = m[1];
        if (field == "snr") {
            if (m[2] == "sp" && tie_first_hop)
                fail(key, "cannot be set while tie_first_hop is true");
            hop.avg_snr = db_to_linear(get_number(value, key));
        } else if (field == "kappa") {
            hop.kappa = get_number(value, key);
        } else if (field == "mu") {
            hop.mu = get_number(value, key);
        } else if (field == "m") {
            hop.m = get_shadowing(value, key);
        } else {
            if (!value.is_string())
                fail(key, "expected a string");
            apply_preset(hop, value.get<std::string>());
        }
        try {
            hop.validate();
        } catch (const ConfigError& e) {
            fail(key, e.what());
        }
    }
}

NetworkConfig Scenario::resolved() const {
    NetworkConfig out = net;
    if (tie_first_hop)
        out.hop_sp.avg_snr = out.hop_pq.avg_snr;
    out.validate();
    return out;
}

EvalOptions ScenarioConfig::eval_options() const {
    EvalOptions o;
    o.series = series;
    o.quadrature = quadrature;
    o.simulation = simulation;
    return o;
}

ScenarioConfig parse_config(const json& doc) {
    ScenarioConfig cfg;
    check_keys(doc, "", {"network", "series", "quadrature", "simulation", "sweep"});
    if (!doc.contains("network"))
        fail("network", "required section missing");

    const json& n = doc["network"];
    check_keys(n, "network",
               {"relays", "receivers", "eavesdroppers", "antennas_rx", "antennas_eve", "preset", "tie_first_hop", "hop_sp",
                "hop_pq", "hop_pw"});
    Scenario& s = cfg.base;
    for (const char* k : {"relays", "receivers", "eavesdroppers", "antennas_rx", "antennas_eve"})
        if (n.contains(k))
            s.apply(k, n[k]);
    if (n.contains("tie_first_hop"))
        s.apply("tie_first_hop", n["tie_first_hop"]);
    if (n.contains("preset")) {
        if (!n["preset"].is_string())
            fail("network.preset", "expected a string");
        try {
            s.apply("preset", n["preset"]);
        } catch (const ConfigError& e) {
            fail("network.preset", e.what());
        }
    }
    std::map<std::string, bool> snr_given;
    for (const auto& h : kHopNames) {
        const std::string key = "hop_" + h;
        snr_given[h] = false;
        if (n.contains(key))
            parse_hop(n[key], "network." + key, hop_by_name(s.net, h), snr_given[h]);
    }
    if (s.tie_first_hop && snr_given["sp"])
        fail("network.hop_sp.avg_snr_db", "must be omitted when tie_first_hop is true");

    if (doc.contains("series")) {
        const json& j = doc["series"];
        check_keys(j, "series", {"depth", "prune", "max_depth", "composition_budget", "expansion", "inf_m_surrogate"});
        if (j.contains("depth"))
            cfg.series.depth = get_count(j["depth"], "series.depth");
        if (j.contains("prune"))
            cfg.series.prune = get_number(j["prune"], "series.prune");
        if (j.contains("max_depth"))
            cfg.series.max_depth = get_count(j["max_depth"], "series.max_depth");
        if (j.contains("composition_budget"))
            cfg.series.composition_budget = static_cast<std::uint64_t>(get_number(j["composition_budget"], "series.composition_budget"));
        if (j.contains("expansion")) {
            const std::string e = j["expansion"].is_string() ? j["expansion"].get<std::string>() : "";
            if (e == "grouped")
                cfg.series.expansion = ExpansionStrategy::grouped;
            else if (e == "enumerate")
                cfg.series.expansion = ExpansionStrategy::enumerate;
            else
                fail("series.expansion", "expected \"grouped\" or \"enumerate\"");
        }
        if (j.contains("inf_m_surrogate"))
            cfg.series.inf_m_surrogate = get_number(j["inf_m_surrogate"], "series.inf_m_surrogate");
    }
    cfg.series.validate();

    if (doc.contains("quadrature")) {
        const json& j = doc["quadrature"];
        check_keys(j, "quadrature", {"abs_tol", "rel_tol", "max_depth"});
        if (j.contains("abs_tol"))
            cfg.quadrature.abs_tol = get_number(j["abs_tol"], "quadrature.abs_tol");
        if (j.contains("rel_tol"))
            cfg.quadrature.rel_tol = get_number(j["rel_tol"], "quadrature.rel_tol");
        if (j.contains("max_depth"))
            cfg.quadrature.max_depth = static_cast<unsigned>(get_count(j["max_depth"], "quadrature.max_depth"));
        if (!(cfg.quadrature.abs_tol > 0.0) || !(cfg.quadrature.rel_tol > 0.0))
            fail("quadrature", "tolerances must be > 0");
    }

    if (doc.contains("simulation")) {
        const json& j = doc["simulation"];
        check_keys(j, "simulation", {"trials", "seed", "mode", "threads"});
        if (j.contains("trials")) {
            const double t = get_number(j["trials"], "simulation.trials");
            if (t < 1 || t != std::floor(t))
                fail("simulation.trials", "expected an integer >= 1");
            cfg.simulation.trials = static_cast<std::uint64_t>(t);
        }
        if (j.contains("seed")) {
            if (!j["seed"].is_number_unsigned())
                fail("simulation.seed", "expected a nonnegative integer");
            cfg.simulation.seed = j["seed"].get<std::uint64_t>();
        }
        if (j.contains("mode")) {
            if (!j["mode"].is_string())
                fail("simulation.mode", "expected a string");
            try {
                cfg.simulation.mode = sim_mode_from_string(j["mode"].get<std::string>());
            } catch (const ConfigError& e) {
                fail("simulation.mode", e.what());
            }
        }
        if (j.contains("threads")) {
            const double t = get_number(j["threads"], "simulation.threads");
            if (t < 0 || t != std::floor(t))
                fail("simulation.threads", "expected an integer >= 0");
            cfg.simulation.threads = static_cast<int>(t);
        }
    }

    if (doc.contains("sweep")) {
        cfg.has_sweep = true;
        const json& j = doc["sweep"];
        SweepSpec& sw = cfg.sweep;
        check_keys(j, "sweep", {"variable", "grid", "metrics", "methods", "target_rate", "curves"});
        if (!j.contains("variable") || !j["variable"].is_string())
            fail("sweep.variable", "required string");
        sw.variable = j["variable"].get<std::string>();
        if (!is_sweep_variable(sw.variable))
            fail("sweep.variable", "'" + sw.variable + "' is not a sweepable setting");
        if (sw.variable == "snr_sp_db" && s.tie_first_hop)
            fail("sweep.variable", "snr_sp_db cannot be swept while tie_first_hop is true");
        if (!j.contains("grid") || !j["grid"].is_array() || j["grid"].empty())
            fail("sweep.grid", "expected a nonempty array of numbers");
        for (const auto& v : j["grid"])
            sw.grid.push_back(get_number(v, "sweep.grid"));
        const bool increasing = sw.grid.size() < 2 || sw.grid[1] > sw.grid[0];
        for (std::size_t i = 1; i < sw.grid.size(); ++i)
            if (increasing ? !(sw.grid[i] > sw.grid[i - 1]) : !(sw.grid[i] < sw.grid[i - 1]))
                fail("sweep.grid", "values must be strictly monotone");
        if (is_count_variable(sw.variable))
            for (double v : sw.grid)
                if (v != std::floor(v) || v < 1)
                    fail("sweep.grid", "count variable '" + sw.variable + "' needs integer values >= 1");
        if (j.contains("metrics"))
            sw.metrics = parse_unique<Metric>(j["metrics"], "sweep.metrics", metric_from_string);
        if (j.contains("methods"))
            sw.methods = parse_unique<Method>(j["methods"], "sweep.methods", method_from_string);
        if (j.contains("target_rate")) {
            sw.target_rate = get_number(j["target_rate"], "sweep.target_rate");
            if (!(sw.target_rate > 0.0))
                fail("sweep.target_rate", "expected a value > 0");
            s.target_rate = sw.target_rate;
        }
        if (j.contains("curves")) {
            const json& c = j["curves"];
            if (!c.is_array() || c.empty())
                fail("sweep.curves", "expected a nonempty array");
            std::set<std::string> labels;
            for (std::size_t i = 0; i < c.size(); ++i) {
                const std::string where = "sweep.curves[" + std::to_string(i) + "]";
                check_keys(c[i], where, {"label", "overrides"});
                CurveSpec curve;
                if (!c[i].contains("label") || !c[i]["label"].is_string())
                    fail(where + ".label", "required string");
                curve.label = c[i]["label"].get<std::string>();
                if (!labels.insert(curve.label).second)
                    fail(where + ".label", "duplicate label '" + curve.label + "'");
                if (c[i].contains("overrides")) {
                    curve.overrides = c[i]["overrides"];
                    if (!curve.overrides.is_object())
                        fail(where + ".overrides", "expected an object");
                }
                // Validate overrides against a scratch copy so errors name the curve.
                Scenario probe = s;
                for (const auto& [k, v] : curve.overrides.items()) {
                    if (k == "comment")
                        continue;
                    if (k == sw.variable)
                        fail(where + ".overrides." + k, "conflicts with the sweep variable");
                    try {
                        probe.apply(k, v);
                    } catch (const ConfigError& e) {
                        fail(where + ".overrides", e.what());
                    }
                }
                sw.curves.push_back(std::move(curve));
            }
        } else {
            sw.curves.push_back({"base", json::object()});
        }
        const bool wants_sopm = std::find(sw.metrics.begin(), sw.metrics.end(), Metric::sopm) != sw.metrics.end();
        if (wants_sopm && sw.variable != "target_rate" && !(s.target_rate > 0.0)) {
            bool all_curves_set = true;
            for (const auto& c : sw.curves)
                all_curves_set = all_curves_set && c.overrides.contains("target_rate");
            if (!all_curves_set)
                fail("sweep.target_rate", "required when sopm is among the metrics");
        }
        if (sw.variable == "target_rate")
            for (double v : sw.grid)
                if (!(v > 0.0))
                    fail("sweep.grid", "target_rate values must be > 0");
    }
    try {
        static_cast<void>(s.resolved());
    } catch (const ConfigError& e) {
        fail("network", e.what());
    }
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path + ": cannot open config file");
    json doc;
    try {
        doc = json::parse(in, nullptr, true, false);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": malformed JSON: " + e.what());
    }
    return parse_config(doc);
}

} // namespace shadowsec
