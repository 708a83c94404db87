// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "shadowsec/metrics.hpp"
#include "shadowsec/montecarlo.hpp"
#include "shadowsec/network.hpp"
#include "shadowsec/quadrature.hpp"
#include "shadowsec/series_config.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace shadowsec {

// Shape triple of a named special case; avg_snr is left at 1.
//   one_sided_gaussian, rayleigh, nakagami(m=M), rician(K=K), shadowed_rician(K=K,m=M)
FadingParams preset_params(const std::string& spec);

struct CurveSpec {
    std::string label;
    nlohmann::json overrides = nlohmann::json::object();
};

struct SweepSpec {
    std::string variable;
    std::vector<double> grid;
    std::vector<Metric> metrics{Metric::pnsmc, Metric::sopm, Metric::esmc};
    std::vector<Method> methods{Method::quadrature};
    double target_rate = 0.0; // 0 means unset
    std::vector<CurveSpec> curves;
};

// Everything a sweep point needs: the mutable scenario state.
struct Scenario {
    NetworkConfig net;
    double target_rate = 0.0;
    bool tie_first_hop = false; // source -> relay average SNR follows the relay -> receiver one

    // Settings as accepted in sweep variables and curve overrides:
    //   relays receivers eavesdroppers antennas_rx antennas_eve target_rate
    //   snr_{sp,pq,pw}_db kappa_{..} mu_{..} m_{..} preset preset_{..}
    void apply(const std::string& key, const nlohmann::json& value);
    // Network with the tie rule applied, validated.
    [[nodiscard]] NetworkConfig resolved() const;
};

bool is_sweep_variable(const std::string& key);
bool is_count_variable(const std::string& key);

struct ScenarioConfig {
    Scenario base;
    SweepSpec sweep;
    bool has_sweep = false;
    SeriesConfig series;
    QuadratureOptions quadrature;
    SimPlan simulation;

    [[nodiscard]] EvalOptions eval_options() const;
};

ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig load_config(const std::string& path);

} // namespace shadowsec
