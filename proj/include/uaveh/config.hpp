#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "uaveh/channel.hpp"

namespace uaveh {

/// Malformed config text (syntax, wrong value type, unknown key).
class ConfigParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Config file could not be read.
class ConfigIoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Well-formed config that violates a parameter invariant.
class ConfigValidationError : public std::runtime_error {
public:
    ConfigValidationError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// Full parameterization of one network scenario.
///
/// Tier bookkeeping: tier 0 is the typical UE's cluster-center UAV, tiers
/// 1..M are the PPP height groups. `heights[j-1]` and `tier_densities[j-1]`
/// describe tier j; `tx_power_dbm[j]` is tier j's power (index 0 = tier 0).
/// The single-height network is M = 1.
struct ScenarioConfig {
    double uav_density = 1e-4;          // UAVs / m^2
    double cluster_sigma = 10.0;        // m
    std::vector<double> heights{50.0};  // m
    std::vector<double> tier_densities{1e-4};
    std::vector<double> tx_power_dbm{37.0, 37.0};
    PathLossExponents alphas{2.0, 4.0};
    LosModel los_model = LosModel::high_altitude();
    Orientation orientation = Orientation::HH;
    double energy_threshold_dbm = 0.0;
    double rectifier_efficiency = 1.0;
    int alzer_terms = 5;
    double quadrature_rel_tol = 1e-7;
    int cluster_tier = 1;  // height group hosting the typical UE's cluster center
    long mc_trials = 100000;
    double mc_window_radius_m = 2000.0;
    std::uint64_t rng_seed = 1;

    int num_tiers() const { return static_cast<int>(heights.size()); }

    /// Height of tier j in 0..M (tier 0 sits at the cluster tier's height).
    double tier_height(int j) const;
    double tier_density(int j) const;
    double tier_power_w(int j) const;
    double energy_threshold_w() const;

    /// Throws ConfigValidationError naming the first violated invariant.
    void validate() const;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

/// Default scenario: single height, high-altitude LOS model, HH.
ScenarioConfig default_config();

/// Two height groups, 50 m and 80 m, density split evenly, all powers 37 dBm.
ScenarioConfig multi_height_preset();

/// Parse the flat `key = value` format (TOML subset): `#` comments, numbers,
/// quoted strings, and `[a, b, ...]` numeric lists. Omitted keys keep their
/// defaults, and list lengths follow `heights` when omitted. Validates.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Emit every field in the same format; parse_config(to_config_text(c)) == c.
std::string to_config_text(const ScenarioConfig& config);

/// Keeps tier densities proportional while setting the total density.
void set_total_density(ScenarioConfig& config, double density);
/// Sets every tier's transmit power, tier 0 included.
void set_all_powers_dbm(ScenarioConfig& config, double dbm);
/// Collapses to a single height group at `height`.
void set_single_height(ScenarioConfig& config, double height);

}  // namespace uaveh
