#pragma once

#include <array>
#include <atomic>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "uaveh/config.hpp"
#include "uaveh/pathloss_stats.hpp"
#include "uaveh/quadrature.hpp"

namespace uaveh {

/// Analytical expressions exist only for HH antennas; HV/VV go through montecarlo.
class UnsupportedOrientation : public std::invalid_argument {
public:
    explicit UnsupportedOrientation(Orientation o);
};

/// Values indexed [tier][state], tier 0 = cluster center, state via index_of().
using TierStateGrid = std::vector<std::array<double, 2>>;

TierStateGrid make_grid(int tiers, double fill = 0.0);
double grid_sum(const TierStateGrid& g);
double tier_sum(const TierStateGrid& g, int tier);

struct AlzerParams {
    int n_terms = 5;
    double eta = 0.0;

    /// Laplace argument of the n-th term for harvested-energy threshold `threshold_w`.
    double a_hat(int n, double threshold_w, double rectifier_efficiency) const {
        return n * eta / (threshold_w / rectifier_efficiency);
    }
};

/// eta = N (N!)^(-1/N).
double alzer_eta(int n_terms);
AlzerParams make_alzer(int n_terms);
double binomial(int n, int k);

/// Path-loss value below which an interferer in state s' (exponent
/// alpha_sprime) would out-power the serving link of path loss `l_serving`
/// (exponent alpha_s). Powers are HH effective powers P * H^2, which
/// reduce to transmit powers when all UAVs share one height.
double exclusion_radius(double p_interferer, double p_serving, double l_serving, double alpha_s,
                        double alpha_sprime);

/// Closed-form association when every link is LOS and powers are equal: (A_0, A_1).
std::pair<double, double> all_los_association(double lambda_u, double sigma_c);

/// Per-state interferer exclusion boundaries in the path-loss domain.
struct ExclusionBoundary {
    std::array<double, 2> path_loss{0.0, 0.0};
    static ExclusionBoundary uniform(double x) { return {{x, x}}; }
    double operator[](LinkState s) const { return path_loss[index_of(s)]; }
};

struct AssociationReport {
    TierStateGrid probability;
    double tier_total(int k) const { return tier_sum(probability, k); }
    double grand_total() const { return grid_sum(probability); }
};

enum class Engine { Analytic, MonteCarlo };

/// Output of either engine. Coverage grids are indexed [threshold][tier][state].
/// "contribution" entries are joint with association (P(covered, tier k,
/// state s) or E[harvested; tier k, state s]); conditional values divide by
/// the association probability. `*_ci` are 95% half-widths (Monte Carlo only).
struct CoverageResult {
    Engine engine = Engine::Analytic;
    int cluster_tier = 1;
    std::size_t trials = 0;
    bool numerics_ok = true;

    TierStateGrid association;
    TierStateGrid association_ci;

    std::vector<double> thresholds_dbm;
    std::vector<TierStateGrid> coverage_contribution;
    std::vector<TierStateGrid> coverage_contribution_ci;
    std::vector<double> total_coverage;      // clamped to [0, 1]
    std::vector<double> total_coverage_raw;  // before clamping
    std::vector<double> total_coverage_ci;

    bool has_power = false;
    TierStateGrid avg_power_contribution_w;
    TierStateGrid avg_power_contribution_ci_w;
    double avg_power_total_w = 0.0;
    double avg_power_total_ci_w = 0.0;

    // Monte Carlo half-widths of per-tier sums: [tier], [tier], [threshold][tier].
    std::vector<double> association_tier_ci;
    std::vector<double> avg_power_tier_ci_w;
    std::vector<std::vector<double>> tier_coverage_ci;

    int tiers() const { return static_cast<int>(association.size()); }
    /// EC_k: tier-k share of the total coverage at threshold index t.
    double tier_coverage(std::size_t t, int k) const { return tier_sum(coverage_contribution.at(t), k); }
    /// EC_{k,s} conditioned on association; 0 when the association is empty.
    double conditional_coverage(std::size_t t, int k, LinkState s) const;
    double tier_power_w(int k) const { return tier_sum(avg_power_contribution_w, k); }
};

/// Analytical model of one scenario, with the typical UE clustered around a
/// UAV of height group `cluster_tier`. Immutable; safe to evaluate from
/// several threads. The single-height network is the one-group case.
class AnalyticModel {
public:
    AnalyticModel(const ScenarioConfig& config, int cluster_tier);
    explicit AnalyticModel(const ScenarioConfig& config) : AnalyticModel(config, config.cluster_tier) {}

    int tiers() const { return static_cast<int>(tiers_.size()); }
    const TierStatistics& tier(int j) const { return tiers_.at(static_cast<std::size_t>(j)); }
    double effective_power(int j) const { return effective_power_.at(static_cast<std::size_t>(j)); }
    const ScenarioConfig& config() const { return config_; }

    /// Joint integral over the serving link of P(associated with (k, s)) times
    /// E[exp(-a_hat * received power)]. With a_hat = 0 this is A_{k,s}.
    double serving_term(int k, LinkState s, double a_hat) const;
    /// E[harvested power; associated with (k, s)] in watts.
    double power_term(int k, LinkState s) const;

    /// Exclusion boundaries for interferers of tier j given a tier-k serving
    /// link in state s with path loss `l_serving`.
    ExclusionBoundary exclusion(int j, int k, LinkState s, double l_serving) const;

    /// Laplace transform of tier-j interference beyond `excl`, tier k serving.
    /// Tier 0 as interferer is conditioned on lying beyond `excl`.
    double laplace_interference(int j, int k, double a_hat, const ExclusionBoundary& excl) const;
    /// Mean tier-j interference power beyond `excl`. For j = 0 this is the
    /// mean restricted to the event that the cluster-center UAV lies beyond.
    double psi_interference_mean(int j, const ExclusionBoundary& excl) const;

    /// Number of inner or outer integrals that ran out of budget so far.
    std::size_t failed_integrals() const;

private:
    // Inner integrals; `from` is the interferer's horizontal exclusion distance.
    double ppp_void(int j, LinkState m, double from) const;
    double ppp_laplace_exponent(int j, LinkState m, double from, double a_hat) const;
    double ppp_mean_power(int j, LinkState m, double from) const;
    double center_laplace_mass(LinkState m, double from, double a_hat) const;
    double center_mean_power(LinkState m, double from) const;
    double exclusion_distance(int j, LinkState m, double serving_metric) const;
    std::vector<double> outer_kinks(int k, LinkState s) const;
    double run(IntegrationRequest& req) const;
    bool state_absent(LinkState m) const;

    ScenarioConfig config_;
    std::vector<TierStatistics> tiers_;
    std::vector<double> effective_power_;
    double outer_tol_;
    std::shared_ptr<std::atomic<std::size_t>> failures_;
};

AssociationReport association_probabilities(const ScenarioConfig& config);
AssociationReport association_probabilities(const AnalyticModel& model);

/// Average harvested power (power fields of the result populated).
CoverageResult avg_harvested_power(const ScenarioConfig& config);

/// Energy coverage over `thresholds_w`, using the config's cluster tier.
CoverageResult energy_coverage(const ScenarioConfig& config, const std::vector<double>& thresholds_w);

/// Energy coverage with the typical UE clustered around height group `mu` (1-based).
CoverageResult energy_coverage_multiheight(const ScenarioConfig& config, int mu,
                                           const std::vector<double>& thresholds_w);

struct AnalysisRequest {
    bool association = true;
    bool avg_power = true;
    std::vector<double> thresholds_w;
};

/// All requested quantities from one model; work units run concurrently.
CoverageResult analyze(const AnalyticModel& model, const AnalysisRequest& request);

double laplace_interference(const ScenarioConfig& config, int j, int k, double a_hat, double exclusion);
double psi_interference_mean(const ScenarioConfig& config, int j, double exclusion);

}  // namespace uaveh
