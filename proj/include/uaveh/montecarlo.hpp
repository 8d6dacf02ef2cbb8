#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "uaveh/analysis.hpp"
#include "uaveh/config.hpp"

namespace uaveh {

/// Width of the annular shells the PPP tiers are drawn in. Each shell has
/// its own substream, so windows that differ only in outer radius share
/// every inner UAV exactly.
inline constexpr double kShellWidthM = 500.0;

/// Identifies one trial's random substreams.
struct TrialStream {
    std::uint64_t seed = 1;
    std::uint64_t trial = 0;
};

/// One UAV and its link to the typical UE at the origin.
struct UavLink {
    double x = 0.0;
    double y = 0.0;
    double height = 0.0;
    int tier = 0;
    LinkState state = LinkState::Los;
    double fading = 1.0;  // Exp(1) power gain

    double horizontal_distance() const;
};

struct NetworkRealization {
    double cluster_offset_d = 0.0;
    UavLink tier0;
    std::vector<UavLink> others;
};

struct TrialOutcome {
    int associated_tier = 0;
    LinkState associated_state = LinkState::Los;
    double received_serving_w = 0.0;
    double interference_w = 0.0;
    double harvested_w = 0.0;
};

/// Samples a realization: the cluster-center UAV at a Rayleigh(sigma_c)
/// offset and every PPP tier inside the disc of radius mc_window_radius_m.
NetworkRealization sample_realization(const ScenarioConfig& config, TrialStream stream);
/// As above, reusing `out`'s storage.
void sample_realization_into(const ScenarioConfig& config, TrialStream stream, NetworkRealization& out);

/// Associates with the strongest fading-free average power (ties go to
/// tier 0) and evaluates serving, interference and harvested power.
TrialOutcome run_trial(const NetworkRealization& realization, const ScenarioConfig& config);

struct EstimateRequest {
    bool association = true;
    bool avg_power = true;
    std::vector<double> thresholds_w;
};

/// Per-trial outcomes for trials [0, config.mc_trials), in trial order.
std::vector<TrialOutcome> simulate(const ScenarioConfig& config, unsigned max_threads = 0);

/// Reduces outcomes in trial order into means and 95% half-widths.
CoverageResult summarize(const std::vector<TrialOutcome>& outcomes, const ScenarioConfig& config,
                         const EstimateRequest& request);

/// simulate() followed by summarize(). Requires mc_trials >= 100.
CoverageResult estimate(const ScenarioConfig& config, const EstimateRequest& request,
                        unsigned max_threads = 0);

}  // namespace uaveh
