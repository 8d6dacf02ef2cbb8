#include "uaveh/montecarlo.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "uaveh/parallel.hpp"
#include "uaveh/philox.hpp"

namespace uaveh {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kZ95 = 1.959963984540054;

// Counter word 2 selects the substream inside a trial: 0 is the cluster
// center, (tier << 16) | (shell + 1) a PPP shell.
std::uint32_t shell_stream(int tier, int shell) {
    return (static_cast<std::uint32_t>(tier) << 16) | static_cast<std::uint32_t>(shell + 1);
}

Philox4x32 make_stream(TrialStream s, std::uint32_t sub) {
    return Philox4x32(s.seed, static_cast<std::uint32_t>(s.trial), static_cast<std::uint32_t>(s.trial >> 32),
                      sub);
}

UavLink draw_link(Philox4x32& g, const ScenarioConfig& config, int tier, double d, double height) {
    UavLink u;
    const double phi = kTwoPi * g.uniform_open();
    u.x = d * std::cos(phi);
    u.y = d * std::sin(phi);
    u.height = height;
    u.tier = tier;
    const double r = std::sqrt(d * d + height * height);
    u.state = g.uniform_open() < los_probability(config.los_model, r, height) ? LinkState::Los : LinkState::Nlos;
    u.fading = g.exponential();
    return u;
}

struct MeanCi {
    double mean;
    double half;
};

// Sequential mean and normal-approximation half-width of per-trial values.
template <class F>
MeanCi sample_mean(const std::vector<TrialOutcome>& v, const F& value) {
    const auto n = static_cast<double>(v.size());
    double sum = 0.0;
    for (const auto& o : v) sum += value(o);
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& o : v) {
        const double e = value(o) - mean;
        ss += e * e;
    }
    const double var = v.size() > 1 ? ss / (n - 1.0) : 0.0;
    return {mean, kZ95 * std::sqrt(var / n)};
}

}  // namespace

double UavLink::horizontal_distance() const { return std::hypot(x, y); }

void sample_realization_into(const ScenarioConfig& config, TrialStream stream, NetworkRealization& out) {
    Philox4x32 g0 = make_stream(stream, 0);
    const double sigma = config.cluster_sigma;
    out.cluster_offset_d = sigma * std::sqrt(-2.0 * std::log(g0.uniform_open()));
    out.tier0 = draw_link(g0, config, 0, out.cluster_offset_d, config.tier_height(0));

    out.others.clear();
    const double window = config.mc_window_radius_m;
    const int shells = static_cast<int>(std::ceil(window / kShellWidthM));
    for (int j = 1; j <= config.num_tiers(); ++j) {
        const double lambda = config.tier_density(j);
        const double height = config.tier_height(j);
        for (int sh = 0; sh < shells; ++sh) {
            const double r_in = sh * kShellWidthM;
            const double r_out = std::min(window, (sh + 1) * kShellWidthM);
            Philox4x32 g = make_stream(stream, shell_stream(j, sh));
            const double area = std::numbers::pi * (r_out * r_out - r_in * r_in);
            std::poisson_distribution<long> count(lambda * area);
            const long n = count(g);
            for (long i = 0; i < n; ++i) {
                const double d = std::sqrt(r_in * r_in + g.uniform_open() * (r_out * r_out - r_in * r_in));
                out.others.push_back(draw_link(g, config, j, d, height));
            }
        }
    }
}

NetworkRealization sample_realization(const ScenarioConfig& config, TrialStream stream) {
    NetworkRealization r;
    sample_realization_into(config, stream, r);
    return r;
}

TrialOutcome run_trial(const NetworkRealization& realization, const ScenarioConfig& config) {
    std::vector<double> power_w(static_cast<std::size_t>(config.num_tiers()) + 1);
    for (int j = 0; j <= config.num_tiers(); ++j) power_w[static_cast<std::size_t>(j)] = config.tier_power_w(j);

    auto average = [&](const UavLink& u) {
        const double d = u.horizontal_distance();
        const double r = std::sqrt(d * d + u.height * u.height);
        return power_w[static_cast<std::size_t>(u.tier)] * antenna_gain_geometry(config.orientation, u.height, d) /
               path_loss(r, config.alphas[u.state]);
    };

    const double p0 = average(realization.tier0);
    double best = p0;
    const UavLink* serving = &realization.tier0;
    double total = p0 * realization.tier0.fading;
    double serving_received = total;
    for (const UavLink& u : realization.others) {
        const double p = average(u);
        const double received = p * u.fading;
        total += received;
        if (p > best) {
            best = p;
            serving = &u;
            serving_received = received;
        }
    }

    TrialOutcome o;
    o.associated_tier = serving->tier;
    o.associated_state = serving->state;
    o.received_serving_w = serving_received;
    o.interference_w = std::max(total - serving_received, 0.0);
    o.harvested_w = config.rectifier_efficiency * (serving_received + o.interference_w);
    return o;
}

std::vector<TrialOutcome> simulate(const ScenarioConfig& config, unsigned max_threads) {
    config.validate();
    const auto trials = static_cast<std::size_t>(config.mc_trials);
    std::vector<TrialOutcome> outcomes(trials);
    const std::size_t chunk = 256;
    const std::size_t chunks = (trials + chunk - 1) / chunk;
    parallel_for(
        chunks,
        [&](std::size_t c) {
            NetworkRealization buffer;
            const std::size_t end = std::min(trials, (c + 1) * chunk);
            for (std::size_t t = c * chunk; t < end; ++t) {
                sample_realization_into(config, {config.rng_seed, t}, buffer);
                outcomes[t] = run_trial(buffer, config);
            }
        },
        max_threads);
    return outcomes;
}

CoverageResult summarize(const std::vector<TrialOutcome>& outcomes, const ScenarioConfig& config,
                         const EstimateRequest& request) {
    if (outcomes.empty()) throw std::invalid_argument("summarize: no trials");
    const int tiers = config.num_tiers() + 1;
    CoverageResult out;
    out.engine = Engine::MonteCarlo;
    out.cluster_tier = config.cluster_tier;
    out.trials = outcomes.size();
    out.association = make_grid(tiers);
    out.association_ci = make_grid(tiers);
    out.has_power = request.avg_power;
    out.avg_power_contribution_w = make_grid(tiers);
    out.avg_power_contribution_ci_w = make_grid(tiers);

    auto is = [](const TrialOutcome& o, int k, LinkState s) {
        return o.associated_tier == k && o.associated_state == s;
    };

    for (int k = 0; k < tiers; ++k) {
        for (LinkState s : kLinkStates) {
            const auto ki = static_cast<std::size_t>(k);
            const MeanCi a = sample_mean(outcomes, [&](const TrialOutcome& o) { return is(o, k, s) ? 1.0 : 0.0; });
            out.association[ki][index_of(s)] = a.mean;
            out.association_ci[ki][index_of(s)] = a.half;
            if (request.avg_power) {
                const MeanCi p =
                    sample_mean(outcomes, [&](const TrialOutcome& o) { return is(o, k, s) ? o.harvested_w : 0.0; });
                out.avg_power_contribution_w[ki][index_of(s)] = p.mean;
                out.avg_power_contribution_ci_w[ki][index_of(s)] = p.half;
            }
        }
    }
    for (int k = 0; k < tiers; ++k) {
        out.association_tier_ci.push_back(
            sample_mean(outcomes, [&](const TrialOutcome& o) { return o.associated_tier == k ? 1.0 : 0.0; }).half);
        if (request.avg_power) {
            out.avg_power_tier_ci_w.push_back(
                sample_mean(outcomes, [&](const TrialOutcome& o) {
                    return o.associated_tier == k ? o.harvested_w : 0.0;
                }).half);
        }
    }
    if (request.avg_power) {
        const MeanCi p = sample_mean(outcomes, [](const TrialOutcome& o) { return o.harvested_w; });
        out.avg_power_total_w = p.mean;
        out.avg_power_total_ci_w = p.half;
    }

    for (double g : request.thresholds_w) {
        if (!(g > 0.0)) throw std::invalid_argument("energy threshold must be positive");
        out.thresholds_dbm.push_back(watts_to_dbm(g));
        TierStateGrid contrib = make_grid(tiers);
        TierStateGrid contrib_ci = make_grid(tiers);
        std::vector<double> tier_ci;
        for (int k = 0; k < tiers; ++k) {
            tier_ci.push_back(sample_mean(outcomes, [&](const TrialOutcome& o) {
                                  return o.associated_tier == k && o.harvested_w > g ? 1.0 : 0.0;
                              }).half);
            for (LinkState s : kLinkStates) {
                const MeanCi c = sample_mean(outcomes, [&](const TrialOutcome& o) {
                    return is(o, k, s) && o.harvested_w > g ? 1.0 : 0.0;
                });
                contrib[static_cast<std::size_t>(k)][index_of(s)] = c.mean;
                contrib_ci[static_cast<std::size_t>(k)][index_of(s)] = c.half;
            }
        }
        const MeanCi total = sample_mean(outcomes, [&](const TrialOutcome& o) { return o.harvested_w > g ? 1.0 : 0.0; });
        out.coverage_contribution.push_back(std::move(contrib));
        out.coverage_contribution_ci.push_back(std::move(contrib_ci));
        out.tier_coverage_ci.push_back(std::move(tier_ci));
        out.total_coverage.push_back(total.mean);
        out.total_coverage_raw.push_back(total.mean);
        out.total_coverage_ci.push_back(total.half);
    }
    return out;
}

CoverageResult estimate(const ScenarioConfig& config, const EstimateRequest& request, unsigned max_threads) {
    if (config.mc_trials < 100) throw std::invalid_argument("estimate: mc_trials must be >= 100");
    return summarize(simulate(config, max_threads), config, request);
}

}  // namespace uaveh
