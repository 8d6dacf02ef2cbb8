#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "uaveh/montecarlo.hpp"
#include "uaveh/philox.hpp"

using namespace uaveh;
using doctest::Approx;

namespace {

// A network whose PPP tiers are almost always empty, for cheap offset draws.
ScenarioConfig sparse_config(double sigma) {
    ScenarioConfig c = default_config();
    set_total_density(c, 1e-12);
    c.cluster_sigma = sigma;
    c.mc_window_radius_m = 100.0;
    return c;
}

std::vector<double> offsets(const ScenarioConfig& c, std::size_t n) {
    std::vector<double> d(n);
    for (std::size_t t = 0; t < n; ++t) d[t] = sample_realization(c, {c.rng_seed, t}).cluster_offset_d;
    return d;
}

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

bool same_outcomes(const std::vector<TrialOutcome>& a, const std::vector<TrialOutcome>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].associated_tier != b[i].associated_tier || a[i].associated_state != b[i].associated_state ||
            a[i].received_serving_w != b[i].received_serving_w || a[i].interference_w != b[i].interference_w ||
            a[i].harvested_w != b[i].harvested_w) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("Philox known-answer vectors") {
    using B = Philox4x32::Block;
    CHECK(Philox4x32::bijection({0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::bijection({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::bijection({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("uniforms lie in the open unit interval") {
    Philox4x32 g(42, 1, 2, 3);
    bool inside = true;
    for (int i = 0; i < 100000; ++i) {
        const double u = g.uniform_open();
        inside = inside && u > 0.0 && u < 1.0;
    }
    CHECK(inside);
}

TEST_CASE("mean cluster offset") {
    CHECK(std::abs(mean(offsets(sparse_config(10.0), 1000000)) - 12.5331413732) <= 0.05);
    CHECK(std::abs(mean(offsets(sparse_config(90.0), 1000000)) - 112.798272358) <= 0.5);
}

TEST_CASE("cluster offsets pass a Kolmogorov-Smirnov test") {
    const double sigma = 10.0;
    std::vector<double> d = offsets(sparse_config(sigma), 100000);
    std::sort(d.begin(), d.end());
    const auto n = static_cast<double>(d.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double cdf = 1.0 - std::exp(-d[i] * d[i] / (2.0 * sigma * sigma));
        ks = std::max({ks, std::abs(cdf - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - cdf)});
    }
    CHECK(ks < 1.628 / std::sqrt(n));
}

TEST_CASE("PPP counts, geometry and fading") {
    const ScenarioConfig c = default_config();
    const std::size_t n = 100000;
    double count = 0.0;
    double fading = 0.0;
    std::size_t links = 0;
    bool geometry_ok = true;
    NetworkRealization r;
    for (std::size_t t = 0; t < n; ++t) {
        sample_realization_into(c, {7, t}, r);
        count += static_cast<double>(r.others.size());
        fading += r.tier0.fading;
        ++links;
        for (const UavLink& u : r.others) {
            geometry_ok = geometry_ok && u.fading > 0.0 && u.horizontal_distance() <= c.mc_window_radius_m &&
                          u.height == 50.0 && u.tier == 1;
        }
        geometry_ok = geometry_ok && r.tier0.horizontal_distance() == Approx(r.cluster_offset_d).epsilon(1e-12);
    }
    CHECK(geometry_ok);
    CHECK(std::abs(count / static_cast<double>(n) - 1e-4 * std::numbers::pi * 4e6) <= 2.0);
    CHECK(std::abs(fading / static_cast<double>(links) - 1.0) <= 0.01);
}

TEST_CASE("single UAV: no interference, tier-0 association") {
    NetworkRealization r;
    r.tier0.x = 5.0;
    r.tier0.height = 50.0;
    r.tier0.fading = 0.8;
    const ScenarioConfig c = default_config();
    const TrialOutcome o = run_trial(r, c);
    CHECK(o.associated_tier == 0);
    CHECK(o.interference_w == 0.0);
    CHECK(o.harvested_w == Approx(o.received_serving_w));
    CHECK(o.harvested_w > 0.0);
}

TEST_CASE("VV antennas give no power straight overhead") {
    ScenarioConfig c = default_config();
    c.orientation = Orientation::VV;
    c.rectifier_efficiency = 0.6;
    NetworkRealization r;
    r.tier0.height = 50.0;
    const TrialOutcome alone = run_trial(r, c);
    CHECK(alone.associated_tier == 0);
    CHECK(alone.received_serving_w == 0.0);

    UavLink far;
    far.x = 200.0;
    far.height = 50.0;
    far.tier = 1;
    far.fading = 1.3;
    r.others.push_back(far);
    const TrialOutcome o = run_trial(r, c);
    CHECK(o.associated_tier == 1);
    CHECK(o.interference_w == 0.0);
    CHECK(o.harvested_w == Approx(0.6 * (o.received_serving_w + o.interference_w)));
}

TEST_CASE("ties go to the cluster-center UAV") {
    NetworkRealization r;
    r.tier0.x = 30.0;
    r.tier0.height = 50.0;
    UavLink twin = r.tier0;
    twin.tier = 1;
    r.others.push_back(twin);
    CHECK(run_trial(r, default_config()).associated_tier == 0);
}

TEST_CASE("reproducible regardless of thread count") {
    ScenarioConfig c = default_config();
    c.mc_trials = 1500;
    const auto one = simulate(c, 1);
    const auto four = simulate(c, 4);
    CHECK(same_outcomes(one, four));
    CHECK(same_outcomes(one, simulate(c, 3)));
    c.rng_seed = 2;
    CHECK_FALSE(same_outcomes(one, simulate(c, 1)));
}

TEST_CASE("estimator invariants") {
    ScenarioConfig c = default_config();
    c.mc_trials = 2000;
    EstimateRequest req;
    req.thresholds_w = {1e-15, dbm_to_watts(0.0), dbm_to_watts(10.0)};
    const CoverageResult r = estimate(c, req);
    CHECK(r.engine == Engine::MonteCarlo);
    CHECK(r.trials == 2000);
    CHECK(grid_sum(r.association) == Approx(1.0).epsilon(1e-15));
    CHECK(r.total_coverage[0] == 1.0);
    CHECK(r.total_coverage[1] >= r.total_coverage[2]);
    CHECK(r.avg_power_total_w == Approx(r.tier_power_w(0) + r.tier_power_w(1)).epsilon(1e-12));
    CHECK(r.total_coverage_ci[1] > 0.0);

    c.mc_trials = 50;
    CHECK_THROWS_AS(estimate(c, req), std::invalid_argument);
}

TEST_CASE("always-LOS association matches the closed form") {
    ScenarioConfig c = default_config();
    c.los_model = LosModel::always_los();
    c.mc_trials = 20000;
    EstimateRequest req;
    req.avg_power = false;
    const CoverageResult r = estimate(c, req);
    CHECK(std::abs(tier_sum(r.association, 0) - 0.940882602558) <= 0.005);
}

TEST_CASE("doubling the window leaves coverage unchanged") {
    ScenarioConfig c = default_config();
    c.mc_trials = 10000;
    EstimateRequest req;
    req.avg_power = false;
    req.thresholds_w = {dbm_to_watts(0.0)};
    const CoverageResult base = estimate(c, req);
    c.mc_window_radius_m *= 2.0;
    const CoverageResult wide = estimate(c, req);
    const double se = base.total_coverage_ci[0] / 1.959963984540054;
    CHECK(std::abs(wide.total_coverage[0] - base.total_coverage[0]) < se);
}

TEST_CASE("small-sample agreement with the analytic model") {
    ScenarioConfig c = default_config();
    c.mc_trials = 20000;
    EstimateRequest req;
    const CoverageResult mc = estimate(c, req);
    const CoverageResult an = avg_harvested_power(c);
    const AssociationReport assoc = association_probabilities(c);
    CHECK(std::abs(tier_sum(mc.association, 0) - assoc.tier_total(0)) <= std::max(0.01, 1.5 * mc.association_tier_ci[0]));
    CHECK(std::abs(mc.avg_power_total_w - an.avg_power_total_w) <= 1.5 * mc.avg_power_total_ci_w);
}
