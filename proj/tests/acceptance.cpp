// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "uaveh/analysis.hpp"
#include "uaveh/montecarlo.hpp"
#include "uaveh/pathloss_stats.hpp"
#include "uaveh/quadrature.hpp"

using namespace uaveh;

namespace {

constexpr double kZ95 = 1.959963984540054;

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [miss] " << what << ';';
        }
    }
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

ScenarioConfig with_model(LosModel m) {
    ScenarioConfig c = default_config();
    c.los_model = m;
    return c;
}

const std::vector<LosModel> kModels{LosModel::high_altitude(), LosModel::low_altitude()};

std::string name(const LosModel& m) { return std::string(to_string(m.kind)); }

double ec_at(const ScenarioConfig& c, double threshold_dbm) {
    return energy_coverage(c, {dbm_to_watts(threshold_dbm)}).total_coverage[0];
}

// 1
Verdict all_los_oracle() {
    Verdict v;
    double worst = 0.0;
    for (double lambda : {1e-5, 1e-4}) {
        for (double sigma : {10.0, 50.0, 90.0}) {
            ScenarioConfig c = with_model(LosModel::always_los());
            set_total_density(c, lambda);
            c.cluster_sigma = sigma;
            const double a0 = association_probabilities(c).tier_total(0);
            const double ref = all_los_association(lambda, sigma).first;
            const double rel = std::abs(a0 - ref) / ref;
            worst = std::max(worst, rel);
            v.require(rel <= 1e-6, fmt("lambda=%g sigma=%g rel=%.2e", lambda, sigma, rel));
        }
    }
    v.detail << " max rel err " << fmt("%.2e", worst) << " over 6 points";
    return v;
}

// 2
Verdict association_normalization() {
    Verdict v;
    double worst = 0.0;
    for (const LosModel& m : kModels) {
        for (double h : {50.0, 30.0, 80.0, 150.0}) {
            ScenarioConfig c = with_model(m);
            set_single_height(c, h);
            const double err = std::abs(association_probabilities(c).grand_total() - 1.0);
            worst = std::max(worst, err);
            v.require(err <= 1e-5, name(m) + fmt(" H=%g err=%.2e", h, err));
        }
    }
    v.detail << " max |sum - 1| " << fmt("%.2e", worst) << " over 2 models x 4 heights";
    return v;
}

// 3
Verdict pdf_ccdf_consistency() {
    Verdict v;
    double worst = 0.0;
    int points = 0;
    const ScenarioConfig base = default_config();
    for (const LosModel& m : kModels) {
        const auto center =
            TierStatistics::cluster_center(50.0, base.cluster_sigma, base.alphas, m, base.quadrature_rel_tol / 10.0);
        const auto ppp = TierStatistics::ppp_tier(1, 50.0, base.uav_density, base.alphas, m,
                                                  base.quadrature_rel_tol / 10.0);
        for (LinkState s : kLinkStates) {
            const double lo = center.min_path_loss(s);
            for (int i = 0; i < 20; ++i) {
                const double x = lo * std::pow(20.0, (i + 0.5) / 20.0);
                const double h = x * 1e-5;
                auto check = [&](const char* tier, double pdf, double cp, double cm) {
                    const double fd = (cm - cp) / (2.0 * h);
                    if (pdf < 1e-300 && std::abs(fd) < 1e-300) return;
                    const double rel = std::abs(fd - pdf) / pdf;
                    worst = std::max(worst, rel);
                    ++points;
                    v.require(rel < 1e-3, name(m) + " " + tier + fmt(" x=%g rel=%.2e", x, rel));
                };
                check("tier0", pdf_tier0(center, x, s), ccdf_tier0(center, x + h, s), ccdf_tier0(center, x - h, s));
                check("tier1", pdf_tier_k(ppp, x, s), ccdf_tier_k(ppp, x + h, s), ccdf_tier_k(ppp, x - h, s));
            }
        }
    }
    v.detail << " max rel err " << fmt("%.2e", worst) << " at " << points << " points";
    return v;
}

// 4
Verdict analytic_vs_monte_carlo(std::vector<CoverageResult>& mc_hh) {
    Verdict v;
    const std::vector<double> grid_dbm{-10.0, 0.0, 10.0, 20.0, 30.0};
    std::vector<double> thresholds;
    for (double g : grid_dbm) thresholds.push_back(dbm_to_watts(g));
    for (const LosModel& m : kModels) {
        ScenarioConfig c = with_model(m);
        c.mc_trials = 100000;
        const CoverageResult an = analyze(AnalyticModel(c), {true, true, thresholds});
        const CoverageResult mc = estimate(c, {true, true, thresholds});
        mc_hh.push_back(mc);

        double assoc_worst = 0.0;
        for (int k = 0; k < 2; ++k) {
            for (LinkState s : kLinkStates) {
                const auto ki = static_cast<std::size_t>(k);
                const double diff = std::abs(an.association[ki][index_of(s)] - mc.association[ki][index_of(s)]);
                const double tol = std::max(0.01, 3.0 * mc.association_ci[ki][index_of(s)] / kZ95);
                assoc_worst = std::max(assoc_worst, diff / tol);
                v.require(diff <= tol, name(m) + fmt(" association k=%g diff=%.4f tol=%.4f", k, diff, tol));
            }
        }
        v.detail << ' ' << name(m) << fmt(": association diff/tol max %.2f;", assoc_worst);

        for (std::size_t t = 0; t < thresholds.size(); ++t) {
            const double diff = std::abs(an.total_coverage[t] - mc.total_coverage[t]);
            const double tol = std::max(0.02, 3.0 * mc.total_coverage_ci[t] / kZ95);
            v.detail << fmt(" EC(%g dBm) analytic %.4f mc %.4f;", grid_dbm[t], an.total_coverage[t],
                            mc.total_coverage[t]);
            v.require(diff <= tol, name(m) + fmt(" EC at %g dBm diff=%.4f tol=%.4f", grid_dbm[t], diff, tol));
        }

        const double pdiff = std::abs(an.avg_power_total_w - mc.avg_power_total_w);
        const double ptol = 3.0 * mc.avg_power_total_ci_w / kZ95;
        v.detail << fmt(" power analytic %.5e mc %.5e W;", an.avg_power_total_w, mc.avg_power_total_w);
        v.require(pdiff <= ptol, name(m) + fmt(" power diff=%.3e tol=%.3e", pdiff, ptol));
    }
    return v;
}

// 5
Verdict cluster_distance() {
    Verdict v;
    for (auto [sigma, target, tol] : {std::tuple{10.0, 12.533, 0.05}, std::tuple{90.0, 112.80, 0.5}}) {
        ScenarioConfig c = default_config();
        set_total_density(c, 1e-12);
        c.mc_window_radius_m = 100.0;
        c.cluster_sigma = sigma;
        double sum = 0.0;
        const std::size_t n = 1000000;
        for (std::size_t t = 0; t < n; ++t) sum += sample_realization(c, {c.rng_seed, t}).cluster_offset_d;
        const double mean = sum / static_cast<double>(n);
        v.detail << fmt(" sigma=%g mean %.4f (target %.3f);", sigma, mean, target);
        v.require(std::abs(mean - target) <= tol, fmt("sigma=%g mean=%.4f", sigma, mean));
    }
    return v;
}

// 6
Verdict qualitative_shapes() {
    Verdict v;
    const double gamma = 0.0;
    for (const LosModel& m : kModels) {
        const std::string n = name(m);
        // (a), (b)
        std::vector<double> a0;
        std::vector<double> ec;
        const std::vector<double> sigmas{10.0, 20.0, 30.0, 50.0, 70.0, 90.0};
        for (double sigma : sigmas) {
            ScenarioConfig c = with_model(m);
            c.cluster_sigma = sigma;
            const CoverageResult r = analyze(AnalyticModel(c), {true, false, {dbm_to_watts(gamma)}});
            a0.push_back(tier_sum(r.association, 0));
            ec.push_back(r.total_coverage[0]);
        }
        for (std::size_t i = 1; i < sigmas.size(); ++i) {
            v.require(a0[i] < a0[i - 1], n + fmt(" (a) A0 not decreasing at sigma=%g", sigmas[i]));
            if (sigmas[i - 1] >= 20.0) {
                v.require(ec[i] < ec[i - 1], n + fmt(" (b) EC not decreasing at sigma=%g", sigmas[i]));
            }
        }

        // (d)
        double prev = -1.0;
        for (double lambda : {1e-5, 3e-5, 1e-4}) {
            ScenarioConfig c = with_model(m);
            set_total_density(c, lambda);
            const double e = ec_at(c, gamma);
            v.require(e >= prev, n + fmt(" (d) EC decreases at lambda=%g", lambda));
            prev = e;
        }
        prev = -1.0;
        for (double p : {30.0, 37.0, 43.0}) {
            ScenarioConfig c = with_model(m);
            set_all_powers_dbm(c, p);
            const double e = ec_at(c, gamma);
            v.require(e >= prev, n + fmt(" (d) EC decreases at P=%g dBm", p));
            prev = e;
        }

        // (e), (f)
        std::vector<double> thresholds;
        for (double g = -10.0; g <= 30.0; g += 5.0) thresholds.push_back(dbm_to_watts(g));
        const CoverageResult r = energy_coverage(with_model(m), thresholds);
        for (std::size_t t = 1; t < thresholds.size(); ++t) {
            v.require(r.total_coverage[t] <= r.total_coverage[t - 1],
                      n + fmt(" (e) EC increases at %g dBm", watts_to_dbm(thresholds[t])));
        }
        const double ec0 = r.tier_coverage(2, 0);
        const double ec1 = r.tier_coverage(2, 1);
        v.detail << ' ' << n << fmt(": EC0 %.4f EC1 %.4f at 0 dBm;", ec0, ec1);
        v.require(ec0 >= ec1, n + " (f) EC0 < EC1");
    }

    // (c)
    const std::vector<double> heights{30.0, 50.0, 80.0, 110.0, 150.0};
    std::vector<double> argmax;
    for (const LosModel& m : kModels) {
        std::vector<double> ec;
        for (double h : heights) {
            ScenarioConfig c = with_model(m);
            set_single_height(c, h);
            ec.push_back(ec_at(c, gamma));
        }
        const auto best = static_cast<std::size_t>(std::max_element(ec.begin(), ec.end()) - ec.begin());
        argmax.push_back(heights[best]);
        v.detail << ' ' << name(m) << " EC(H):";
        for (std::size_t i = 0; i < heights.size(); ++i) v.detail << fmt(" %g:%.4f", heights[i], ec[i]);
        v.detail << ';';
        v.require(best > 0 && best + 1 < heights.size(),
                  name(m) + fmt(" (c) no interior maximum, argmax H=%g", heights[best]));
    }
    v.require(argmax[1] <= argmax[0], "(c) low-altitude maximizer above high-altitude maximizer");
    return v;
}

// 7
Verdict multi_height_reduction() {
    Verdict v;
    const std::vector<double> five{dbm_to_watts(-10.0), dbm_to_watts(0.0), dbm_to_watts(10.0), dbm_to_watts(20.0),
                                   dbm_to_watts(30.0)};
    std::vector<double> nine;
    for (double g = -10.0; g <= 30.0; g += 5.0) nine.push_back(dbm_to_watts(g));
    for (const LosModel& m : kModels) {
        const ScenarioConfig single = with_model(m);
        ScenarioConfig equal = multi_height_preset();
        equal.los_model = m;
        equal.heights = {50.0, 50.0};
        const CoverageResult ref = energy_coverage(single, five);
        const CoverageResult two = energy_coverage_multiheight(equal, 1, five);
        double worst = 0.0;
        for (std::size_t t = 0; t < five.size(); ++t) {
            worst = std::max(worst, std::abs(two.total_coverage[t] - ref.total_coverage[t]));
        }
        v.detail << ' ' << name(m) << fmt(": equal-height diff %.2e;", worst);
        v.require(worst <= 1e-4, name(m) + fmt(" equal-height reduction diff=%.2e", worst));

        ScenarioConfig layered = multi_height_preset();
        layered.los_model = m;
        const CoverageResult mu1 = energy_coverage_multiheight(layered, 1, nine);
        const CoverageResult ref9 = energy_coverage(single, nine);
        double gap = 0.0;
        for (std::size_t t = 0; t < nine.size(); ++t) {
            gap = std::max(gap, std::abs(mu1.total_coverage[t] - ref9.total_coverage[t]));
        }
        v.detail << fmt(" 50/80 m layout vs 50 m max gap %.4f;", gap);
        v.require(gap <= 0.03, name(m) + fmt(" 50/80 m layout gap=%.4f", gap));
    }
    return v;
}

// 8
Verdict orientation_ordering(const CoverageResult& hh) {
    Verdict v;
    const double ec_hh = hh.total_coverage[1];  // 0 dBm
    const double se_hh = hh.total_coverage_ci[1] / kZ95;
    v.detail << fmt(" HH %.4f;", ec_hh);
    for (Orientation o : {Orientation::HV, Orientation::VV}) {
        ScenarioConfig c = default_config();
        c.orientation = o;
        c.mc_trials = 100000;
        const CoverageResult r = estimate(c, {false, false, {dbm_to_watts(0.0)}});
        const double se = std::hypot(se_hh, r.total_coverage_ci[0] / kZ95);
        const double margin = ec_hh - r.total_coverage[0];
        v.detail << ' ' << to_string(o) << fmt(" %.4f (margin %.4f, SE %.4f);", r.total_coverage[0], margin, se);
        v.require(margin > -se, std::string(to_string(o)) + fmt(" margin=%.4f", margin));
    }
    return v;
}

// 9
Verdict numerics_suite() {
    Verdict v;
    auto close = [](double a, double b, double rel) { return std::abs(a - b) <= rel * std::abs(b); };
    IntegrationRequest r;
    r.integrand = [](double x) { return std::exp(-x); };
    r.lower = 0.0;
    r.upper = kInfinity;
    r.rel_tol = 1e-8;
    v.require(close(integrate(r).value, 1.0, 1e-8), "exp tail");

    r.integrand = [](double x) { return x * x; };
    r.upper = 1.0;
    r.rel_tol = 1e-10;
    v.require(close(integrate(r).value, 1.0 / 3.0, 1e-10), "x^2");

    r.integrand = [](double x) { return 2500.0 / (x * x) * std::numbers::pi * 1e-4; };
    r.lower = 50.0;
    r.upper = kInfinity;
    r.tail_scale = 50.0;
    r.rel_tol = 1e-8;
    v.require(close(integrate(r).value, std::numbers::pi * 1e-4 * 2500.0 / 50.0, 1e-8), "path-loss tail");

    IntegrationRequest k;
    k.integrand = [](double x) { return std::abs(x - 18.0); };
    k.lower = 0.0;
    k.upper = 100.0;
    k.rel_tol = 1e-10;
    const auto blind = integrate(k);
    k.known_kinks = {18.0};
    const auto aware = integrate(k);
    v.require(close(aware.value, 3524.0, 1e-10), "kink value");
    v.require(2 * aware.evaluations <= blind.evaluations,
              fmt("kink evaluations %g vs %g", static_cast<double>(aware.evaluations),
                  static_cast<double>(blind.evaluations)));
    v.detail << " kink-aware " << aware.evaluations << " vs blind " << blind.evaluations << " evaluations;";

    const double eta[] = {alzer_eta(1), alzer_eta(2), alzer_eta(5)};
    const double want[] = {1.0, std::sqrt(2.0), 1.91926};
    for (int i = 0; i < 3; ++i) v.require(std::abs(eta[i] - want[i]) <= 1e-5, fmt("eta[%g]", i));
    v.detail << fmt(" eta = %.6f %.6f %.6f", eta[0], eta[1], eta[2]);
    return v;
}

}  // namespace

int main() {
    std::vector<CoverageResult> mc_hh;
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"1 all-LOS association oracle", all_los_oracle},
        {"2 association normalization", association_normalization},
        {"3 PDF/CCDF consistency", pdf_ccdf_consistency},
        {"4 analytic vs Monte Carlo", [&] { return analytic_vs_monte_carlo(mc_hh); }},
        {"5 cluster distance", cluster_distance},
        {"6 qualitative shapes", qualitative_shapes},
        {"7 multi-height reduction", multi_height_reduction},
        {"8 orientation ordering", [&] { return orientation_ordering(mc_hh.at(0)); }},
        {"9 numerics suite", numerics_suite},
    };
    int failed = 0;
    for (const auto& [label, check] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail << " exception: " << e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s criterion %s (%.1f s):%s\n", v.pass ? "PASS" : "FAIL", label.c_str(), secs,
                    v.detail.str().c_str());
        std::fflush(stdout);
        if (!v.pass) ++failed;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
