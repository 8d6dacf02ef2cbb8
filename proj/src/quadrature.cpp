#include "uaveh/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>

namespace uaveh {

namespace {

// Kronrod abscissae (x >= 0, descending) and weights for the 15-point rule;
// odd indices are the embedded 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

// One GK15 application with the QUADPACK error heuristic.
template <class F>
Panel gk15(const F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    double resabs = std::abs(resk);
    std::array<double, 7> f1{};
    std::array<double, 7> f2{};
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        f1[j] = f(center - dx);
        f2[j] = f(center + dx);
        const double sum = f1[j] + f2[j];
        resk += kWgk[j] * sum;
        resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) resg += kWg[j / 2] * sum;
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) {
        resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
    }
    resk *= half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs((resk - resg * half));
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
        err = std::max(50.0 * eps * resabs, err);
    }
    return {a, b, resk, err};
}

void validate(const IntegrationRequest& req) {
    if (!req.integrand) throw std::invalid_argument("integrate: empty integrand");
    if (!std::isfinite(req.lower)) throw std::invalid_argument("integrate: lower bound must be finite");
    if (!(req.lower < req.upper)) throw std::invalid_argument("integrate: requires lower < upper");
    if (!(req.rel_tol > 1e-12 && req.rel_tol < 1e-2)) {
        throw std::invalid_argument("integrate: rel_tol out of range");
    }
    if (!(req.abs_floor >= 0.0)) throw std::invalid_argument("integrate: abs_floor must be >= 0");
    if (std::isinf(req.upper) && !(req.tail_scale > 0.0)) {
        throw std::invalid_argument("integrate: tail_scale must be positive");
    }
    if (req.max_subintervals == 0) throw std::invalid_argument("integrate: zero subdivision budget");
}

}  // namespace

IntegrationResult integrate_nothrow(const IntegrationRequest& req) {
    validate(req);

    const bool semi_infinite = std::isinf(req.upper);
    const double a0 = req.lower;
    const double scale = req.tail_scale;
    std::size_t evaluations = 0;

    auto f = [&](double t) -> double {
        ++evaluations;
        if (!semi_infinite) return req.integrand(t);
        const double one_minus = 1.0 - t;
        const double x = a0 + scale * t / one_minus;
        const double v = req.integrand(x);
        return v == 0.0 ? 0.0 : v * scale / (one_minus * one_minus);
    };

    // Initial panels, split at kinks (mapped into the working variable).
    const double lo = semi_infinite ? 0.0 : req.lower;
    const double hi = semi_infinite ? 1.0 : req.upper;
    std::vector<double> cuts{lo};
    for (double k : req.known_kinks) {
        double t = k;
        if (semi_infinite) {
            if (!(k > a0)) continue;
            t = (k - a0) / (k - a0 + scale);
        }
        if (t > lo && t < hi) cuts.push_back(t);
    }
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<Panel> heap;
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Panel p = gk15(f, cuts[i], cuts[i + 1]);
        total += p.value;
        total_err += p.error;
        heap.push(p);
    }

    auto done = [&] { return total_err <= req.rel_tol * std::abs(total) + req.abs_floor; };

    bool converged = done();
    while (!converged && heap.size() < req.max_subintervals) {
        Panel worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;  // panel cannot be split further
        heap.pop();
        Panel left = gk15(f, worst.a, mid);
        Panel right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        converged = done();
    }

    // Re-sum in panel order so the reported value does not carry incremental drift.
    std::vector<Panel> panels;
    panels.reserve(heap.size());
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    double value = 0.0;
    double error = 0.0;
    for (const Panel& p : panels) {
        value += p.value;
        error += p.error;
    }
    converged = error <= req.rel_tol * std::abs(value) + req.abs_floor;

    return {value, error, evaluations, panels.size(), converged};
}

IntegrationResult integrate(const IntegrationRequest& req) {
    IntegrationResult r = integrate_nothrow(req);
    if (!r.converged) {
        throw QuadratureError("integrate: no convergence within " + std::to_string(req.max_subintervals) +
                                  " subintervals (estimate " + std::to_string(r.value) + ", error " +
                                  std::to_string(r.error_estimate) + ")",
                              r);
    }
    return r;
}

}  // namespace uaveh
