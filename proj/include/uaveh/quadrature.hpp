#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace uaveh {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// One-dimensional integral over [lower, upper]; `upper` may be +infinity.
///
/// Semi-infinite ranges are mapped onto [0, 1) through
/// x = lower + tail_scale * u / (1 - u), so `tail_scale` should be of the
/// order of the integrand's decay length. Points in `known_kinks` that fall
/// strictly inside the range become initial panel boundaries.
struct IntegrationRequest {
    std::function<double(double)> integrand;
    double lower = 0.0;
    double upper = 1.0;
    double rel_tol = 1e-8;
    double abs_floor = 1e-15;
    std::vector<double> known_kinks;
    double tail_scale = 1.0;
    std::size_t max_subintervals = 2000;
};

struct IntegrationResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
    std::size_t subintervals = 0;
    bool converged = false;
};

/// Raised when the subdivision budget runs out; carries the best estimate.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, IntegrationResult best)
        : std::runtime_error(what), best_(best) {}
    const IntegrationResult& best_estimate() const { return best_; }

private:
    IntegrationResult best_;
};

/// Globally adaptive 7/15-point Gauss-Kronrod integration. Converged when
/// error_estimate <= rel_tol * |value| + abs_floor. Throws QuadratureError on
/// budget exhaustion and std::invalid_argument on a malformed request.
IntegrationResult integrate(const IntegrationRequest& req);

/// As integrate(), but reports non-convergence through `converged` instead of throwing.
IntegrationResult integrate_nothrow(const IntegrationRequest& req);

}  // namespace uaveh
