#include "uaveh/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace uaveh {

namespace {

// Relative slack for r >= h checks; sqrt(d^2 + h^2) with d = 0 may land an ulp below h.
constexpr double kGeometrySlack = 1e-12;

void check_link(double r, double h) {
    if (!(h > 0.0) || !(r >= h * (1.0 - kGeometrySlack))) {
        throw std::domain_error("link requires r >= h > 0 (r=" + std::to_string(r) +
                                ", h=" + std::to_string(h) + ")");
    }
}

// b * exp(-c * (theta_deg - b)), the odds of NLOS against LOS in the high-altitude model.
double high_altitude_nlos_odds(const LosModel& m, double r, double h) {
    const double ratio = std::clamp(h / r, 0.0, 1.0);
    const double theta_deg = 180.0 / std::numbers::pi * std::asin(ratio);
    return m.b * std::exp(-m.c * (theta_deg - m.b));
}

}  // namespace

std::string_view to_string(LinkState s) { return s == LinkState::Los ? "LOS" : "NLOS"; }

std::string_view to_string(Orientation o) {
    switch (o) {
        case Orientation::HH: return "HH";
        case Orientation::HV: return "HV";
        case Orientation::VV: return "VV";
    }
    return "?";
}

Orientation parse_orientation(std::string_view text) {
    if (text == "HH") return Orientation::HH;
    if (text == "HV" || text == "VH") return Orientation::HV;
    if (text == "VV") return Orientation::VV;
    throw std::invalid_argument("unknown antenna orientation '" + std::string(text) + "'");
}

std::string_view to_string(LosModelKind k) {
    switch (k) {
        case LosModelKind::HighAltitude: return "high";
        case LosModelKind::LowAltitude: return "low";
        case LosModelKind::AlwaysLos: return "always";
    }
    return "?";
}

LosModelKind parse_los_model(std::string_view text) {
    if (text == "high") return LosModelKind::HighAltitude;
    if (text == "low") return LosModelKind::LowAltitude;
    if (text == "always") return LosModelKind::AlwaysLos;
    throw std::invalid_argument("unknown LOS model '" + std::string(text) +
                                "' (expected high, low or always)");
}

double los_probability(const LosModel& model, double r, double h) {
    check_link(r, h);
    switch (model.kind) {
        case LosModelKind::HighAltitude:
            return 1.0 / (1.0 + high_altitude_nlos_odds(model, r, h));
        case LosModelKind::LowAltitude: {
            const double decay = std::exp(-r / 63.0);
            return std::min(1.0, kLowAltitudeKinkM / r) * (1.0 - decay) + decay;
        }
        case LosModelKind::AlwaysLos:
            return 1.0;
    }
    return 1.0;
}

double nlos_probability(const LosModel& model, double r, double h) {
    check_link(r, h);
    switch (model.kind) {
        case LosModelKind::HighAltitude: {
            const double odds = high_altitude_nlos_odds(model, r, h);
            return odds / (1.0 + odds);
        }
        case LosModelKind::LowAltitude: {
            const double blocked = 1.0 - std::min(1.0, kLowAltitudeKinkM / r);
            return blocked * -std::expm1(-r / 63.0);
        }
        case LosModelKind::AlwaysLos:
            return 0.0;
    }
    return 0.0;
}

double state_probability(const LosModel& model, LinkState s, double r, double h) {
    return s == LinkState::Los ? los_probability(model, r, h) : nlos_probability(model, r, h);
}

double path_loss(double r, double alpha) {
    if (alpha == 2.0) return r * r;
    if (alpha == 4.0) {
        const double r2 = r * r;
        return r2 * r2;
    }
    return std::pow(r, alpha);
}

double antenna_gain_angle(Orientation o, double theta) {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    switch (o) {
        case Orientation::HH: return s * s;
        case Orientation::HV: return s * c;
        case Orientation::VV: return c * c;
    }
    return 0.0;
}

double antenna_gain_geometry(Orientation o, double h, double d) {
    const double r2 = h * h + d * d;
    switch (o) {
        case Orientation::HH: return h * h / r2;
        case Orientation::HV: return h * d / r2;
        case Orientation::VV: return d * d / r2;
    }
    return 0.0;
}

double effective_gain_hh(double path_loss_value, double alpha, double h) {
    const double floor = std::pow(h, alpha);
    if (!(path_loss_value >= floor * (1.0 - kGeometrySlack))) {
        throw std::domain_error("effective_gain_hh: path loss below h^alpha");
    }
    return std::min(1.0, h * h * std::pow(path_loss_value, -2.0 / alpha));
}

}  // namespace uaveh
