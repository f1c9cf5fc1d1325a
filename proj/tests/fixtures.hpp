#pragma once

#include <cmath>
#include <random>

#include "conesmooth/profile.hpp"

namespace fixtures {

using conesmooth::Jet;
using conesmooth::ProfilePair;

// a + b r + s sin(w r + p); positive for r >= 0 when a > |s| and b >= 0.
inline conesmooth::RadialFunction sine_profile(double a, double b, double s, double w, double p) {
    return [=](double r) {
        const double arg = w * r + p;
        return Jet{a + b * r + s * std::sin(arg), b + s * w * std::cos(arg), -s * w * w * std::sin(arg),
                   -s * w * w * w * std::cos(arg)};
    };
}

// a exp(k r) + s cos(w r), positive on the sampled range when a > |s|.
inline conesmooth::RadialFunction exp_profile(double a, double k, double s, double w) {
    return [=](double r) {
        const double e = a * std::exp(k * r);
        return Jet{e + s * std::cos(w * r), k * e - s * w * std::sin(w * r), k * k * e - s * w * w * std::cos(w * r),
                   k * k * k * e + s * w * w * w * std::sin(w * r)};
    };
}

struct RandomProfile {
    ProfilePair profile;
    double r = 1.0;
};

// Random smooth (rho, phi) with analytic derivatives and a radius in [0.2, 3].
inline RandomProfile random_profile(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto between = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };
    conesmooth::RadialFunction rho, phi;
    if (u(rng) < 0.5) {
        const double s = between(-0.4, 0.4);
        rho = sine_profile(std::abs(s) + between(0.3, 2.0), between(0.0, 1.5), s, between(0.5, 4.0),
                           between(0.0, 6.3));
    } else {
        const double s = between(-0.3, 0.3);
        rho = exp_profile(std::abs(s) + between(0.3, 1.5), between(-0.3, 0.6), s, between(0.5, 3.0));
    }
    const double s = between(-0.3, 0.3);
    phi = sine_profile(std::abs(s) + between(0.2, 1.5), between(0.0, 0.5), s, between(0.5, 4.0), between(0.0, 6.3));
    return {conesmooth::make_closed_form_profile(rho, phi), between(0.2, 3.0)};
}

inline ProfilePair flat_profile() {
    return conesmooth::make_closed_form_profile(conesmooth::linear_function(1.0), conesmooth::constant_function(1.0));
}

inline ProfilePair round_profile() {
    return conesmooth::make_closed_form_profile(conesmooth::constant_function(1.0),
                                                conesmooth::constant_function(1.0));
}

inline bool close_rel(double a, double b, double rel, double abs_tol) {
    return std::abs(a - b) <= std::max(abs_tol, rel * std::abs(b));
}

} // namespace fixtures
