#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace conesmooth {

/// Value of a scalar radial function together with its first three derivatives.
struct Jet {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;
};

using RadialFunction = std::function<Jet(double)>;

/// Thrown when an evaluation leaves the domain where the frame is defined.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Which construction produced a profile; recorded in serialized profiles.
enum class ProfileVariant {
    custom,            // closed-form test profile supplied by the caller
    standard,          // the smoothing construction
    doubled_inner_slope // negative control: phi' = 8 on [0, r1]
};

/// The pair of warping functions (rho, phi) defining
///   g = dr^2 + rho(r)^2 (phi(r)^2 sigma1^2 + sigma2^2 + sigma3^2)
/// plus the constants of the construction. Immutable once built; the
/// stored callables must be safe to call concurrently.
struct ProfilePair {
    RadialFunction rho;
    RadialFunction phi;
    double r1 = 0.0;
    double delta = 0.0;
    double neck_slope = 0.0;
    // Radii on which rho and phi are defined.
    double domain_min = 0.0;
    double domain_max = std::numeric_limits<double>::infinity();
    ProfileVariant variant = ProfileVariant::custom;

    bool covers(double a, double b) const { return a >= domain_min && b <= domain_max; }
};

/// Closed-form profile from constant/linear pieces, mostly for fixtures.
ProfilePair make_closed_form_profile(RadialFunction rho, RadialFunction phi,
                                     double domain_min = 0.0,
                                     double domain_max = std::numeric_limits<double>::infinity());

inline RadialFunction constant_function(double c) {
    return [c](double) { return Jet{c, 0.0, 0.0, 0.0}; };
}

inline RadialFunction linear_function(double slope, double offset = 0.0) {
    return [slope, offset](double r) { return Jet{offset + slope * r, slope, 0.0, 0.0}; };
}

std::string to_string(ProfileVariant v);
ProfileVariant profile_variant_from_string(const std::string& s);

} // namespace conesmooth
