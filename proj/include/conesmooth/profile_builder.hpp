#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "conesmooth/profile.hpp"
#include "conesmooth/quadrature.hpp"

namespace conesmooth {

/// A certified claim about a construction failed. claim() names it.
class ConstructionError : public std::runtime_error {
public:
    ConstructionError(std::string claim, const std::string& detail)
        : std::runtime_error(claim + ": " + detail), claim_(std::move(claim)) {}
    const std::string& claim() const { return claim_; }

private:
    std::string claim_;
};

namespace bump {
inline constexpr double support_end = 0.25;
inline constexpr double ceiling = 64.0;
inline constexpr double mass = 4.0;
inline constexpr double floor_value = 16.0;
inline constexpr double floor_begin = 1.0 / 16.0;
inline constexpr double floor_end = 3.0 / 16.0;
inline constexpr double tail_begin = 1.0 / 8.0;
} // namespace bump

/// Plateau bump: C-infinity rise on [rise_start, rise_end], constant on
/// [rise_end, fall_start], mirrored fall on [fall_start, fall_end]. The
/// amplitude is fixed by the mass constraint.
struct EtaShape {
    double rise_start = 0.0;
    double rise_end = 1.0 / 16.0;
    double fall_start = 3.0 / 16.0;
    double fall_end = 0.25;
};

/// C-infinity transition from 0 (x <= 0) to 1 (x >= 1) built from exp(-1/x).
double smooth_step(double x);
double smooth_step_derivative(double x);

/// The cutoff eta together with its closed-form derivative and the
/// breakpoints between its smooth pieces.
class BumpSpec {
public:
    BumpSpec(std::function<double(double)> eta, std::function<double(double)> derivative,
             std::vector<double> breakpoints);

    double operator()(double s) const { return eta_(s); }
    double derivative(double s) const { return derivative_(s); }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const QuadratureTable& table() const { return *table_; }

    /// Shape this bump was built from; only set by make_eta.
    const EtaShape* shape() const { return shape_ ? shape_.get() : nullptr; }
    double amplitude() const { return amplitude_; }

private:
    friend BumpSpec make_eta(const EtaShape&);

    std::function<double(double)> eta_;
    std::function<double(double)> derivative_;
    std::vector<double> breakpoints_;
    std::shared_ptr<const QuadratureTable> table_;
    std::shared_ptr<const EtaShape> shape_;
    double amplitude_ = 0.0;
};

struct BumpCertificate {
    double mass = 0.0;
    double max_value = 0.0;
    double min_value = 0.0;
    double min_on_floor = 0.0;
    double max_tail_derivative = 0.0;
    double outside_support_max = 0.0;
};

/// Sweeps eta on a dense grid and measures every constraint.
BumpCertificate measure_bump(const BumpSpec& eta);

/// Builds and certifies the default plateau bump (or the given shape).
/// Throws ConstructionError naming the first violated constraint.
BumpSpec make_eta(const EtaShape& shape = {});

/// r1 = (1/4) int_0^{1/4} (1/4 - s) eta(s) ds. Throws ConstructionError when
/// r1 falls outside (0, 1/4) or below 1/32.
double compute_r1(const BumpSpec& eta);

/// phi(r) = slope * r - int_0^r int_0^{t - r1} eta(s) ds dt; slope = 4 for
/// the construction. Certifies the claimed properties when slope == 4.
RadialFunction make_phi(const BumpSpec& eta, double r1, double slope = 4.0);

struct RhoComponent {
    RadialFunction rho;
    double delta = 0.0;
};

/// rho(r) = 1 + delta int_0^r int_0^t eta(2s - 1/8 - 2 r1) ds dt with delta
/// normalized so that rho' = neck_slope once the bump has been crossed.
/// Throws std::invalid_argument for neck_slope <= 0.
RhoComponent make_rho(const BumpSpec& eta, double r1, double neck_slope);

/// Slope of rho on the tail in the construction from the literature.
double default_neck_slope();

/// Full profile pair from a certified bump.
ProfilePair build_profile(const BumpSpec& eta, double neck_slope,
                          ProfileVariant variant = ProfileVariant::standard);

/// make_eta(shape) followed by build_profile.
ProfilePair build_profile(double neck_slope, const EtaShape& shape = {},
                          ProfileVariant variant = ProfileVariant::standard);

struct SmoothnessCheck {
    std::string name;
    double value = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct SmoothnessReport {
    std::vector<SmoothnessCheck> checks;
    bool all_pass() const;
    const SmoothnessCheck* find(const std::string& name) const;
};

/// Finite-difference checks at r = 0 of phi(0) = 0, phi'(0) = 4, rho(0) = 1,
/// rho'(0) = 0, rho'''(0) = 0 and (rho phi)''(0) = 0. Profiles are evaluated
/// on both sides of 0 through their natural extension. Failures are
/// reported, never thrown.
SmoothnessReport smoothness_check(const ProfilePair& profile, double step = 1e-5);

} // namespace conesmooth
