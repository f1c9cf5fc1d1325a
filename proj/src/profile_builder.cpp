#include "conesmooth/profile_builder.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace conesmooth {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double transition_kernel(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

double transition_kernel_derivative(double x) {
    return x > 0.0 ? std::exp(-1.0 / x) / (x * x) : 0.0;
}

// Sample radii spanning [a, b] inclusive.
std::vector<double> sample_grid(double a, double b, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

void certify_phi(const RadialFunction& phi, double r1) {
    const double knee = r1 + bump::support_end;
    for (double r : sample_grid(0.0, r1, 257)) {
        const Jet j = phi(r);
        if (j.d1 != 4.0)
            throw ConstructionError("phi_inner_slope", "phi'(" + fmt(r) + ") = " + fmt(j.d1) + ", expected 4");
    }
    for (double r : sample_grid(knee, knee + 10.0, 513)) {
        const Jet j = phi(r);
        if (std::abs(j.d1) > 1e-12)
            throw ConstructionError("phi_tail_slope", "phi'(" + fmt(r) + ") = " + fmt(j.d1) + ", expected 0");
    }
    const double at_knee = phi(knee).value;
    if (std::abs(at_knee - 1.0) > 1e-10)
        throw ConstructionError("phi_unit_value", "phi(1/4 + r1) = " + fmt(at_knee) + ", expected 1");
    for (double r : sample_grid(0.0, knee + 1.0, 4097)) {
        const double v = phi(r).value;
        if (v > 1.0 + 1e-12) throw ConstructionError("phi_bounded", "phi(" + fmt(r) + ") = " + fmt(v) + " > 1");
        if (r > 0.0 && !(v > 0.0))
            throw ConstructionError("phi_positive", "phi(" + fmt(r) + ") = " + fmt(v) + " <= 0");
    }
}

void certify_rho(const RhoComponent& c, double r1, double neck_slope) {
    for (double r : sample_grid(0.0, r1 + 1.0 / 16.0, 257)) {
        const Jet j = c.rho(r);
        if (j.value != 1.0 || j.d1 != 0.0)
            throw ConstructionError("rho_unit_core", "rho(" + fmt(r) + ") = " + fmt(j.value) + ", expected 1");
    }
    for (double r : sample_grid(0.0, r1 + 2.0, 4097)) {
        const Jet j = c.rho(r);
        if (j.d2 < 0.0) throw ConstructionError("rho_convex", "rho''(" + fmt(r) + ") = " + fmt(j.d2));
    }
    for (double r : sample_grid(r1 + 3.0 / 16.0, r1 + 10.0, 513)) {
        const Jet j = c.rho(r);
        if (std::abs(j.d1 - neck_slope) > 1e-12 * neck_slope)
            throw ConstructionError("rho_tail_slope",
                                    "rho'(" + fmt(r) + ") = " + fmt(j.d1) + ", expected " + fmt(neck_slope));
    }
    if (c.delta > 32.0 * neck_slope)
        throw ConstructionError("delta_bound", "delta = " + fmt(c.delta) + " exceeds 32 * neck_slope");
}

} // namespace

double smooth_step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = transition_kernel(x);
    const double b = transition_kernel(1.0 - x);
    return a / (a + b);
}

double smooth_step_derivative(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double a = transition_kernel(x);
    const double b = transition_kernel(1.0 - x);
    const double da = transition_kernel_derivative(x);
    const double db = transition_kernel_derivative(1.0 - x);
    const double d = a + b;
    return (da * b + a * db) / (d * d);
}

BumpSpec::BumpSpec(std::function<double(double)> eta, std::function<double(double)> derivative,
                   std::vector<double> breakpoints)
    : eta_(std::move(eta)), derivative_(std::move(derivative)), breakpoints_(std::move(breakpoints)) {
    breakpoints_.push_back(0.0);
    breakpoints_.push_back(bump::support_end);
    std::sort(breakpoints_.begin(), breakpoints_.end());
    breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());
    std::erase_if(breakpoints_, [](double b) { return b < 0.0 || b > bump::support_end; });
    table_ = std::make_shared<QuadratureTable>(eta_, breakpoints_);
}

BumpCertificate measure_bump(const BumpSpec& eta) {
    BumpCertificate c;
    c.mass = eta.table().total_mass();
    c.min_value = std::numeric_limits<double>::infinity();
    c.min_on_floor = std::numeric_limits<double>::infinity();
    c.max_tail_derivative = -std::numeric_limits<double>::infinity();
    for (double s : sample_grid(-0.05, 0.30, 20001)) {
        const double v = eta(s);
        if (s < 0.0 || s > bump::support_end) {
            c.outside_support_max = std::max(c.outside_support_max, std::abs(v));
            continue;
        }
        c.max_value = std::max(c.max_value, v);
        c.min_value = std::min(c.min_value, v);
    }
    for (double s : sample_grid(bump::floor_begin, bump::floor_end, 4001))
        c.min_on_floor = std::min(c.min_on_floor, eta(s));
    for (double s : sample_grid(bump::tail_begin, bump::support_end, 4001))
        c.max_tail_derivative = std::max(c.max_tail_derivative, eta.derivative(s));
    return c;
}

BumpSpec make_eta(const EtaShape& shape) {
    const double a0 = shape.rise_start, a1 = shape.rise_end;
    const double b0 = shape.fall_start, b1 = shape.fall_end;
    if (!(0.0 <= a0 && a0 < a1 && a1 <= b0 && b0 < b1 && b1 <= bump::support_end))
        throw ConstructionError("shape", "need 0 <= rise_start < rise_end <= fall_start < fall_end <= 1/4");

    // Mass of the unit-amplitude profile: each smooth_step ramp carries half
    // its width since S(x) + S(1 - x) = 1.
    const double unit_mass = 0.5 * (a1 - a0) + (b0 - a1) + 0.5 * (b1 - b0);
    const double amplitude = bump::mass / unit_mass;
    if (amplitude > bump::ceiling)
        throw ConstructionError("mass", "cannot reach mass 4 under ceiling 64; achieved mass " +
                                            fmt(bump::ceiling * unit_mass));

    auto eta = [=](double s) {
        if (s <= a0 || s >= b1) return 0.0;
        if (s < a1) return amplitude * smooth_step((s - a0) / (a1 - a0));
        if (s <= b0) return amplitude;
        return amplitude * smooth_step((b1 - s) / (b1 - b0));
    };
    auto deta = [=](double s) {
        if (s <= a0 || s >= b1) return 0.0;
        if (s < a1) return amplitude * smooth_step_derivative((s - a0) / (a1 - a0)) / (a1 - a0);
        if (s <= b0) return 0.0;
        return -amplitude * smooth_step_derivative((b1 - s) / (b1 - b0)) / (b1 - b0);
    };

    BumpSpec spec(eta, deta, {a0, a1, b0, b1});
    spec.shape_ = std::make_shared<const EtaShape>(shape);
    spec.amplitude_ = amplitude;

    const BumpCertificate c = measure_bump(spec);
    if (std::abs(c.mass - bump::mass) > 1e-10)
        throw ConstructionError("mass", "integral of eta is " + fmt(c.mass) + ", expected 4");
    if (c.max_value > bump::ceiling) throw ConstructionError("ceiling", "max eta = " + fmt(c.max_value));
    if (c.min_value < 0.0) throw ConstructionError("nonnegative", "min eta = " + fmt(c.min_value));
    if (c.outside_support_max != 0.0) throw ConstructionError("support", "eta nonzero outside [0, 1/4]");
    if (c.min_on_floor < bump::floor_value)
        throw ConstructionError("floor", "min eta on [1/16, 3/16] = " + fmt(c.min_on_floor) + " < 16");
    if (c.max_tail_derivative > 0.0)
        throw ConstructionError("tail_monotone", "max eta' on [1/8, 1/4] = " + fmt(c.max_tail_derivative));
    return spec;
}

double compute_r1(const BumpSpec& eta) {
    const double r1 = 0.25 * eta.table().second(bump::support_end);
    if (!(r1 > 0.0 && r1 < 0.25)) throw ConstructionError("r1_range", "r1 = " + fmt(r1) + " outside (0, 1/4)");
    if (r1 < 1.0 / 32.0) throw ConstructionError("r1_lower_bound", "r1 = " + fmt(r1) + " < 1/32");
    return r1;
}

RadialFunction make_phi(const BumpSpec& eta, double r1, double slope) {
    RadialFunction phi = [eta, r1, slope](double r) {
        const double x = r - r1;
        const QuadratureTable& t = eta.table();
        return Jet{slope * r - t.second(x), slope - t.first(x), -eta(x), -eta.derivative(x)};
    };
    if (slope == 4.0) certify_phi(phi, r1);
    return phi;
}

RhoComponent make_rho(const BumpSpec& eta, double r1, double neck_slope) {
    if (!(neck_slope > 0.0) || !std::isfinite(neck_slope)) {
        throw std::invalid_argument("neck_slope must be positive and finite, got " + fmt(neck_slope));
    }
    const double shift = 0.125 + 2.0 * r1;
    // d/dr of the double integral once the bump is crossed: int eta(2s - shift) ds
    const double tail_slope = 0.5 * eta.table().total_mass();
    const double delta = neck_slope / tail_slope;

    RhoComponent out;
    out.delta = delta;
    out.rho = [eta, shift, delta](double r) {
        const double x = 2.0 * r - shift;
        const QuadratureTable& t = eta.table();
        return Jet{1.0 + 0.25 * delta * t.second(x), 0.5 * delta * t.first(x), delta * eta(x),
                   2.0 * delta * eta.derivative(x)};
    };
    certify_rho(out, r1, neck_slope);
    return out;
}

double default_neck_slope() { return std::exp(-100.0); }

ProfilePair build_profile(const BumpSpec& eta, double neck_slope, ProfileVariant variant) {
    const double r1 = compute_r1(eta);
    ProfilePair p;
    p.phi = make_phi(eta, r1, variant == ProfileVariant::doubled_inner_slope ? 8.0 : 4.0);
    RhoComponent rho = make_rho(eta, r1, neck_slope);
    p.rho = std::move(rho.rho);
    p.r1 = r1;
    p.delta = rho.delta;
    p.neck_slope = neck_slope;
    p.variant = variant;
    return p;
}

ProfilePair build_profile(double neck_slope, const EtaShape& shape, ProfileVariant variant) {
    return build_profile(make_eta(shape), neck_slope, variant);
}

bool SmoothnessReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const SmoothnessCheck& c) { return c.pass; });
}

const SmoothnessCheck* SmoothnessReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

SmoothnessReport smoothness_check(const ProfilePair& profile, double step) {
    // Higher-order stencils use wider steps so that rounding stays below the
    // tolerance: error ~ eps / h^k.
    const double h1 = step;
    const double h2 = 10.0 * step;
    const double h3 = 100.0 * step;
    auto rho = [&](double r) { return profile.rho(r).value; };
    auto phi = [&](double r) { return profile.phi(r).value; };
    auto prod = [&](double r) { return rho(r) * phi(r); };

    SmoothnessReport report;
    auto add = [&](std::string name, double value, double expected, double tol) {
        report.checks.push_back({std::move(name), value, expected, tol, std::abs(value - expected) <= tol});
    };
    add("phi(0)", phi(0.0), 0.0, 1e-12);
    add("phi'(0)", (phi(h1) - phi(-h1)) / (2.0 * h1), 4.0, 1e-7);
    add("rho(0)", rho(0.0), 1.0, 1e-12);
    add("rho'(0)", (rho(h1) - rho(-h1)) / (2.0 * h1), 0.0, 1e-7);
    add("rho'''(0)", (rho(2.0 * h3) - 2.0 * rho(h3) + 2.0 * rho(-h3) - rho(-2.0 * h3)) / (2.0 * h3 * h3 * h3), 0.0,
        1e-4);
    add("(rho phi)''(0)", (prod(h2) - 2.0 * prod(0.0) + prod(-h2)) / (h2 * h2), 0.0, 1e-5);
    return report;
}

} // namespace conesmooth
