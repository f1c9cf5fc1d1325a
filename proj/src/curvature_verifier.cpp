#include "conesmooth/curvature_verifier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "conesmooth/profile_builder.hpp"

namespace conesmooth {

namespace {

struct Sample {
    double r = 0.0;
    RicciDiag ric;
    Jet rho;
    Jet phi;
};

struct Quantity {
    DeclaredBound bound;
    std::function<double(const Sample&)> value;
};

Sample evaluate(const ProfilePair& profile, double r) {
    return Sample{r, ricci_diag(profile, r), profile.rho(r), profile.phi(r)};
}

std::vector<Sample> evaluate_many(const ProfilePair& profile, const std::vector<double>& radii, unsigned threads) {
    std::vector<Sample> out(radii.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, radii.size() / 256)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < radii.size(); ++i) out[i] = evaluate(profile, radii[i]);
        return out;
    }
    // Each worker owns a contiguous slice, so the merged result does not
    // depend on scheduling.
    std::vector<std::jthread> workers;
    std::vector<std::exception_ptr> errors(threads);
    const std::size_t chunk = (radii.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        workers.emplace_back([&, t] {
            try {
                const std::size_t lo = t * chunk;
                const std::size_t hi = std::min(radii.size(), lo + chunk);
                for (std::size_t i = lo; i < hi; ++i) out[i] = evaluate(profile, radii[i]);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    workers.clear();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

double ricci_variation(const Sample& a, const Sample& b) {
    double v = 0.0;
    for (std::size_t i = 0; i < 4; ++i) v = std::max(v, std::abs(a.ric[i] - b.ric[i]));
    return v;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

bool is_default_slope(double c) { return c == default_neck_slope(); }

Quantity ricci_quantity(std::size_t i, double lower, std::string symbolic) {
    Quantity q;
    q.bound.quantity = "Ric(e" + std::to_string(i) + ",e" + std::to_string(i) + ")";
    q.bound.symbolic = ">= " + std::move(symbolic);
    q.bound.lower = lower;
    q.value = [i](const Sample& s) { return s.ric[i]; };
    return q;
}

Quantity range_quantity(std::string name, std::string symbolic, double lower, double upper,
                        std::function<double(const Sample&)> f) {
    Quantity q;
    q.bound.quantity = std::move(name);
    q.bound.symbolic = std::move(symbolic);
    q.bound.lower = lower;
    q.bound.upper = upper;
    q.value = std::move(f);
    return q;
}

std::vector<Quantity> declared_quantities(const ProfilePair& profile, RegionLabel label) {
    std::vector<Quantity> qs;
    const double c = profile.neck_slope;
    const double delta = profile.delta;
    const double r1 = profile.r1;
    const bool constructed = profile.variant == ProfileVariant::standard;

    switch (label) {
    case RegionLabel::part1:
        qs.push_back(ricci_quantity(0, 0.0, "0"));
        qs.push_back(ricci_quantity(1, 0.0, "0"));
        qs.push_back(ricci_quantity(2, 2.0, "2"));
        qs.push_back(ricci_quantity(3, 2.0, "2"));
        break;
    case RegionLabel::part2: {
        // -3 rho''/rho >= -192 delta and 2 rho' phi' / (rho phi) <= 2 c / r1
        const double slack = constructed ? 192.0 * delta + 2.0 * c / r1 : 0.0;
        std::string symbolic = is_default_slope(c) ? "16 - e^-80 (composite slack " + fmt(slack) + ")"
                                                 : "16 - (192 delta + 2c/r1) = " + fmt(16.0 - slack);
        qs.push_back(ricci_quantity(0, 16.0 - slack, symbolic));
        for (std::size_t i = 1; i < 4; ++i) qs.push_back(ricci_quantity(i, 0.0, "0"));
        if (constructed) {
            qs.push_back(range_quantity("rho''", "in [0, 64 delta]", 0.0, 64.0 * delta,
                                        [](const Sample& s) { return s.rho.d2; }));
            qs.push_back(range_quantity("phi''", "<= -16", -std::numeric_limits<double>::infinity(), -16.0,
                                        [](const Sample& s) { return s.phi.d2; }));
            qs.push_back(range_quantity("rho", "in [1, 2]", 1.0, 2.0, [](const Sample& s) { return s.rho.value; }));
            qs.push_back(range_quantity("rho'", "in [0, c]", 0.0, c, [](const Sample& s) { return s.rho.d1; }));
            qs.push_back(range_quantity("phi", "in [4 r1, 1]", 4.0 * r1, 1.0,
                                        [](const Sample& s) { return s.phi.value; }));
            qs.push_back(range_quantity("phi'", "in [0, 4]", 0.0, 4.0, [](const Sample& s) { return s.phi.d1; }));
        }
        break;
    }
    case RegionLabel::part3:
        for (std::size_t i = 0; i < 4; ++i) qs.push_back(ricci_quantity(i, 0.0, "0"));
        if (constructed) {
            Quantity mono;
            mono.bound.quantity = "phi''";
            mono.bound.symbolic = "nondecreasing in r";
            mono.bound.monotone_nondecreasing = true;
            mono.value = [](const Sample& s) { return s.phi.d2; };
            qs.push_back(std::move(mono));
            qs.push_back(range_quantity("phi'", ">= 0", 0.0, std::numeric_limits<double>::infinity(),
                                        [](const Sample& s) { return s.phi.d1; }));
            qs.push_back(range_quantity("phi' + phi''/16", "<= 0", -std::numeric_limits<double>::infinity(), 0.0,
                                        [](const Sample& s) { return s.phi.d1 + s.phi.d2 / 16.0; }));
            qs.push_back(range_quantity("rho'", "= c", c, c, [](const Sample& s) { return s.rho.d1; }));
        }
        break;
    case RegionLabel::part4: {
        qs.push_back(range_quantity("Ric(e0,e0)", "= 0", 0.0, 0.0, [](const Sample& s) { return s.ric.r00; }));
        const double floor = 2.0 - 2.0 * c * c;
        const std::string symbolic = is_default_slope(c) ? ">= 2 - 2e^-200" : ">= 2 - 2c^2 = " + fmt(floor);
        // Ric(X_i, X_i) in the coordinate frame: orthonormal entry times |X_i|^2.
        qs.push_back(range_quantity("Ric(X1,X1)", symbolic, floor, std::numeric_limits<double>::infinity(),
                                    [](const Sample& s) {
                                        const double len = s.rho.value * s.phi.value;
                                        return s.ric.r11 * len * len;
                                    }));
        qs.push_back(range_quantity("Ric(X2,X2)", symbolic, floor, std::numeric_limits<double>::infinity(),
                                    [](const Sample& s) { return s.ric.r22 * s.rho.value * s.rho.value; }));
        qs.push_back(range_quantity("Ric(X3,X3)", symbolic, floor, std::numeric_limits<double>::infinity(),
                                    [](const Sample& s) { return s.ric.r33 * s.rho.value * s.rho.value; }));
        if (constructed) {
            qs.push_back(range_quantity("phi", "= 1", 1.0, 1.0, [](const Sample& s) { return s.phi.value; }));
            qs.push_back(range_quantity("rho", ">= 1", 1.0, std::numeric_limits<double>::infinity(),
                                        [](const Sample& s) { return s.rho.value; }));
            qs.push_back(range_quantity("rho'", "= c", c, c, [](const Sample& s) { return s.rho.d1; }));
        }
        break;
    }
    case RegionLabel::sweep:
        for (std::size_t i = 0; i < 4; ++i) qs.push_back(ricci_quantity(i, 0.0, "0"));
        break;
    }
    return qs;
}

// Golden-section search for the minimum of sign * f on [a, b].
template <class F>
double golden_argmin(F&& f, double a, double b) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - g * (b - a);
    double x2 = a + g * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 80 && (b - a) > 1e-14 * std::max(1.0, std::abs(b)); ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? x1 : x2;
}

void sort_unique(std::vector<Sample>& samples) {
    std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) { return a.r < b.r; });
    samples.erase(std::unique(samples.begin(), samples.end(),
                              [](const Sample& a, const Sample& b) { return a.r == b.r; }),
                  samples.end());
}

// Adds golden-section samples at interior extrema of f (sign = +1 for
// minima, -1 for maxima).
void refine_extremum(const ProfilePair& profile, std::vector<Sample>& samples,
                     const std::function<double(const Sample&)>& f, double sign) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (sign * f(samples[i]) < sign * f(samples[best])) best = i;
    if (best == 0 || best + 1 == samples.size()) return;
    const double a = samples[best - 1].r;
    const double b = samples[best + 1].r;
    const double x = golden_argmin([&](double r) { return sign * f(evaluate(profile, r)); }, a, b);
    samples.push_back(evaluate(profile, x));
}

} // namespace

std::string to_string(RegionLabel label) {
    switch (label) {
    case RegionLabel::part1: return "Part1";
    case RegionLabel::part2: return "Part2";
    case RegionLabel::part3: return "Part3";
    case RegionLabel::part4: return "Part4";
    case RegionLabel::sweep: return "Sweep";
    }
    return "Sweep";
}

std::array<Region, 4> proof_regions(double r1, double r_max) {
    return {Region{RegionLabel::part1, kInnerCutoff, r1 + 1.0 / 16.0},
            Region{RegionLabel::part2, r1 + 1.0 / 16.0, r1 + 3.0 / 16.0},
            Region{RegionLabel::part3, r1 + 3.0 / 16.0, r1 + 0.25},
            Region{RegionLabel::part4, r1 + 0.25, r_max}};
}

VerificationReport verify_region(const ProfilePair& profile, const Region& region, const VerifyOptions& options) {
    if (options.n_grid < 64) throw std::invalid_argument("n_grid must be at least 64");
    const double a = std::max(region.begin, kInnerCutoff);
    const double b = region.end;
    if (!(b > a)) throw DomainError("empty region [" + fmt(a) + ", " + fmt(b) + "]");
    if (!profile.covers(a, b)) {
        throw DomainError("profile defined on [" + fmt(profile.domain_min) + ", " + fmt(profile.domain_max) +
                          "] does not cover region " + to_string(region.label) + " [" + fmt(a) + ", " + fmt(b) +
                          "]");
    }
    const double tol = options.tol;

    std::vector<double> radii(options.n_grid);
    for (std::size_t i = 0; i < options.n_grid; ++i)
        radii[i] = i + 1 == options.n_grid ? b : a + (b - a) * static_cast<double>(i) / (options.n_grid - 1);
    std::vector<Sample> samples = evaluate_many(profile, radii, options.threads);

    // Endpoint refinement: bisect toward each endpoint until the neighbouring
    // sample agrees with the endpoint value to tol.
    for (int side = 0; side < 2; ++side) {
        const Sample end = side == 0 ? samples.front() : samples.back();
        double inner = side == 0 ? samples[1].r : samples[samples.size() - 2].r;
        for (int depth = 0; depth < 60; ++depth) {
            const double mid = 0.5 * (end.r + inner);
            if (mid == end.r || mid == inner) break;
            const Sample s = evaluate(profile, mid);
            samples.push_back(s);
            if (ricci_variation(s, end) < tol) break;
            inner = mid;
        }
    }
    sort_unique(samples);

    std::vector<Quantity> quantities = declared_quantities(profile, region.label);
    for (std::size_t i = 0; i < 4; ++i) {
        refine_extremum(profile, samples, [i](const Sample& s) { return s.ric[i]; }, 1.0);
        refine_extremum(profile, samples, [i](const Sample& s) { return s.ric[i]; }, -1.0);
    }
    for (const auto& q : quantities) {
        if (q.bound.monotone_nondecreasing) continue;
        if (std::isfinite(q.bound.lower)) refine_extremum(profile, samples, q.value, 1.0);
        if (std::isfinite(q.bound.upper)) refine_extremum(profile, samples, q.value, -1.0);
    }
    sort_unique(samples);

    VerificationReport report;
    report.label = region.label;
    report.begin = a;
    report.end = b;
    report.grid_size = options.n_grid;
    report.sample_count = samples.size();
    report.tolerance = tol;

    std::array<double, 4> mins, maxs;
    mins.fill(std::numeric_limits<double>::infinity());
    maxs.fill(-std::numeric_limits<double>::infinity());
    report.curve.reserve(samples.size());
    for (const auto& s : samples) {
        for (std::size_t i = 0; i < 4; ++i) {
            if (s.ric[i] < mins[i]) {
                mins[i] = s.ric[i];
                report.argmin[i] = s.r;
            }
            maxs[i] = std::max(maxs[i], s.ric[i]);
        }
        report.curve.push_back({s.r, s.ric});
    }
    report.minima = {mins[0], mins[1], mins[2], mins[3]};
    report.maxima = {maxs[0], maxs[1], maxs[2], maxs[3]};

    report.pass = true;
    for (auto& q : quantities) {
        DeclaredBound bound = q.bound;
        if (bound.monotone_nondecreasing) {
            // observed_min holds the most negative forward difference
            double worst = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i + 1 < samples.size(); ++i)
                worst = std::min(worst, q.value(samples[i + 1]) - q.value(samples[i]));
            bound.observed_min = worst;
            bound.observed_max = worst;
            bound.pass = worst >= -tol;
        } else {
            for (const auto& s : samples) {
                const double v = q.value(s);
                bound.observed_min = std::min(bound.observed_min, v);
                bound.observed_max = std::max(bound.observed_max, v);
            }
            bound.pass = bound.observed_min >= bound.lower - tol && bound.observed_max <= bound.upper + tol;
        }
        report.pass = report.pass && bound.pass;
        report.bounds.push_back(std::move(bound));
    }
    return report;
}

VerificationReport verify_nonneg(const ProfilePair& profile, double r_max, const VerifyOptions& options) {
    return verify_region(profile, Region{RegionLabel::sweep, kInnerCutoff, r_max}, options);
}

std::vector<VerificationReport> verify_all(const ProfilePair& profile, double r_max, const VerifyOptions& options) {
    std::vector<VerificationReport> out;
    for (const Region& region : proof_regions(profile.r1, r_max)) out.push_back(verify_region(profile, region, options));
    out.push_back(verify_nonneg(profile, r_max, options));
    return out;
}

} // namespace conesmooth
