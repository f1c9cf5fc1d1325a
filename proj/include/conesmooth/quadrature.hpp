#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace conesmooth {

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre recurrence.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    static const GaussLegendreRule& get(std::size_t order);

    /// Integral of f over [a, b].
    template <class F>
    double integrate(F&& f, double a, double b) const {
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(mid + half * nodes[i]);
        return half * sum;
    }
};

/// Cumulative antiderivatives of a nonnegative integrand supported on
/// [support_begin, support_end], smooth between the given breakpoints:
///   first(x)  = int_{support_begin}^x f(s) ds
///   second(x) = int_{support_begin}^x (x - s) f(s) ds
/// Both are exact continuations outside the support (constant / affine).
class QuadratureTable {
public:
    QuadratureTable(std::function<double(double)> integrand, std::vector<double> breakpoints,
                    std::size_t panels_per_piece = 48);

    double first(double x) const;
    double second(double x) const;

    double total_mass() const { return first_.back(); }
    /// int s f(s) ds over the support.
    double first_moment() const { return first_moment_; }

    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& first_samples() const { return first_; }
    const std::vector<double>& second_samples() const { return second_; }
    const std::string& rule() const { return rule_; }
    /// Sum over panels of |GL16 - GL8| for the panel masses.
    double tolerance_achieved() const { return tolerance_; }

private:
    std::size_t panel_of(double x) const;

    std::function<double(double)> f_;
    std::vector<double> grid_;
    std::vector<double> values_;
    std::vector<double> first_;
    std::vector<double> second_;
    double first_moment_ = 0.0;
    std::string rule_;
    double tolerance_ = 0.0;
};

} // namespace conesmooth
