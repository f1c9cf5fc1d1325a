#include "conesmooth/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace conesmooth {

namespace {

GaussLegendreRule compute_rule(std::size_t n) {
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

} // namespace

const GaussLegendreRule& GaussLegendreRule::get(std::size_t order) {
    static std::mutex mutex;
    static std::map<std::size_t, std::unique_ptr<GaussLegendreRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[order];
    if (!slot) slot = std::make_unique<GaussLegendreRule>(compute_rule(order));
    return *slot;
}

QuadratureTable::QuadratureTable(std::function<double(double)> integrand, std::vector<double> breakpoints,
                                 std::size_t panels_per_piece)
    : f_(std::move(integrand)) {
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
    if (breakpoints.size() < 2) throw std::invalid_argument("quadrature table needs at least two breakpoints");
    if (panels_per_piece == 0) throw std::invalid_argument("panels_per_piece must be positive");

    grid_.push_back(breakpoints.front());
    for (std::size_t p = 0; p + 1 < breakpoints.size(); ++p) {
        const double a = breakpoints[p];
        const double b = breakpoints[p + 1];
        for (std::size_t k = 1; k <= panels_per_piece; ++k)
            grid_.push_back(k == panels_per_piece ? b : a + (b - a) * static_cast<double>(k) / panels_per_piece);
    }

    const auto& fine = GaussLegendreRule::get(16);
    const auto& coarse = GaussLegendreRule::get(8);
    rule_ = "gauss-legendre-16 composite, " + std::to_string(panels_per_piece) + " panels per smooth piece";

    values_.resize(grid_.size());
    first_.assign(grid_.size(), 0.0);
    second_.assign(grid_.size(), 0.0);
    for (std::size_t i = 0; i < grid_.size(); ++i) values_[i] = f_(grid_[i]);
    for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
        const double a = grid_[i];
        const double b = grid_[i + 1];
        const double mass = fine.integrate(f_, a, b);
        const double tail = fine.integrate([&](double s) { return (b - s) * f_(s); }, a, b);
        first_moment_ += fine.integrate([&](double s) { return s * f_(s); }, a, b);
        tolerance_ += std::abs(mass - coarse.integrate(f_, a, b));
        first_[i + 1] = first_[i] + mass;
        second_[i + 1] = second_[i] + (b - a) * first_[i] + tail;
    }
}

std::size_t QuadratureTable::panel_of(double x) const {
    auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
    return static_cast<std::size_t>(std::distance(grid_.begin(), it)) - 1;
}

double QuadratureTable::first(double x) const {
    if (x <= grid_.front()) return 0.0;
    if (x >= grid_.back()) return first_.back();
    const std::size_t k = panel_of(x);
    const double a = grid_[k];
    if (x == a) return first_[k];
    static const GaussLegendreRule& rule = GaussLegendreRule::get(16);
    return first_[k] + rule.integrate(f_, a, x);
}

double QuadratureTable::second(double x) const {
    if (x <= grid_.front()) return 0.0;
    if (x >= grid_.back()) {
        // int (x - s) f = x M0 - M1 once the whole support lies below x
        const double a = grid_.back();
        return second_.back() + (x - a) * first_.back();
    }
    const std::size_t k = panel_of(x);
    const double a = grid_[k];
    if (x == a) return second_[k];
    static const GaussLegendreRule& rule = GaussLegendreRule::get(16);
    const double local = rule.integrate([&](double s) { return (x - s) * f_(s); }, a, x);
    return second_[k] + (x - a) * first_[k] + local;
}

} // namespace conesmooth
