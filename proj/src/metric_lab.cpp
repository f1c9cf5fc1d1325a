#include "conesmooth/metric_lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <queue>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace conesmooth {

namespace {

// Edge weights are rounded to multiples of 2^-36 and summed as integers.
constexpr double kFixedScale = 68719476736.0; // 2^36

std::int64_t to_fixed(double length) { return static_cast<std::int64_t>(std::llround(length * kFixedScale)); }

unsigned resolve_threads(unsigned threads, std::size_t work) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, work)));
}

// Runs body(i) for i in [0, n) over contiguous slices.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
    threads = resolve_threads(threads, n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::jthread> workers;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        workers.emplace_back([&, t] {
            const std::size_t lo = t * chunk;
            const std::size_t hi = std::min(n, lo + chunk);
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
}

// Linear interpolation of f on a uniform grid over [a, b].
std::function<double(double)> tabulate(const std::function<double(double)>& f, double a, double b,
                                       std::size_t n = 4097) {
    if (!(b > a)) {
        const double v = f(a);
        return [v](double) { return v; };
    }
    auto values = std::make_shared<std::vector<double>>(n);
    for (std::size_t i = 0; i < n; ++i) (*values)[i] = f(a + (b - a) * static_cast<double>(i) / (n - 1));
    return [values, a, b, n](double r) {
        const double t = std::clamp((r - a) / (b - a), 0.0, 1.0) * static_cast<double>(n - 1);
        const std::size_t i = std::min(static_cast<std::size_t>(t), n - 2);
        const double frac = t - static_cast<double>(i);
        return (*values)[i] + frac * ((*values)[i + 1] - (*values)[i]);
    };
}

WarpedMetric tabulated(const WarpedMetric& m, double a, double b) {
    return WarpedMetric{tabulate(m.warp, a, b), tabulate(m.fiber, a, b), m.quotient};
}

bool connected(const NeighborLists& nbrs) {
    if (nbrs.empty()) return true;
    std::vector<char> seen(nbrs.size(), 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        for (std::size_t v : nbrs[u])
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
    }
    return count == nbrs.size();
}

void validate_radii(double r_in, double r_out) {
    if (!(r_in > 0.0) || !(r_out > r_in) || !std::isfinite(r_out)) {
        std::ostringstream msg;
        msg << "need 0 < r_in < r_out, got [" << r_in << ", " << r_out << "]";
        throw std::invalid_argument(msg.str());
    }
}

} // namespace

const std::array<Quaternion, 8>& q8_elements() {
    static const std::array<Quaternion, 8> elements = {
        Quaternion{1, 0, 0, 0},  Quaternion{-1, 0, 0, 0}, Quaternion{0, 1, 0, 0},  Quaternion{0, -1, 0, 0},
        Quaternion{0, 0, 1, 0},  Quaternion{0, 0, -1, 0}, Quaternion{0, 0, 0, 1},  Quaternion{0, 0, 0, -1}};
    return elements;
}

Quaternion canonical_representative(const Quaternion& q) {
    Quaternion best = q;
    for (const Quaternion& g : q8_elements()) {
        const Quaternion c = g * q;
        if (c.components() > best.components()) best = c;
    }
    return best;
}

QuotientPoint QuotientPoint::make(double r, const Quaternion& q, bool quotient) {
    const double n = q.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("quaternion must be nonzero and finite");
    const Quaternion unit = q.normalized();
    return QuotientPoint{r, quotient ? canonical_representative(unit) : unit};
}

double quotient_dist_round(const Quaternion& q1, const Quaternion& q2) {
    double best = -1.0;
    for (const Quaternion& g : q8_elements()) best = std::max(best, dot(g * q1, q2));
    return std::acos(std::clamp(best, -1.0, 1.0));
}

WarpedMetric WarpedMetric::from_profile(const ProfilePair& profile, bool quotient) {
    return WarpedMetric{[rho = profile.rho](double r) { return rho(r).value; },
                        [phi = profile.phi](double r) { return phi(r).value; }, quotient};
}

WarpedMetric WarpedMetric::cone(double slope, bool quotient) {
    return WarpedMetric{[slope](double r) { return slope * r; }, [](double) { return 1.0; }, quotient};
}

double chord_length(const WarpedMetric& metric, const QuotientPoint& p, const QuotientPoint& p2) {
    const double dr = p2.r - p.r;
    const double mid = 0.5 * (p.r + p2.r);
    const double w = metric.warp(mid);
    const double f = metric.fiber(mid);
    const Quaternion inv = p.q.conjugate();

    auto frame_length2 = [&](const Quaternion& target) {
        const auto v = log_unit(inv * target);
        return w * w * (f * f * v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    };
    double best = frame_length2(p2.q);
    if (metric.quotient) {
        for (const Quaternion& g : q8_elements()) best = std::min(best, frame_length2(g * p2.q));
    }
    return std::sqrt(dr * dr + best);
}

SampledSpace SampledSpace::from_matrix(std::size_t n, std::vector<double> dist, std::string provenance) {
    if (dist.size() != n * n) throw std::invalid_argument("distance matrix must be n x n");
    for (std::size_t i = 0; i < n; ++i) {
        if (dist[i * n + i] != 0.0) throw std::invalid_argument("distance matrix needs a zero diagonal");
        for (std::size_t j = 0; j < n; ++j) {
            const double d = dist[i * n + j];
            if (d != dist[j * n + i] || d < 0.0 || !std::isfinite(d))
                throw std::invalid_argument("distance matrix must be symmetric, finite and nonnegative");
        }
    }
    SampledSpace s;
    s.n = n;
    s.dist = std::move(dist);
    s.provenance = std::move(provenance);
    return s;
}

std::vector<QuotientPoint> sample_points(const WarpedMetric& metric, double r_in, double r_out, std::size_t n,
                                         std::uint64_t seed) {
    // Cumulative volume weight warp^3 * fiber on a fine radial grid.
    constexpr std::size_t cells = 4096;
    std::vector<double> radii(cells + 1), cdf(cells + 1, 0.0);
    for (std::size_t i = 0; i <= cells; ++i) radii[i] = r_in + (r_out - r_in) * static_cast<double>(i) / cells;
    auto density = [&](double r) {
        const double w = metric.warp(r);
        return w * w * w * metric.fiber(r);
    };
    for (std::size_t i = 0; i < cells; ++i)
        cdf[i + 1] = cdf[i] + 0.5 * (density(radii[i]) + density(radii[i + 1])) * (radii[i + 1] - radii[i]);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<QuotientPoint> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = uniform(rng);
        Quaternion q{normal(rng), normal(rng), normal(rng), normal(rng)};
        double r = r_in;
        if (r_out > r_in && cdf.back() > 0.0) {
            const double target = u * cdf.back();
            auto it = std::lower_bound(cdf.begin(), cdf.end(), target);
            const std::size_t hi = std::clamp<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), 1, cells);
            const double span = cdf[hi] - cdf[hi - 1];
            const double frac = span > 0.0 ? (target - cdf[hi - 1]) / span : 0.0;
            r = radii[hi - 1] + frac * (radii[hi] - radii[hi - 1]);
        }
        out.push_back(QuotientPoint::make(r, q, metric.quotient));
    }
    return out;
}

std::size_t knn_graph(const WarpedMetric& metric, const std::vector<QuotientPoint>& points, std::size_t k,
                      NeighborLists& out) {
    const std::size_t n = points.size();
    if (n <= 1) {
        out.assign(n, {});
        return 0;
    }
    k = std::max<std::size_t>(1, std::min(k, n - 1));
    // Sorted candidate lists, long enough for a few growth steps.
    std::size_t k_cap = std::min(n - 1, std::max<std::size_t>(4 * k, 64));
    std::vector<std::vector<std::pair<double, std::size_t>>> ranked(n);
    parallel_for(n, 0, [&](std::size_t i) {
        std::vector<std::pair<double, std::size_t>> row;
        row.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) row.emplace_back(chord_length(metric, points[i], points[j]), j);
        std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k_cap), row.end());
        row.resize(k_cap);
        ranked[i] = std::move(row);
    });

    for (;;) {
        out.assign(n, {});
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t m = 0; m < k; ++m) {
                const std::size_t j = ranked[i][m].second;
                out[i].push_back(j);
                out[j].push_back(i);
            }
        for (auto& row : out) {
            std::sort(row.begin(), row.end());
            row.erase(std::unique(row.begin(), row.end()), row.end());
        }
        if (connected(out) || k >= k_cap) break;
        k = std::min(k_cap, std::max(k + 1, k * 3 / 2));
    }
    if (!connected(out)) throw std::runtime_error("neighbour graph is disconnected even at k = " + std::to_string(k));
    return k;
}

SampledSpace graph_space(const WarpedMetric& metric, std::vector<QuotientPoint> points,
                         const NeighborLists& neighbors, unsigned threads) {
    const std::size_t n = points.size();
    // CSR adjacency with fixed-point weights; the weight of {i, j} is computed
    // once from the lower index so both directions agree.
    std::vector<std::size_t> offset(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) offset[i + 1] = offset[i] + neighbors[i].size();
    std::vector<std::size_t> target(offset[n]);
    std::vector<std::int64_t> weight(offset[n]);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t m = 0; m < neighbors[i].size(); ++m) {
            const std::size_t j = neighbors[i][m];
            const std::size_t lo = std::min(i, j), hi = std::max(i, j);
            target[offset[i] + m] = j;
            weight[offset[i] + m] = to_fixed(chord_length(metric, points[lo], points[hi]));
        }

    constexpr std::int64_t unreached = std::numeric_limits<std::int64_t>::max();
    std::vector<std::int64_t> fixed(n * n, unreached);
    parallel_for(n, threads, [&](std::size_t src) {
        std::int64_t* row = fixed.data() + src * n;
        using Item = std::pair<std::int64_t, std::size_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        row[src] = 0;
        heap.emplace(0, src);
        while (!heap.empty()) {
            const auto [d, u] = heap.top();
            heap.pop();
            if (d != row[u]) continue;
            for (std::size_t e = offset[u]; e < offset[u + 1]; ++e) {
                const std::size_t v = target[e];
                const std::int64_t nd = d + weight[e];
                if (nd < row[v]) {
                    row[v] = nd;
                    heap.emplace(nd, v);
                }
            }
        }
    });

    SampledSpace space;
    space.n = n;
    space.points = std::move(points);
    space.dist.resize(n * n);
    for (std::size_t i = 0; i < n * n; ++i) {
        if (fixed[i] == unreached) throw std::runtime_error("graph is disconnected");
        space.dist[i] = static_cast<double>(fixed[i]) / kFixedScale;
    }
    return space;
}

SampledSpace sample_metric(const WarpedMetric& metric, double r_in, double r_out, std::size_t n, std::uint64_t seed,
                           const SampleOptions& options) {
    if (n < 50) throw std::invalid_argument("need at least 50 sample points, got " + std::to_string(n));
    const WarpedMetric table = tabulated(metric, r_in, r_out);
    std::vector<QuotientPoint> points;
    for (const QuotientPoint& a : options.anchors) points.push_back(QuotientPoint::make(a.r, a.q, metric.quotient));
    for (const QuotientPoint& p : sample_points(table, r_in, r_out, n, seed)) points.push_back(p);

    NeighborLists nbrs;
    const std::size_t k = knn_graph(table, points, options.k, nbrs);
    SampledSpace space = graph_space(table, std::move(points), nbrs, options.threads);
    space.seed = seed;
    space.k = k;
    std::ostringstream prov;
    prov << "warped annulus [" << r_in << ", " << r_out << "], n=" << n << ", seed=" << seed << ", k=" << k
         << (metric.quotient ? ", quotient Q8" : "");
    space.provenance = prov.str();
    return space;
}

SampledSpace sample_annulus(const ProfilePair& profile, double r_in, double r_out, std::size_t n,
                            std::uint64_t seed, const SampleOptions& options) {
    validate_radii(r_in, r_out);
    if (!profile.covers(r_in, r_out)) throw std::invalid_argument("annulus outside the profile domain");
    return sample_metric(WarpedMetric::from_profile(profile, true), r_in, r_out, n, seed, options);
}

SampledSpace sample_round_sphere(std::size_t n, std::uint64_t seed, bool quotient, const SampleOptions& options) {
    WarpedMetric round{[](double) { return 1.0; }, [](double) { return 1.0; }, quotient};
    SampledSpace s = sample_metric(round, 1.0, 1.0, n, seed, options);
    s.provenance = std::string(quotient ? "round S^3/Q8" : "round S^3") + ", n=" + std::to_string(n) +
                   ", seed=" + std::to_string(seed) + ", k=" + std::to_string(s.k);
    return s;
}

double diameter(const SampledSpace& space) {
    if (space.n == 0) throw std::invalid_argument("diameter of an empty space");
    return *std::max_element(space.dist.begin(), space.dist.end());
}

Correspondence Correspondence::identity(std::size_t n) {
    Correspondence c;
    for (std::size_t i = 0; i < n; ++i) c.pairs.emplace_back(i, i);
    return c;
}

Correspondence Correspondence::transposed() const {
    Correspondence c;
    for (const auto& [a, b] : pairs) c.pairs.emplace_back(b, a);
    return c;
}

bool Correspondence::covers(std::size_t n1, std::size_t n2) const {
    std::vector<char> left(n1, 0), right(n2, 0);
    for (const auto& [a, b] : pairs) {
        if (a >= n1 || b >= n2) return false;
        left[a] = right[b] = 1;
    }
    return std::all_of(left.begin(), left.end(), [](char c) { return c; }) &&
           std::all_of(right.begin(), right.end(), [](char c) { return c; });
}

Correspondence match_by_coordinates(const SampledSpace& s1, const SampledSpace& s2, double tol) {
    if (s1.points.size() != s1.n || s2.points.size() != s2.n)
        throw std::invalid_argument("coordinate matching needs spaces with points");
    auto coord_gap = [](const QuotientPoint& a, const QuotientPoint& b) {
        return std::abs(a.r - b.r) + quotient_dist_round(a.q, b.q);
    };
    auto same = [tol](const QuotientPoint& a, const QuotientPoint& b) {
        const auto ca = a.q.components(), cb = b.q.components();
        if (std::abs(a.r - b.r) > tol) return false;
        for (std::size_t i = 0; i < 4; ++i)
            if (std::abs(ca[i] - cb[i]) > tol) return false;
        return true;
    };
    Correspondence c;
    std::vector<char> hit(s2.n, 0);
    for (std::size_t i = 0; i < s1.n; ++i) {
        std::size_t best = 0;
        double best_gap = std::numeric_limits<double>::infinity();
        bool exact = false;
        for (std::size_t j = 0; j < s2.n && !exact; ++j) {
            if (same(s1.points[i], s2.points[j])) {
                best = j;
                exact = true;
                break;
            }
            const double g = coord_gap(s1.points[i], s2.points[j]);
            if (g < best_gap) {
                best_gap = g;
                best = j;
            }
        }
        c.pairs.emplace_back(i, best);
        hit[best] = 1;
    }
    for (std::size_t j = 0; j < s2.n; ++j) {
        if (hit[j]) continue;
        std::size_t best = 0;
        double best_gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < s1.n; ++i) {
            const double g = coord_gap(s1.points[i], s2.points[j]);
            if (g < best_gap) {
                best_gap = g;
                best = i;
            }
        }
        c.pairs.emplace_back(best, j);
    }
    return c;
}

double gh_upper_bound(const SampledSpace& s1, const SampledSpace& s2, const Correspondence& corr) {
    if (!corr.covers(s1.n, s2.n)) throw std::invalid_argument("correspondence does not cover both spaces");
    double distortion = 0.0;
    for (const auto& [x, y] : corr.pairs)
        for (const auto& [x2, y2] : corr.pairs) distortion = std::max(distortion, std::abs(s1(x, x2) - s2(y, y2)));
    return 0.5 * distortion;
}

std::vector<CollapseRow> collapse_experiment(const ProfilePair& profile, const std::vector<double>& eps_list,
                                             std::size_t n, std::uint64_t seed, const CollapseOptions& options) {
    if (eps_list.empty()) throw std::invalid_argument("eps list is empty");
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0.0 && eps_list[i] <= 1.0)) throw std::invalid_argument("eps values must lie in (0, 1]");
        if (i > 0 && !(eps_list[i] < eps_list[i - 1])) throw std::invalid_argument("eps list must be decreasing");
    }
    if (n < 50) throw std::invalid_argument("need at least 50 sample points, got " + std::to_string(n));
    if (!(profile.neck_slope > 0.0)) throw std::invalid_argument("collapse experiment needs a positive neck slope");
    const double c = profile.neck_slope;
    const WarpedMetric limit = WarpedMetric::cone(c, true);

    std::vector<CollapseRow> rows;
    for (double eps : eps_list) {
        const double s_in = eps * options.r_inner;
        const double s_out = options.r_outer;
        validate_radii(s_in, s_out);
        if (!profile.covers(options.r_inner, s_out / eps))
            throw std::invalid_argument("rescaled annulus outside the profile domain");

        WarpedMetric scaled{[rho = profile.rho, eps](double s) { return eps * rho(s / eps).value; },
                            [phi = profile.phi, eps](double s) { return phi(s / eps).value; }, true};
        scaled = tabulated(scaled, s_in, s_out);

        // Coordinates are drawn once per eps with the cone's volume density so
        // both spaces share points and edges.
        std::vector<QuotientPoint> points = sample_points(limit, s_in, s_out, n, seed);
        NeighborLists nbrs;
        const std::size_t k = knn_graph(scaled, points, options.k, nbrs);
        SampledSpace family = graph_space(scaled, points, nbrs, options.threads);
        SampledSpace cone = graph_space(limit, points, nbrs, options.threads);

        CollapseRow row;
        row.eps = eps;
        row.gh_bound = gh_upper_bound(family, cone, match_by_coordinates(family, cone));
        row.diameter = diameter(family);
        row.cone_diameter = diameter(cone);
        row.n = n;
        row.k = k;
        row.seed = seed;
        rows.push_back(row);
    }
    return rows;
}

std::size_t monotonicity_violations(const std::vector<CollapseRow>& rows) {
    std::size_t v = 0;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i)
        if (!(rows[i + 1].gh_bound < rows[i].gh_bound)) ++v;
    return v;
}

} // namespace conesmooth
