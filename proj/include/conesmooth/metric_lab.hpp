#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "conesmooth/profile.hpp"
#include "conesmooth/quaternion.hpp"

namespace conesmooth {

/// The quaternion group {+-1, +-i, +-j, +-k}.
const std::array<Quaternion, 8>& q8_elements();

/// Orbit element of q under left multiplication by Q8 with the
/// lexicographically largest component vector (w, x, y, z).
Quaternion canonical_representative(const Quaternion& q);

/// A point (r, [q]) of the cone over S^3/Q8. make() normalizes q and, for
/// quotient points, replaces it by its canonical representative.
struct QuotientPoint {
    double r = 1.0;
    Quaternion q;

    static QuotientPoint make(double r, const Quaternion& q, bool quotient = true);
    friend bool operator==(const QuotientPoint&, const QuotientPoint&) = default;
};

/// Round distance on S^3/Q8: min over g in Q8 of arccos <g q1, q2>.
double quotient_dist_round(const Quaternion& q1, const Quaternion& q2);

/// Metric dr^2 + warp(r)^2 (fiber(r)^2 sigma1^2 + sigma2^2 + sigma3^2) on
/// (r_min, r_max) x S^3, or on its Q8 quotient.
struct WarpedMetric {
    std::function<double(double)> warp;
    std::function<double(double)> fiber;
    bool quotient = true;

    static WarpedMetric from_profile(const ProfilePair& profile, bool quotient = true);
    /// Cone over the round quotient with link scaled by `slope`.
    static WarpedMetric cone(double slope, bool quotient = true);
};

/// First-order length of the chord from p to p2: the left-invariant frame
/// components come from log(p.q^-1 g p2.q), minimized over g in Q8 for
/// quotient metrics, and are weighted at the midpoint radius.
double chord_length(const WarpedMetric& metric, const QuotientPoint& p, const QuotientPoint& p2);

/// Finite metric space with a dense symmetric distance matrix. Distances
/// produced by the graph builders are shortest paths with fixed-point edge
/// weights, so symmetry and the triangle inequality hold exactly.
struct SampledSpace {
    std::vector<QuotientPoint> points; // empty for abstract spaces
    std::size_t n = 0;
    std::vector<double> dist;          // row-major n x n
    std::string provenance;
    std::uint64_t seed = 0;
    std::size_t k = 0;

    double operator()(std::size_t i, std::size_t j) const { return dist[i * n + j]; }
    std::size_t size() const { return n; }

    /// Abstract space from a full matrix; validates shape, zero diagonal and symmetry.
    static SampledSpace from_matrix(std::size_t n, std::vector<double> dist, std::string provenance = "matrix");
};

/// Undirected neighbour graph over sample points.
using NeighborLists = std::vector<std::vector<std::size_t>>;

struct SampleOptions {
    std::size_t k = 32;               // initial neighbour count; grown until connected
    std::vector<QuotientPoint> anchors; // placed first, before the random points
    unsigned threads = 0;
};

/// Random points: Haar-uniform q (canonicalized for quotient metrics) and r
/// drawn with density proportional to warp^3 * fiber on [r_in, r_out], so
/// the sample is quasi-uniform in Riemannian volume.
std::vector<QuotientPoint> sample_points(const WarpedMetric& metric, double r_in, double r_out, std::size_t n,
                                         std::uint64_t seed);

/// Symmetrized k-nearest-neighbour lists; k is multiplied by 3/2 until the
/// graph is connected. Returns the k that was used.
std::size_t knn_graph(const WarpedMetric& metric, const std::vector<QuotientPoint>& points, std::size_t k,
                      NeighborLists& out);

/// All-pairs shortest paths over the given edges, weighted by chord_length.
SampledSpace graph_space(const WarpedMetric& metric, std::vector<QuotientPoint> points,
                         const NeighborLists& neighbors, unsigned threads = 0);

/// Annulus [r_in, r_out] of the profile metric (quotient by Q8).
/// Throws std::invalid_argument when n < 50 or the radii are invalid.
SampledSpace sample_annulus(const ProfilePair& profile, double r_in, double r_out, std::size_t n,
                            std::uint64_t seed, const SampleOptions& options = {});

/// Same, for an arbitrary warped metric.
SampledSpace sample_metric(const WarpedMetric& metric, double r_in, double r_out, std::size_t n, std::uint64_t seed,
                           const SampleOptions& options = {});

/// Unit round S^3 (quotient = false) or S^3/Q8, sampled at r = 1.
SampledSpace sample_round_sphere(std::size_t n, std::uint64_t seed, bool quotient, const SampleOptions& options = {});

double diameter(const SampledSpace& space);

struct Correspondence {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;

    static Correspondence identity(std::size_t n);
    Correspondence transposed() const;
    bool covers(std::size_t n1, std::size_t n2) const;
};

/// Pairs points with equal (r, canonical q); anything left unmatched is
/// paired with its nearest point in coordinates.
Correspondence match_by_coordinates(const SampledSpace& s1, const SampledSpace& s2, double tol = 1e-12);

/// Half the distortion of the correspondence, an upper bound on the
/// Gromov-Hausdorff distance. Throws std::invalid_argument when corr does not
/// cover both spaces.
double gh_upper_bound(const SampledSpace& s1, const SampledSpace& s2, const Correspondence& corr);

struct CollapseOptions {
    double r_inner = 1.0; // R0: inner radius in unscaled profile units
    double r_outer = 8.0; // R1: outer radius after rescaling
    std::size_t k = 16;
    unsigned threads = 0;
};

struct CollapseRow {
    double eps = 0.0;
    double gh_bound = 0.0;
    double diameter = 0.0;
    double cone_diameter = 0.0;
    std::size_t n = 0;
    std::size_t k = 0;
    std::uint64_t seed = 0;
};

/// For each eps: the annulus r in [R0, R1/eps] of eps^2 g, written in the
/// rescaled radius s = eps r in [eps R0, R1], is compared with the same
/// coordinates in the cone ds^2 + c^2 s^2 g_round over S^3/Q8. Both graphs
/// share one edge set; the correspondence matches coordinates.
std::vector<CollapseRow> collapse_experiment(const ProfilePair& profile, const std::vector<double>& eps_list,
                                             std::size_t n, std::uint64_t seed, const CollapseOptions& options = {});

/// Number of i with gh[i+1] >= gh[i].
std::size_t monotonicity_violations(const std::vector<CollapseRow>& rows);

} // namespace conesmooth
