#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "conesmooth/metric_lab.hpp"
#include "conesmooth/profile_builder.hpp"
#include "fixtures.hpp"

using namespace conesmooth;

namespace {

Quaternion random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    return Quaternion{nd(rng), nd(rng), nd(rng), nd(rng)}.normalized();
}

void check_metric_axioms(const SampledSpace& s) {
    std::size_t bad_symmetry = 0, bad_triangle = 0;
    for (std::size_t i = 0; i < s.n; ++i) {
        if (s(i, i) != 0.0) ++bad_symmetry;
        for (std::size_t j = 0; j < s.n; ++j) {
            if (s(i, j) != s(j, i) || s(i, j) < 0.0) ++bad_symmetry;
            for (std::size_t k = 0; k < s.n; ++k)
                if (s(i, k) > s(i, j) + s(j, k)) ++bad_triangle;
        }
    }
    CHECK(bad_symmetry == 0);
    CHECK(bad_triangle == 0);
}

} // namespace

TEST_CASE("quotient_dist_round: examples") {
    const Quaternion one{1, 0, 0, 0}, i{0, 1, 0, 0};
    CHECK(quotient_dist_round(one, i) == 0.0);
    CHECK(quotient_dist_round(one, Quaternion{0.5, 0.5, 0.5, 0.5}) ==
          doctest::Approx(std::numbers::pi / 3.0).epsilon(1e-12));
    std::mt19937_64 rng(4);
    const Quaternion q = random_unit(rng);
    CHECK(quotient_dist_round(q, q) < 1e-7);
}

TEST_CASE("quotient distance is invariant under every element of Q8") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const Quaternion a = random_unit(rng), b = random_unit(rng);
        const double base = quotient_dist_round(a, b);
        for (const Quaternion& g : q8_elements()) {
            CHECK(std::abs(quotient_dist_round(g * a, b) - base) <= 1e-12);
            CHECK(std::abs(quotient_dist_round(a, g * b) - base) <= 1e-12);
        }
        for (const Quaternion& g : q8_elements()) CHECK(canonical_representative(g * a) == canonical_representative(a));
    }
}

TEST_CASE("chord_length: a radial step has length h") {
    std::mt19937_64 rng(12);
    const WarpedMetric m = WarpedMetric::from_profile(build_profile(0.05));
    const QuotientPoint p = QuotientPoint::make(1.0, random_unit(rng));
    const QuotientPoint p2 = QuotientPoint::make(1.0 + 1e-3, p.q);
    CHECK(chord_length(m, p, p2) == doctest::Approx(1e-3).epsilon(1e-12));
}

TEST_CASE("chord_length: round quotient chords are exact geodesics") {
    std::mt19937_64 rng(13);
    const WarpedMetric round{[](double) { return 1.0; }, [](double) { return 1.0; }, true};
    for (int trial = 0; trial < 200; ++trial) {
        const Quaternion a = random_unit(rng), b = random_unit(rng);
        CHECK(chord_length(round, QuotientPoint::make(1.0, a), QuotientPoint::make(1.0, b)) ==
              doctest::Approx(quotient_dist_round(a, b)).epsilon(1e-10));
    }
}

TEST_CASE("sample_annulus: parameter errors") {
    const ProfilePair p = build_profile(0.05);
    CHECK_THROWS_AS(sample_annulus(p, 1.0, 2.0, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_annulus(p, 1.0, 2.0, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_annulus(p, 2.0, 1.0, 100, 1), std::invalid_argument);
}

TEST_CASE("sample_annulus: graph distance approximates the round quotient distance") {
    const ProfilePair round = fixtures::round_profile();
    std::mt19937_64 rng(3);
    for (std::uint64_t seed : {100u, 101u}) {
        const Quaternion a = random_unit(rng), b = random_unit(rng);
        SampleOptions opts;
        opts.k = 160;
        opts.anchors = {QuotientPoint::make(1.0, a), QuotientPoint::make(1.0, b)};
        const SampledSpace s = sample_annulus(round, 0.99, 1.01, 2000, seed, opts);
        const double exact = quotient_dist_round(a, b);
        CAPTURE(exact);
        CHECK(s(0, 1) >= exact - 1e-9);
        CHECK(std::abs(s(0, 1) / exact - 1.0) < 0.03);
    }
}

TEST_CASE("sampled spaces satisfy the metric axioms exactly") {
    const SampledSpace s = sample_annulus(build_profile(0.05), 0.5, 2.0, 300, 77);
    check_metric_axioms(s);
    const SampledSpace sphere = sample_round_sphere(200, 5, true);
    check_metric_axioms(sphere);
}

TEST_CASE("sampled distances are invariant under Q8 relabelling") {
    const WarpedMetric m = WarpedMetric::from_profile(build_profile(0.05));
    std::vector<QuotientPoint> pts = sample_points(m, 0.5, 2.0, 200, 9);
    std::vector<QuotientPoint> moved;
    for (std::size_t i = 0; i < pts.size(); ++i)
        moved.push_back(QuotientPoint::make(pts[i].r, q8_elements()[i % 8] * pts[i].q));
    NeighborLists na, nb;
    knn_graph(m, pts, 16, na);
    knn_graph(m, moved, 16, nb);
    const SampledSpace a = graph_space(m, pts, na), b = graph_space(m, moved, nb);
    for (std::size_t i = 0; i < a.dist.size(); ++i) CHECK(std::abs(a.dist[i] - b.dist[i]) <= 1e-12);
}

TEST_CASE("nested refinement with preserved edges never lengthens distances") {
    const WarpedMetric m = WarpedMetric::from_profile(build_profile(0.05));
    const std::vector<QuotientPoint> small_pts = sample_points(m, 0.5, 2.0, 300, 21);
    const std::vector<QuotientPoint> large_pts = sample_points(m, 0.5, 2.0, 600, 21);
    for (std::size_t i = 0; i < small_pts.size(); ++i) REQUIRE(small_pts[i] == large_pts[i]);

    NeighborLists small_nbrs, large_nbrs;
    knn_graph(m, small_pts, 16, small_nbrs);
    knn_graph(m, large_pts, 16, large_nbrs);
    for (std::size_t i = 0; i < small_nbrs.size(); ++i) {
        auto& row = large_nbrs[i];
        row.insert(row.end(), small_nbrs[i].begin(), small_nbrs[i].end());
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }
    const SampledSpace small = graph_space(m, small_pts, small_nbrs);
    const SampledSpace large = graph_space(m, large_pts, large_nbrs);
    std::size_t longer = 0, shorter = 0;
    for (std::size_t i = 0; i < small.n; ++i)
        for (std::size_t j = i + 1; j < small.n; ++j) {
            if (large(i, j) > small(i, j)) ++longer;
            if (large(i, j) < small(i, j)) ++shorter;
        }
    CHECK(longer == 0);
    CHECK(shorter > 0);
}

TEST_CASE("sampling is deterministic and thread-count independent") {
    const ProfilePair p = build_profile(0.05);
    SampleOptions one, many;
    one.threads = 1;
    many.threads = 4;
    const SampledSpace a = sample_annulus(p, 0.5, 2.0, 250, 31, one);
    const SampledSpace b = sample_annulus(p, 0.5, 2.0, 250, 31, many);
    CHECK(a.dist == b.dist);
    CHECK(a.provenance == b.provenance);
    CHECK(a.seed == 31);
}

TEST_CASE("diameter: examples") {
    CHECK(diameter(SampledSpace::from_matrix(1, {0.0})) == 0.0);
    CHECK(diameter(SampledSpace::from_matrix(2, {0.0, 1.0, 1.0, 0.0})) == 1.0);
    CHECK_THROWS_AS(SampledSpace::from_matrix(2, {0.0, 1.0, 2.0, 0.0}), std::invalid_argument);
}

TEST_CASE("diameter: round S^3 sample approaches pi") {
    const SampledSpace s = sample_round_sphere(3000, 11, false);
    CHECK(std::abs(diameter(s) / std::numbers::pi - 1.0) < 0.05);
}

TEST_CASE("gh_upper_bound: examples") {
    const SampledSpace pair = SampledSpace::from_matrix(2, {0.0, 1.0, 1.0, 0.0});
    const SampledSpace point = SampledSpace::from_matrix(1, {0.0});
    CHECK(gh_upper_bound(pair, pair, Correspondence::identity(2)) == 0.0);
    Correspondence full;
    full.pairs = {{0, 0}, {1, 0}};
    CHECK(gh_upper_bound(pair, point, full) == 0.5);
    CHECK(gh_upper_bound(point, pair, full.transposed()) == 0.5);
    Correspondence partial;
    partial.pairs = {{0, 0}};
    CHECK_THROWS_AS(gh_upper_bound(pair, point, partial), std::invalid_argument);
}

TEST_CASE("gh_upper_bound: identical samples and symmetry") {
    const ProfilePair p = build_profile(0.05);
    const SampledSpace a = sample_annulus(p, 0.5, 2.0, 200, 3);
    const SampledSpace a2 = sample_annulus(p, 0.5, 2.0, 200, 3);
    CHECK(gh_upper_bound(a, a2, Correspondence::identity(a.n)) == 0.0);
    CHECK(gh_upper_bound(a, a2, match_by_coordinates(a, a2)) == 0.0);
    const SampledSpace b = sample_annulus(p, 0.5, 2.0, 150, 4);
    const Correspondence c = match_by_coordinates(a, b);
    CHECK(c.covers(a.n, b.n));
    CHECK(gh_upper_bound(a, b, c) == gh_upper_bound(b, a, c.transposed()));
}

TEST_CASE("collapse_experiment: parameter validation") {
    const ProfilePair p = build_profile(0.05);
    CHECK_THROWS_AS(collapse_experiment(p, {}, 100, 1), std::invalid_argument);
    CHECK_THROWS_AS(collapse_experiment(p, {0.5, 1.0}, 100, 1), std::invalid_argument);
    CHECK_THROWS_AS(collapse_experiment(p, {2.0}, 100, 1), std::invalid_argument);
    CHECK_THROWS_AS(collapse_experiment(p, {1.0}, 10, 1), std::invalid_argument);
}

TEST_CASE("collapse_experiment: small run shrinks the distortion") {
    const ProfilePair p = build_profile(0.05);
    const auto rows = collapse_experiment(p, {1.0, 0.25}, 200, 5);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].gh_bound < rows[0].gh_bound);
    CHECK(monotonicity_violations(rows) == 0);
    for (const auto& r : rows) {
        CHECK(r.seed == 5);
        CHECK(r.n == 200);
        CHECK(r.diameter > 0.0);
    }
}
