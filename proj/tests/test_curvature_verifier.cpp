#include <doctest.h>

#include <cmath>

#include "conesmooth/curvature_verifier.hpp"
#include "conesmooth/profile_builder.hpp"
#include "fixtures.hpp"

using namespace conesmooth;

namespace {

const ProfilePair& default_profile() {
    static const ProfilePair p = build_profile(default_neck_slope());
    return p;
}

double min_entry(const RicciDiag& d) { return std::min({d.r00, d.r11, d.r22, d.r33}); }

} // namespace

TEST_CASE("proof_regions tile [0, R_max] with shared endpoints") {
    const double r1 = 0.125;
    const auto regions = proof_regions(r1, 3.0);
    CHECK(regions[0].label == RegionLabel::part1);
    CHECK(regions[0].begin == kInnerCutoff);
    CHECK(regions[0].end == doctest::Approx(r1 + 1.0 / 16.0));
    for (std::size_t i = 1; i < regions.size(); ++i) CHECK(regions[i].begin == regions[i - 1].end);
    CHECK(regions[3].end == 3.0);
}

TEST_CASE("verify_region: Part1 keeps the sphere directions above 2") {
    const auto regions = proof_regions(default_profile().r1, 3.0);
    const VerificationReport rep = verify_region(default_profile(), regions[0]);
    CHECK(rep.pass);
    CHECK(rep.minima.r22 >= 2.0 - 1e-9);
    CHECK(rep.minima.r33 >= 2.0 - 1e-9);
}

TEST_CASE("verify_region: Part4 is radially flat") {
    const auto regions = proof_regions(default_profile().r1, 3.0);
    const VerificationReport rep = verify_region(default_profile(), regions[3]);
    CHECK(rep.pass);
    CHECK(std::abs(rep.minima.r00) <= 1e-10);
    CHECK(std::abs(rep.maxima.r00) <= 1e-10);
}

TEST_CASE("verify_region: every proof region passes including intermediate claims") {
    for (const Region& region : proof_regions(default_profile().r1, 3.0)) {
        const VerificationReport rep = verify_region(default_profile(), region);
        CAPTURE(to_string(region.label));
        CHECK(rep.pass);
        for (const auto& b : rep.bounds) {
            CAPTURE(b.quantity);
            CHECK(b.pass);
        }
    }
}

TEST_CASE("verify_region: flat and round fixtures on [0.1, 1]") {
    const auto flat = make_closed_form_profile(linear_function(1.0), constant_function(1.0), 0.1, 1.0);
    const VerificationReport f = verify_region(flat, {RegionLabel::sweep, 0.1, 1.0});
    CHECK(f.pass);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(f.minima[i]) <= 1e-10);
        CHECK(std::abs(f.maxima[i]) <= 1e-10);
    }

    const auto round = make_closed_form_profile(constant_function(1.0), constant_function(1.0), 0.1, 1.0);
    const VerificationReport r = verify_region(round, {RegionLabel::sweep, 0.1, 1.0});
    CHECK(r.pass);
    CHECK(std::abs(r.minima.r00) <= 1e-12);
    for (std::size_t i = 1; i < 4; ++i) CHECK(r.minima[i] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("verify_region: contract errors") {
    const auto short_profile = make_closed_form_profile(constant_function(1.0), constant_function(1.0), 0.1, 1.0);
    CHECK_THROWS_AS(verify_region(short_profile, {RegionLabel::sweep, 0.05, 1.0}), DomainError);
    CHECK_THROWS_AS(verify_region(short_profile, {RegionLabel::sweep, 0.1, 2.0}), DomainError);
    VerifyOptions tiny;
    tiny.n_grid = 10;
    CHECK_THROWS_AS(verify_region(short_profile, {RegionLabel::sweep, 0.1, 1.0}, tiny), std::invalid_argument);
}

TEST_CASE("verify_nonneg: default profile passes on [1e-6, 3]") {
    const VerificationReport rep = verify_nonneg(default_profile(), 3.0);
    CHECK(rep.pass);
    CHECK(min_entry(rep.minima) >= -1e-9);
    CHECK(rep.grid_size == 4096);
    CHECK(rep.sample_count >= rep.grid_size);
    CHECK_FALSE(rep.curve.empty());
    for (std::size_t i = 1; i < rep.curve.size(); ++i) CHECK(rep.curve[i - 1].r <= rep.curve[i].r);
}

TEST_CASE("verify_nonneg: the doubled inner slope is rejected") {
    const ProfilePair bad = build_profile(default_neck_slope(), {}, ProfileVariant::doubled_inner_slope);
    const VerificationReport rep = verify_nonneg(bad, 3.0);
    CHECK_FALSE(rep.pass);
    CHECK(min_entry(rep.minima) < -0.1);
}

TEST_CASE("verify_nonneg: round profile minima") {
    const auto round = make_closed_form_profile(constant_function(1.0), constant_function(1.0), 0.0, 1.0);
    const VerificationReport rep = verify_nonneg(round, 1.0);
    CHECK(rep.pass);
    CHECK(rep.minima.r11 == doctest::Approx(2.0));
    CHECK(rep.minima.r22 == doctest::Approx(2.0));
}

TEST_CASE("grid refinement is stable") {
    VerifyOptions coarse, fine;
    fine.n_grid = 2 * coarse.n_grid;
    const VerificationReport a = verify_nonneg(default_profile(), 3.0, coarse);
    const VerificationReport b = verify_nonneg(default_profile(), 3.0, fine);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(a.minima[i] - b.minima[i]) < coarse.tol);
}

TEST_CASE("regional minima tile the sweep minimum") {
    const std::vector<VerificationReport> reps = verify_all(default_profile(), 3.0);
    REQUIRE(reps.size() == 5);
    CHECK(reps.back().label == RegionLabel::sweep);
    for (std::size_t e = 0; e < 4; ++e) {
        double least = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < 4; ++i) least = std::min(least, reps[i].minima[e]);
        CHECK(std::abs(least - reps.back().minima[e]) < 1e-9);
    }
    CHECK(reps.front().begin == reps.back().begin);
    CHECK(reps[3].end == reps.back().end);
}

TEST_CASE("reports do not depend on the thread count") {
    VerifyOptions one, many;
    one.threads = 1;
    many.threads = 5;
    const VerificationReport a = verify_nonneg(default_profile(), 3.0, one);
    const VerificationReport b = verify_nonneg(default_profile(), 3.0, many);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(a.minima[i] == b.minima[i]);
        CHECK(a.argmin[i] == b.argmin[i]);
    }
    CHECK(a.sample_count == b.sample_count);
}
