#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "conesmooth/frame_geometry.hpp"
#include "conesmooth/profile.hpp"

namespace conesmooth {

/// Radii closer to 0 than this are never evaluated; the frame degenerates at
/// the zero section.
inline constexpr double kInnerCutoff = 1e-6;

enum class RegionLabel { part1, part2, part3, part4, sweep };

std::string to_string(RegionLabel label);

/// Part1: [0, r1 + 1/16], Part2: [r1 + 1/16, r1 + 3/16],
/// Part3: [r1 + 3/16, r1 + 1/4], Part4: [r1 + 1/4, r_max]. Sweep regions
/// carry arbitrary intervals and only require Ric >= 0.
struct Region {
    RegionLabel label = RegionLabel::sweep;
    double begin = 0.0;
    double end = 0.0;
};

/// The four regions of the nonnegativity argument, tiling [kInnerCutoff, r_max].
std::array<Region, 4> proof_regions(double r1, double r_max);

/// One bound checked over a region. lower/upper are the representable
/// thresholds; symbolic is the exact expression they stand for.
struct DeclaredBound {
    std::string quantity;
    std::string symbolic;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    double observed_min = std::numeric_limits<double>::infinity();
    double observed_max = -std::numeric_limits<double>::infinity();
    bool monotone_nondecreasing = false; // checked along increasing r instead of lower/upper
    bool pass = false;
};

struct CurvePoint {
    double r = 0.0;
    RicciDiag ricci;
};

/// Result of a sampled certification. Semantics: no violation found on the
/// grid plus refinement samples at tolerance `tolerance`; this is not an
/// interval-arithmetic proof.
struct VerificationReport {
    RegionLabel label = RegionLabel::sweep;
    double begin = 0.0;
    double end = 0.0;
    std::size_t grid_size = 0;   // requested uniform grid
    std::size_t sample_count = 0; // grid plus refinement samples
    RicciDiag minima;
    RicciDiag maxima;
    std::array<double, 4> argmin{};
    std::vector<DeclaredBound> bounds;
    double tolerance = 0.0;
    bool pass = false;
    std::vector<CurvePoint> curve; // sorted by r
};

struct VerifyOptions {
    std::size_t n_grid = 4096;
    double tol = 1e-9;
    // 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

/// Evaluates the region's declared bounds on a uniform grid, bisects toward
/// both endpoints until neighbouring samples agree to tol, and sharpens every
/// interior grid minimum by golden-section search.
/// Throws DomainError when the profile does not cover the region and
/// std::invalid_argument when n_grid < 64.
VerificationReport verify_region(const ProfilePair& profile, const Region& region,
                                 const VerifyOptions& options = {});

/// Single sweep over [kInnerCutoff, r_max]; passes iff every Ricci entry
/// stays >= -tol.
VerificationReport verify_nonneg(const ProfilePair& profile, double r_max, const VerifyOptions& options = {});

/// All four proof regions followed by the global sweep.
std::vector<VerificationReport> verify_all(const ProfilePair& profile, double r_max,
                                           const VerifyOptions& options = {});

} // namespace conesmooth
