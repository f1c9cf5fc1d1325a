#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include "json.hpp"
#endif

#include "conesmooth/curvature_verifier.hpp"
#include "conesmooth/metric_lab.hpp"
#include "conesmooth/profile.hpp"
#include "conesmooth/profile_builder.hpp"

namespace conesmooth {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Profile documents ("conesmooth.profile", version 1). See docs/formats.md.

inline constexpr int kProfileFormatVersion = 1;

/// Serializes a constructed profile. The document carries the construction
/// parameters plus a sampled grid used to validate reloads.
nlohmann::json profile_to_json(const ProfilePair& profile, const EtaShape& shape);

/// Rebuilds the profile from its construction parameters and checks it
/// against the stored grid. Throws IoError on malformed or inconsistent input.
ProfilePair profile_from_json(const nlohmann::json& doc, EtaShape* shape_out = nullptr);

void save_profile(const std::string& path, const ProfilePair& profile, const EtaShape& shape);
ProfilePair load_profile(const std::string& path, EtaShape* shape_out = nullptr);

// Verification reports.

nlohmann::json report_to_json(const VerificationReport& report);
/// r,r00,r11,r22,r33 rows; `header` (if any) is written first as a comment.
void write_curve_csv(std::ostream& os, const VerificationReport& report, const std::optional<std::string>& header = {});

// Sampled spaces.

/// i,r,qw,qx,qy,qz
void write_points_csv(std::ostream& os, const SampledSpace& space);
/// i,j,d for i < j (condensed upper triangle)
void write_condensed_csv(std::ostream& os, const SampledSpace& space);

void write_space_binary(std::ostream& os, const SampledSpace& space);
SampledSpace read_space_binary(std::istream& is);

// Collapse experiment tables.

nlohmann::json collapse_to_json(const std::vector<CollapseRow>& rows);
void write_collapse_csv(std::ostream& os, const std::vector<CollapseRow>& rows,
                        const std::optional<std::string>& header = {});

/// Round-trip decimal form used in every CSV.
std::string format_double(double v);

} // namespace conesmooth
