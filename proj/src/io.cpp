#include "conesmooth/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <ostream>
#include <istream>

namespace conesmooth {

namespace {

constexpr char kProfileFormat[] = "conesmooth.profile";
constexpr char kSpaceMagic[4] = {'C', 'S', 'S', 'P'};
constexpr std::uint32_t kSpaceVersion = 1;

std::vector<double> profile_grid() {
    std::vector<double> r(401);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = 4.0 * static_cast<double>(i) / (r.size() - 1);
    return r;
}

nlohmann::json shape_to_json(const EtaShape& s) {
    return {{"rise_start", s.rise_start}, {"rise_end", s.rise_end}, {"fall_start", s.fall_start},
            {"fall_end", s.fall_end}};
}

EtaShape shape_from_json(const nlohmann::json& j) {
    EtaShape s;
    s.rise_start = j.at("rise_start").get<double>();
    s.rise_end = j.at("rise_end").get<double>();
    s.fall_start = j.at("fall_start").get<double>();
    s.fall_end = j.at("fall_end").get<double>();
    return s;
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

template <class T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
    T v{};
    if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw IoError("truncated binary space cache");
    return v;
}

nlohmann::json ricci_json(const RicciDiag& r) { return {r.r00, r.r11, r.r22, r.r33}; }

} // namespace

std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc()) throw IoError("cannot format number");
    return std::string(buf.data(), ptr);
}

nlohmann::json profile_to_json(const ProfilePair& profile, const EtaShape& shape) {
    if (profile.variant == ProfileVariant::custom)
        throw IoError("only constructed profiles can be serialized; custom closed forms have no parameters");
    nlohmann::json grid;
    for (double r : profile_grid()) {
        const Jet rho = profile.rho(r);
        const Jet phi = profile.phi(r);
        grid["r"].push_back(r);
        grid["rho"].push_back(rho.value);
        grid["rho_d1"].push_back(rho.d1);
        grid["phi"].push_back(phi.value);
        grid["phi_d1"].push_back(phi.d1);
    }
    return {{"format", kProfileFormat},
            {"version", kProfileFormatVersion},
            {"variant", to_string(profile.variant)},
            {"eta_shape", shape_to_json(shape)},
            {"constants", {{"r1", profile.r1}, {"delta", profile.delta}, {"neck_slope", profile.neck_slope}}},
            {"grid", grid}};
}

ProfilePair profile_from_json(const nlohmann::json& doc, EtaShape* shape_out) {
    try {
        if (doc.at("format").get<std::string>() != kProfileFormat) throw IoError("not a conesmooth profile document");
        const int version = doc.at("version").get<int>();
        if (version != kProfileFormatVersion)
            throw IoError("unsupported profile format version " + std::to_string(version));
        const ProfileVariant variant = profile_variant_from_string(doc.at("variant").get<std::string>());
        if (variant == ProfileVariant::custom) throw IoError("custom profiles cannot be reloaded");
        const EtaShape shape = shape_from_json(doc.at("eta_shape"));
        const auto& constants = doc.at("constants");
        const double neck_slope = constants.at("neck_slope").get<double>();

        ProfilePair p = build_profile(neck_slope, shape, variant);
        if (!close(p.r1, constants.at("r1").get<double>()) || !close(p.delta, constants.at("delta").get<double>()))
            throw IoError("stored constants r1/delta disagree with the rebuilt profile");

        const auto& grid = doc.at("grid");
        const auto& rs = grid.at("r");
        for (std::size_t i = 0; i < rs.size(); ++i) {
            const double r = rs[i].get<double>();
            const Jet rho = p.rho(r);
            const Jet phi = p.phi(r);
            if (!close(rho.value, grid.at("rho")[i].get<double>()) ||
                !close(rho.d1, grid.at("rho_d1")[i].get<double>()) ||
                !close(phi.value, grid.at("phi")[i].get<double>()) ||
                !close(phi.d1, grid.at("phi_d1")[i].get<double>()))
                throw IoError("stored grid disagrees with the rebuilt profile at r = " + format_double(r));
        }
        if (shape_out) *shape_out = shape;
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed profile document: ") + e.what());
    }
}

void save_profile(const std::string& path, const ProfilePair& profile, const EtaShape& shape) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    os << profile_to_json(profile, shape).dump(2) << '\n';
    if (!os) throw IoError("failed writing '" + path + "'");
}

ProfilePair load_profile(const std::string& path, EtaShape* shape_out) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open '" + path + "'");
    nlohmann::json doc;
    try {
        is >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("'" + path + "' is not valid JSON: " + e.what());
    }
    return profile_from_json(doc, shape_out);
}

nlohmann::json report_to_json(const VerificationReport& report) {
    nlohmann::json bounds = nlohmann::json::array();
    for (const auto& b : report.bounds) {
        nlohmann::json jb{{"quantity", b.quantity},
                          {"symbolic", b.symbolic},
                          {"observed_min", b.observed_min},
                          {"observed_max", b.observed_max},
                          {"pass", b.pass}};
        if (b.monotone_nondecreasing) {
            jb["check"] = "monotone_nondecreasing";
        } else {
            jb["lower"] = std::isfinite(b.lower) ? nlohmann::json(b.lower) : nlohmann::json(nullptr);
            jb["upper"] = std::isfinite(b.upper) ? nlohmann::json(b.upper) : nlohmann::json(nullptr);
        }
        bounds.push_back(std::move(jb));
    }
    return {{"region", to_string(report.label)},
            {"interval", {report.begin, report.end}},
            {"grid_size", report.grid_size},
            {"sample_count", report.sample_count},
            {"tolerance", report.tolerance},
            {"semantics", "no violation on grid plus refinement samples at the stated tolerance"},
            {"minima", ricci_json(report.minima)},
            {"maxima", ricci_json(report.maxima)},
            {"argmin", report.argmin},
            {"bounds", bounds},
            {"pass", report.pass}};
}

void write_curve_csv(std::ostream& os, const VerificationReport& report, const std::optional<std::string>& header) {
    if (header) os << "# " << *header << '\n';
    os << "r,r00,r11,r22,r33\n";
    for (const auto& p : report.curve) {
        os << format_double(p.r) << ',' << format_double(p.ricci.r00) << ',' << format_double(p.ricci.r11) << ','
           << format_double(p.ricci.r22) << ',' << format_double(p.ricci.r33) << '\n';
    }
}

void write_points_csv(std::ostream& os, const SampledSpace& space) {
    os << "i,r,qw,qx,qy,qz\n";
    for (std::size_t i = 0; i < space.points.size(); ++i) {
        const auto& p = space.points[i];
        os << i << ',' << format_double(p.r) << ',' << format_double(p.q.w) << ',' << format_double(p.q.x) << ','
           << format_double(p.q.y) << ',' << format_double(p.q.z) << '\n';
    }
}

void write_condensed_csv(std::ostream& os, const SampledSpace& space) {
    os << "i,j,d\n";
    for (std::size_t i = 0; i < space.n; ++i)
        for (std::size_t j = i + 1; j < space.n; ++j) os << i << ',' << j << ',' << format_double(space(i, j)) << '\n';
}

void write_space_binary(std::ostream& os, const SampledSpace& space) {
    os.write(kSpaceMagic, 4);
    put<std::uint32_t>(os, kSpaceVersion);
    put<std::uint64_t>(os, space.n);
    put<std::uint64_t>(os, space.seed);
    put<std::uint64_t>(os, space.k);
    put<std::uint32_t>(os, space.points.empty() ? 0u : 1u);
    put<std::uint64_t>(os, space.provenance.size());
    os.write(space.provenance.data(), static_cast<std::streamsize>(space.provenance.size()));
    for (const auto& p : space.points) {
        put(os, p.r);
        put(os, p.q.w);
        put(os, p.q.x);
        put(os, p.q.y);
        put(os, p.q.z);
    }
    for (std::size_t i = 0; i < space.n; ++i)
        for (std::size_t j = i + 1; j < space.n; ++j) put(os, space(i, j));
    if (!os) throw IoError("failed writing binary space cache");
}

SampledSpace read_space_binary(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, kSpaceMagic, 4) != 0) throw IoError("not a binary space cache");
    const auto version = get<std::uint32_t>(is);
    if (version != kSpaceVersion) throw IoError("unsupported space cache version " + std::to_string(version));
    SampledSpace s;
    s.n = get<std::uint64_t>(is);
    s.seed = get<std::uint64_t>(is);
    s.k = get<std::uint64_t>(is);
    const bool has_points = get<std::uint32_t>(is) != 0;
    const auto len = get<std::uint64_t>(is);
    s.provenance.resize(len);
    if (!is.read(s.provenance.data(), static_cast<std::streamsize>(len))) throw IoError("truncated binary space cache");
    if (has_points) {
        s.points.resize(s.n);
        for (auto& p : s.points) {
            p.r = get<double>(is);
            p.q.w = get<double>(is);
            p.q.x = get<double>(is);
            p.q.y = get<double>(is);
            p.q.z = get<double>(is);
        }
    }
    s.dist.assign(s.n * s.n, 0.0);
    for (std::size_t i = 0; i < s.n; ++i)
        for (std::size_t j = i + 1; j < s.n; ++j) s.dist[i * s.n + j] = s.dist[j * s.n + i] = get<double>(is);
    return s;
}

nlohmann::json collapse_to_json(const std::vector<CollapseRow>& rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows)
        out.push_back({{"eps", r.eps},
                       {"gh_bound", r.gh_bound},
                       {"diameter", r.diameter},
                       {"cone_diameter", r.cone_diameter},
                       {"n", r.n},
                       {"k", r.k},
                       {"seed", r.seed}});
    return out;
}

void write_collapse_csv(std::ostream& os, const std::vector<CollapseRow>& rows,
                        const std::optional<std::string>& header) {
    if (header) os << "# " << *header << '\n';
    os << "eps,gh_bound,diameter,cone_diameter,n,k,seed\n";
    for (const auto& r : rows)
        os << format_double(r.eps) << ',' << format_double(r.gh_bound) << ',' << format_double(r.diameter) << ','
           << format_double(r.cone_diameter) << ',' << r.n << ',' << r.k << ',' << r.seed << '\n';
}

} // namespace conesmooth
