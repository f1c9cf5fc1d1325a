#include "conesmooth/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "conesmooth/curvature_verifier.hpp"
#include "conesmooth/io.hpp"
#include "conesmooth/metric_lab.hpp"
#include "conesmooth/obstruction_checks.hpp"
#include "conesmooth/profile_builder.hpp"

namespace conesmooth::cli {

namespace {

namespace fs = std::filesystem;

struct RunConfig {
    std::string profile_path;
    std::string out_dir = ".";
    std::string format = "json";
    std::size_t grid = 4096;
    double tol = 1e-9;
    std::string eps = "1,0.5,0.25,0.125";
    std::uint64_t seed = 20240601;
    double rmax = 3.0;
    double neck_slope = 0.0; // 0: subcommand default
    std::size_t samples = 800;
    EtaShape shape;
    bool negative_control = false;
    std::string chi = "1";
    std::string tau = "0";
    std::string group = "all";
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string timestamp_header() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    std::ostringstream os;
    os << "generated by conesmooth at " << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

fs::path require_out_dir(const std::string& dir) {
    const fs::path p(dir);
    if (!fs::is_directory(p)) throw IoError("output directory '" + dir + "' does not exist");
    return p;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
    return os;
}

std::vector<double> parse_eps_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("invalid eps value '" + item + "'");
        }
    }
    if (out.empty()) throw UsageError("eps list is empty");
    return out;
}

int cmd_build_profile(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const fs::path dir = require_out_dir(cfg.out_dir);
    const double c = cfg.neck_slope > 0.0 ? cfg.neck_slope : default_neck_slope();
    const auto variant = cfg.negative_control ? ProfileVariant::doubled_inner_slope : ProfileVariant::standard;
    ProfilePair profile;
    try {
        profile = build_profile(c, cfg.shape, variant);
    } catch (const ConstructionError& e) {
        err << "construction failed [" << e.claim() << "]: " << e.what() << '\n';
        return kExitVerificationFailed;
    }
    save_profile((dir / "profile.json").string(), profile, cfg.shape);

    const SmoothnessReport report = smoothness_check(profile);
    if (cfg.format == "json") {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& ch : report.checks)
            j.push_back({{"check", ch.name},
                         {"value", ch.value},
                         {"expected", ch.expected},
                         {"tolerance", ch.tolerance},
                         {"pass", ch.pass}});
        open_out(dir / "smoothness.json") << j.dump(2) << '\n';
    } else {
        auto os = open_out(dir / "smoothness.csv");
        os << "# " << timestamp_header() << "\ncheck,value,expected,tolerance,pass\n";
        for (const auto& ch : report.checks)
            os << ch.name << ',' << format_double(ch.value) << ',' << format_double(ch.expected) << ','
               << format_double(ch.tolerance) << ',' << (ch.pass ? 1 : 0) << '\n';
    }

    out << "profile written to " << (dir / "profile.json").string() << '\n';
    out << "r1 = " << format_double(profile.r1) << ", delta = " << format_double(profile.delta)
        << ", neck_slope = " << format_double(profile.neck_slope) << " (" << to_string(variant) << ")\n";
    for (const auto& ch : report.checks)
        out << (ch.pass ? "PASS " : "FAIL ") << ch.name << " = " << format_double(ch.value) << " (expected "
            << format_double(ch.expected) << " +- " << format_double(ch.tolerance) << ")\n";
    return report.all_pass() ? kExitOk : kExitVerificationFailed;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    const ProfilePair profile = load_profile(cfg.profile_path);
    const fs::path dir = require_out_dir(cfg.out_dir);
    VerifyOptions opts;
    opts.n_grid = cfg.grid;
    opts.tol = cfg.tol;
    if (!(cfg.rmax > profile.r1 + 0.25)) throw UsageError("--rmax must exceed r1 + 1/4");

    const std::vector<VerificationReport> reports = verify_all(profile, cfg.rmax, opts);
    bool all = true;
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& rep : reports) {
        all = all && rep.pass;
        out << (rep.pass ? "PASS " : "FAIL ") << to_string(rep.label) << " [" << format_double(rep.begin) << ", "
            << format_double(rep.end) << "] min Ric = (" << format_double(rep.minima.r00) << ", "
            << format_double(rep.minima.r11) << ", " << format_double(rep.minima.r22) << ", "
            << format_double(rep.minima.r33) << ")\n";
        for (const auto& b : rep.bounds)
            if (!b.pass)
                out << "  violated: " << b.quantity << ' ' << b.symbolic << " (observed ["
                    << format_double(b.observed_min) << ", " << format_double(b.observed_max) << "])\n";
        doc.push_back(report_to_json(rep));
    }

    if (cfg.format == "json") {
        open_out(dir / "verification.json") << doc.dump(2) << '\n';
    } else {
        auto os = open_out(dir / "verification.csv");
        os << "# " << timestamp_header() << "\nregion,begin,end,min_r00,min_r11,min_r22,min_r33,pass\n";
        for (const auto& rep : reports)
            os << to_string(rep.label) << ',' << format_double(rep.begin) << ',' << format_double(rep.end) << ','
               << format_double(rep.minima.r00) << ',' << format_double(rep.minima.r11) << ','
               << format_double(rep.minima.r22) << ',' << format_double(rep.minima.r33) << ','
               << (rep.pass ? 1 : 0) << '\n';
    }
    auto curve = open_out(dir / "curve.csv");
    write_curve_csv(curve, reports.back(), timestamp_header());

    out << (all ? "verification passed" : "verification FAILED") << '\n';
    return all ? kExitOk : kExitVerificationFailed;
}

int cmd_collapse(const RunConfig& cfg, std::ostream& out) {
    const std::vector<double> eps = parse_eps_list(cfg.eps);
    const fs::path dir = require_out_dir(cfg.out_dir);
    ProfilePair profile;
    if (!cfg.profile_path.empty()) {
        profile = load_profile(cfg.profile_path);
    } else {
        profile = build_profile(cfg.neck_slope > 0.0 ? cfg.neck_slope : 0.05);
    }
    std::vector<CollapseRow> rows;
    try {
        rows = collapse_experiment(profile, eps, cfg.samples, cfg.seed);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    if (cfg.format == "json") {
        open_out(dir / "collapse.json") << collapse_to_json(rows).dump(2) << '\n';
    } else {
        auto os = open_out(dir / "collapse.csv");
        write_collapse_csv(os, rows, timestamp_header());
    }
    write_collapse_csv(out, rows);
    const std::size_t violations = monotonicity_violations(rows);
    double dmin = rows.front().diameter, dmax = rows.front().diameter;
    for (const auto& r : rows) {
        dmin = std::min(dmin, r.diameter);
        dmax = std::max(dmax, r.diameter);
    }
    out << "gh_bound " << (violations == 0 ? "strictly decreasing" : "not strictly decreasing") << " ("
        << violations << " violation" << (violations == 1 ? "" : "s") << "); diameter max/min = "
        << format_double(dmax / dmin) << '\n';
    return violations <= 1 ? kExitOk : kExitVerificationFailed;
}

int cmd_obstruction(const RunConfig& cfg, std::ostream& out) {
    TopologicalData data;
    try {
        data.chi = parse_rational(cfg.chi);
        data.tau = parse_rational(cfg.tau);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    std::vector<SpaceFormId> groups;
    if (cfg.group == "all") {
        groups = {SpaceFormId::Q8, SpaceFormId::BinaryIcosahedral};
    } else {
        try {
            groups = {parse_space_form(cfg.group)};
        } catch (const UnknownGroupError& e) {
            throw UsageError(e.what());
        }
    }
    for (SpaceFormId id : groups) {
        const HitchinVerdict v = hitchin_check(data, id);
        const SpaceFormGroup g = space_form_group(id);
        out << to_string(id) << " (|Gamma| = " << g.order << ", |eta| = " << to_string(g.eta) << ", chi = "
            << to_string(data.chi) << ", tau = " << to_string(data.tau) << "): " << to_string(v.lhs)
            << (v.consistent ? " >= " : " < ") << to_string(v.rhs) << ": "
            << (v.consistent ? "consistent" : "contradiction reproduced") << '\n';
    }
    return kExitOk;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Construct, certify and sample the smoothed cone over S^3/Q8"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* build = app.add_subcommand("build-profile", "construct the warping profiles and check smoothness at r = 0");
    build->add_option("--out", cfg.out_dir, "output directory (must exist)");
    build->add_option("--format", cfg.format, "report format")->check(CLI::IsMember({"csv", "json"}));
    build->add_option("--neck-slope", cfg.neck_slope, "tail slope of rho (default e^-100)")
        ->check(CLI::PositiveNumber);
    build->add_option("--rise-start", cfg.shape.rise_start, "eta ramp-up start");
    build->add_option("--rise-end", cfg.shape.rise_end, "eta ramp-up end");
    build->add_option("--fall-start", cfg.shape.fall_start, "eta ramp-down start");
    build->add_option("--fall-end", cfg.shape.fall_end, "eta ramp-down end");
    build->add_flag("--negative-control", cfg.negative_control, "write the doubled-slope control profile instead");

    auto* verify = app.add_subcommand("verify", "certify Ric >= 0 region by region");
    verify->add_option("--profile", cfg.profile_path, "profile JSON")->required();
    verify->add_option("--out", cfg.out_dir, "output directory (must exist)");
    verify->add_option("--format", cfg.format, "report format")->check(CLI::IsMember({"csv", "json"}));
    verify->add_option("--grid", cfg.grid, "grid points per region")->check(CLI::Range(64, 1 << 24));
    verify->add_option("--tol", cfg.tol, "absolute tolerance")->check(CLI::PositiveNumber);
    verify->add_option("--rmax", cfg.rmax, "outer radius of the sweep")->check(CLI::PositiveNumber);

    auto* collapse = app.add_subcommand("collapse", "Gromov-Hausdorff collapse experiment");
    collapse->add_option("--profile", cfg.profile_path, "profile JSON (default: built with --neck-slope)");
    collapse->add_option("--neck-slope", cfg.neck_slope, "tail slope when building (default 0.05)")
        ->check(CLI::PositiveNumber);
    collapse->add_option("--eps", cfg.eps, "decreasing comma-separated scales in (0, 1]");
    collapse->add_option("--samples", cfg.samples, "points per sample")->check(CLI::Range(50, 100000));
    collapse->add_option("--seed", cfg.seed, "sampling seed");
    collapse->add_option("--out", cfg.out_dir, "output directory (must exist)");
    collapse->add_option("--format", cfg.format, "table format")->check(CLI::IsMember({"csv", "json"}));

    auto* obstruction = app.add_subcommand("obstruction", "exact Hitchin inequality check");
    obstruction->add_option("--chi", cfg.chi, "Euler number (rational)");
    obstruction->add_option("--tau", cfg.tau, "signature (rational)");
    obstruction->add_option("--group", cfg.group, "Q8, BinaryIcosahedral or all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*build) return cmd_build_profile(cfg, out, err);
        if (*verify) return cmd_verify(cfg, out);
        if (*collapse) return cmd_collapse(cfg, out);
        if (*obstruction) return cmd_obstruction(cfg, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConstructionError& e) {
        err << "construction failed [" << e.claim() << "]: " << e.what() << '\n';
        return kExitVerificationFailed;
    }
    return kExitUsage;
}

} // namespace conesmooth::cli
