#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "conesmooth/cli.hpp"
#include "conesmooth/io.hpp"

using namespace conesmooth;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("conesmooth_test_" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "conesmooth");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::string drop_first_line(const std::string& s) { return s.substr(s.find('\n') + 1); }

std::size_t count(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
    return n;
}

} // namespace

TEST_CASE("profile documents round-trip") {
    const ProfilePair p = build_profile(default_neck_slope());
    const nlohmann::json doc = profile_to_json(p, EtaShape{});
    CHECK(doc.at("format") == "conesmooth.profile");
    CHECK(doc.at("version") == kProfileFormatVersion);
    EtaShape shape;
    const ProfilePair back = profile_from_json(doc, &shape);
    CHECK(back.r1 == p.r1);
    CHECK(back.delta == p.delta);
    CHECK(back.neck_slope == p.neck_slope);
    CHECK(back.variant == ProfileVariant::standard);
    for (double r : {0.1, 0.3, 1.0, 2.5}) CHECK(back.phi(r).value == p.phi(r).value);
}

TEST_CASE("profile documents reject inconsistent input") {
    const ProfilePair p = build_profile(0.05);
    nlohmann::json doc = profile_to_json(p, EtaShape{});

    nlohmann::json tampered = doc;
    tampered["grid"]["phi"][100] = tampered["grid"]["phi"][100].get<double>() + 1e-6;
    CHECK_THROWS_AS(profile_from_json(tampered), IoError);

    nlohmann::json future = doc;
    future["version"] = kProfileFormatVersion + 1;
    CHECK_THROWS_AS(profile_from_json(future), IoError);

    nlohmann::json broken = doc;
    broken.erase("constants");
    CHECK_THROWS_AS(profile_from_json(broken), IoError);

    const auto custom = make_closed_form_profile(constant_function(1.0), constant_function(1.0));
    CHECK_THROWS_AS(profile_to_json(custom, EtaShape{}), IoError);
    CHECK_THROWS_AS(load_profile("/nonexistent/profile.json"), IoError);
}

TEST_CASE("binary space cache round-trips") {
    const SampledSpace s = sample_annulus(build_profile(0.05), 0.5, 2.0, 120, 17);
    std::stringstream buf;
    write_space_binary(buf, s);
    const SampledSpace back = read_space_binary(buf);
    CHECK(back.n == s.n);
    CHECK(back.seed == s.seed);
    CHECK(back.k == s.k);
    CHECK(back.provenance == s.provenance);
    CHECK(back.dist == s.dist);
    REQUIRE(back.points.size() == s.points.size());
    for (std::size_t i = 0; i < s.n; ++i) CHECK(back.points[i] == s.points[i]);

    std::stringstream junk("not a cache");
    CHECK_THROWS_AS(read_space_binary(junk), IoError);
    std::string bytes;
    {
        std::stringstream b2;
        write_space_binary(b2, s);
        bytes = b2.str();
    }
    std::stringstream truncated(bytes.substr(0, bytes.size() / 2));
    CHECK_THROWS_AS(read_space_binary(truncated), IoError);
}

TEST_CASE("CSV writers") {
    const SampledSpace s = SampledSpace::from_matrix(3, {0, 1, 2, 1, 0, 1.5, 2, 1.5, 0});
    std::ostringstream os;
    write_condensed_csv(os, s);
    CHECK(os.str() == "i,j,d\n0,1,1\n0,2,2\n1,2,1.5\n");
    CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("cli build-profile") {
    TempDir dir;
    SUBCASE("defaults write a certified profile") {
        const CliResult r = run_cli({"build-profile", "--out", dir.path.string()});
        CHECK(r.code == cli::kExitOk);
        CHECK(fs::exists(dir.path / "profile.json"));
        CHECK(fs::exists(dir.path / "smoothness.json"));
        CHECK(count(r.out, "FAIL") == 0);
        CHECK(count(r.out, "PASS") == 6);
    }
    SUBCASE("infeasible eta names the mass constraint") {
        const CliResult r = run_cli({"build-profile", "--out", dir.path.string(), "--rise-end", "0.01",
                                     "--fall-start", "0.02", "--fall-end", "0.03"});
        CHECK(r.code != cli::kExitOk);
        CHECK(r.err.find("mass") != std::string::npos);
    }
    SUBCASE("missing output directory is an I/O error") {
        const CliResult r = run_cli({"build-profile", "--out", (dir.path / "missing").string()});
        CHECK(r.code == cli::kExitUsage);
        CHECK(r.err.find("I/O error") != std::string::npos);
    }
    SUBCASE("bad format is a usage error") {
        CHECK(run_cli({"build-profile", "--format", "xml"}).code == cli::kExitUsage);
        CHECK(run_cli({}).code == cli::kExitUsage);
    }
}

TEST_CASE("cli verify") {
    TempDir dir;
    const std::string out = dir.path.string();
    REQUIRE(run_cli({"build-profile", "--out", out}).code == 0);
    SUBCASE("default profile passes with four region lines") {
        const CliResult r = run_cli({"verify", "--profile", (dir.path / "profile.json").string(), "--out", out});
        CHECK(r.code == cli::kExitOk);
        for (const char* part : {"PASS Part1", "PASS Part2", "PASS Part3", "PASS Part4"})
            CHECK(r.out.find(part) != std::string::npos);
        CHECK(fs::exists(dir.path / "verification.json"));
        const std::string curve = slurp(dir.path / "curve.csv");
        CHECK(curve.rfind("# generated by conesmooth at ", 0) == 0);
        CHECK(drop_first_line(curve).rfind("r,r00,r11,r22,r33\n", 0) == 0);
    }
    SUBCASE("negative control fails with exit 1") {
        // The control is written but not certified: phi'(0) = 8.
        const CliResult built = run_cli({"build-profile", "--out", out, "--negative-control"});
        CHECK(built.code == cli::kExitVerificationFailed);
        CHECK(built.out.find("FAIL phi'(0)") != std::string::npos);
        REQUIRE(fs::exists(dir.path / "profile.json"));
        const CliResult r = run_cli({"verify", "--profile", (dir.path / "profile.json").string(), "--out", out});
        CHECK(r.code == cli::kExitVerificationFailed);
        CHECK(r.out.find("FAIL") != std::string::npos);
    }
    SUBCASE("bad path is an I/O error") {
        const CliResult r = run_cli({"verify", "--profile", (dir.path / "nope.json").string()});
        CHECK(r.code == cli::kExitUsage);
    }
    SUBCASE("csv reruns are identical apart from the timestamp") {
        const std::string profile = (dir.path / "profile.json").string();
        REQUIRE(run_cli({"verify", "--profile", profile, "--out", out, "--format", "csv", "--grid", "512"}).code == 0);
        const std::string first = slurp(dir.path / "verification.csv");
        const std::string first_curve = slurp(dir.path / "curve.csv");
        REQUIRE(run_cli({"verify", "--profile", profile, "--out", out, "--format", "csv", "--grid", "512"}).code == 0);
        CHECK(drop_first_line(first) == drop_first_line(slurp(dir.path / "verification.csv")));
        CHECK(drop_first_line(first_curve) == drop_first_line(slurp(dir.path / "curve.csv")));
    }
}

TEST_CASE("cli collapse") {
    TempDir dir;
    const std::string out = dir.path.string();
    SUBCASE("single eps gives a one-row table") {
        const CliResult r =
            run_cli({"collapse", "--eps", "0.5", "--samples", "100", "--out", out, "--format", "csv"});
        CHECK(r.code == cli::kExitOk);
        const std::string table = drop_first_line(slurp(dir.path / "collapse.csv"));
        CHECK(count(table, "\n") == 2);
        CHECK(table.rfind("eps,gh_bound,diameter", 0) == 0);
    }
    SUBCASE("empty eps list is a parameter error") {
        CHECK(run_cli({"collapse", "--eps", "", "--out", out}).code == cli::kExitUsage);
        CHECK(run_cli({"collapse", "--eps", "0.5,1", "--out", out}).code == cli::kExitUsage);
        CHECK(run_cli({"collapse", "--eps", "abc", "--out", out}).code == cli::kExitUsage);
    }
}

TEST_CASE("cli obstruction") {
    const CliResult r = run_cli({"obstruction"});
    CHECK(r.code == cli::kExitOk);
    CHECK(r.out.find("7/4 < 9/4: contradiction reproduced") != std::string::npos);
    CHECK(count(r.out, "contradiction reproduced") == 2);
    const CliResult big = run_cli({"obstruction", "--chi", "10"});
    CHECK(count(big.out, "consistent") == 2);
    CHECK(big.out.find("contradiction") == std::string::npos);
    CHECK(run_cli({"obstruction", "--group", "E8"}).code == cli::kExitUsage);
}
