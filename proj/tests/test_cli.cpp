#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "declutter/io.hpp"

namespace fs = std::filesystem;
using declutter::cli::exit_ok;
using declutter::cli::exit_usage;

namespace {

struct Invocation {
    int code;
    std::string out;
    std::string err;
};

Invocation invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "declutter");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = declutter::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

/// A fresh scratch directory removed at scope exit.
struct Scratch {
    fs::path dir;
    Scratch() {
        std::random_device rd;
        dir = fs::temp_directory_path() / ("declutter_cli_" + std::to_string(rd()));
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

nlohmann::json read_json(const std::string& path) { return nlohmann::json::parse(slurp(path)); }

}

TEST_CASE("help and usage errors") {
    CHECK(invoke({"--help"}).code == exit_ok);
    CHECK(invoke({"declutter", "--help"}).out.find("--vicinity") != std::string::npos);
    CHECK(invoke({}).code == exit_usage);
    CHECK(invoke({"frobnicate"}).code == exit_usage);
    CHECK(invoke({"declutter", "--input", "x.csv"}).code == exit_usage);  // --k missing
    CHECK(invoke({"--metric", "l7", "declutter", "--input", "x.csv", "--k", "2"}).code == exit_usage);
    CHECK(invoke({"declutter", "--input", "a", "--matrix", "b", "--k", "2"}).code == exit_usage);
    CHECK(invoke({"parfree", "--input", "a", "--C", "3", "--practical"}).code == exit_usage);
    const auto missing = invoke({"declutter", "--input", "/nonexistent/points.csv", "--k", "2"});
    CHECK(missing.code == exit_usage);
    CHECK(missing.err.find("error:") == 0);
}

TEST_CASE("gen writes the sample, tags, reference and a spec report") {
    Scratch s;
    const auto r = invoke({"--seed", "3", "gen", "--shape", "circle", "--count", "200", "--sigma", "0.01",
                           "--ambient", "20", "--out-dir", s.dir.string()});
    REQUIRE(r.code == exit_ok);
    const auto points = declutter::io::read_points_file(s / "points.csv");
    CHECK(points.size() == 220);
    CHECK(declutter::io::read_points_file(s / "reference.csv").size() >= 2000);
    CHECK(slurp(s / "tags.csv").find("219,ambient") != std::string::npos);
    const auto spec = read_json(s / "spec.json");
    CHECK(spec["version"] == "1.0.0");
    CHECK(spec["config"]["seed"] == "3");
    CHECK(spec["ambient_count"] == 20);
    CHECK(!fs::exists(s / "feature.csv"));

    Scratch t;
    REQUIRE(invoke({"--seed", "3", "gen", "--shape", "circle", "--count", "200", "--sigma", "0.01", "--ambient",
                    "20", "--out-dir", t.dir.string()})
                .code == exit_ok);
    CHECK(slurp(s / "points.csv") == slurp(t / "points.csv"));
}

TEST_CASE("gen in adaptive mode writes the feature size") {
    Scratch s;
    REQUIRE(invoke({"gen", "--shape", "polyline", "--vertices", "0,0;1,0;1,1", "--mode", "adaptive",
                    "--feature-anchor", "0,0", "--feature-floor", "0.05", "--count", "100", "--out-dir",
                    s.dir.string()})
                .code == exit_ok);
    const auto f = declutter::io::read_values_file(s / "feature.csv");
    CHECK(f.size() == declutter::io::read_points_file(s / "reference.csv").size());
    const auto r = invoke({"certify", "--input", s / "points.csv", "--reference", s / "reference.csv", "--feature",
                           s / "feature.csv", "--k", "2,4"});
    CHECK(r.code == exit_ok);
}

TEST_CASE("declutter writes points, ids, report and svg") {
    Scratch s;
    std::ofstream(s / "line.csv") << "0\n1\n2\n100\n";
    const auto r = invoke({"declutter", "--input", s / "line.csv", "--k", "2", "--output", s / "kept.csv",
                           "--ids-output", s / "kept.ids", "--report", s / "report.json", "--profile-csv",
                           s / "profile.csv"});
    REQUIRE(r.code == exit_ok);
    CHECK(r.out.find("kept 2 of 4") != std::string::npos);
    CHECK(slurp(s / "kept.ids") == "# id\n0\n2\n");
    CHECK(declutter::io::read_points_file(s / "kept.csv").size() == 2);
    const auto report = read_json(s / "report.json");
    CHECK(report["config"]["subcommand"] == "declutter");
    CHECK(report["config"]["options"]["k"] == "2");
    CHECK(report["config"]["kind"] == "rms");
    CHECK(report["result"]["kept"].size() == 2);
    CHECK(slurp(s / "profile.csv").rfind("# id,rms_k2", 0) == 0);

    std::ofstream(s / "plane.csv") << "0,0\n1,0\n0,1\n5,5\n";
    REQUIRE(invoke({"declutter", "--input", s / "plane.csv", "--k", "2", "--svg", s / "out.svg"}).code == exit_ok);
    CHECK(slurp(s / "out.svg").find("<svg") == 0);
}

TEST_CASE("declutter on a distance matrix writes ids") {
    Scratch s;
    std::ofstream(s / "m.csv") << "0,1,2,99\n1,0,1,98\n2,1,0,97\n99,98,97,0\n";
    REQUIRE(invoke({"declutter", "--matrix", s / "m.csv", "--k", "2", "--output", s / "kept.txt"}).code == exit_ok);
    CHECK(slurp(s / "kept.txt").rfind("# id\n", 0) == 0);
}

TEST_CASE("parfree trace has non-increasing cardinalities") {
    Scratch s;
    REQUIRE(invoke({"gen", "--shape", "polyline", "--vertices", "-1,-1;1,-1;1,1;-1,1", "--closed", "--count", "600",
                    "--sigma", "0.005", "--ambient", "150", "--out-dir", s.dir.string()})
                .code == exit_ok);
    const auto r = invoke({"parfree", "--input", s / "points.csv", "--report", s / "trace.json", "--output",
                           s / "out.csv", "--dump-dir", s / "steps"});
    REQUIRE(r.code == exit_ok);
    const auto trace = read_json(s / "trace.json")["trace"];
    std::size_t previous = 750;
    for (const auto& it : trace["iterations"]) {
        const auto in = it["input_size"].get<std::size_t>();
        CHECK(in <= previous);
        previous = in;
    }
    CHECK(fs::exists(s / "steps/level_1_resampled.csv"));
    const auto practical = invoke({"parfree", "--input", s / "points.csv", "--practical"});
    CHECK(practical.out.find("C=4") != std::string::npos);
}

TEST_CASE("certify and eval on a generated circle") {
    Scratch s;
    REQUIRE(invoke({"gen", "--count", "300", "--sigma", "0.01", "--ambient", "30", "--out-dir", s.dir.string()})
                .code == exit_ok);
    const auto c = invoke({"certify", "--input", s / "points.csv", "--reference", s / "reference.csv", "--k",
                           "4,8", "--report", s / "cert.json"});
    REQUIRE(c.code == exit_ok);
    CHECK(read_json(s / "cert.json")["certificates"].size() == 2);
    const auto e = invoke({"eval", "--input", s / "points.csv", "--reference", s / "reference.csv", "--k", "8",
                           "--parfree", "--strict", "--report", s / "eval.json"});
    CHECK(e.code == exit_ok);
    CHECK(e.out.find("declutter_hausdorff") != std::string::npos);
    for (const auto& b : read_json(s / "eval.json")["bounds"]) {
        CHECK(b["status"] != "fail");
    }
    CHECK(invoke({"eval", "--input", s / "points.csv", "--reference", s / "reference.csv"}).code == exit_usage);
}

TEST_CASE("repro fig1 emits the three outputs") {
    Scratch s;
    const auto r = invoke({"repro", "fig1", "--out-dir", s.dir.string()});
    REQUIRE(r.code == exit_ok);
    for (const char* name : {"declutter_k2.csv", "declutter_k10.csv", "parfree.csv", "input.svg", "summary.json"}) {
        CHECK(fs::exists(s / name));
    }
    CHECK(read_json(s / "summary.json")["outputs"].size() == 3);
    CHECK(invoke({"repro", "fig9", "--out-dir", s.dir.string()}).code == exit_usage);
}
