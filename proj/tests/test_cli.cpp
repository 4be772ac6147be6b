#include "doctest.h"

#include "biharm/experiments/cli.hpp"
#include "biharm/experiments/config.hpp"
#include "biharm/experiments/experiments.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace biharm::experiments;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "biharm");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    Run r;
    r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("biharm_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text)
{
    const fs::path p = dir / "config.json";
    std::ofstream(p) << text;
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

const std::string kData = BIHARM_TEST_DATA;

} // namespace

TEST_CASE("exit codes")
{
    CHECK(cli({}).code == kExitConfigError);
    CHECK(cli({"--help"}).code == kExitPass);
    CHECK(cli({"bogus"}).code == kExitConfigError);
    CHECK(cli({"ansatz"}).code == kExitPass);
    CHECK(cli({"--config", kData + "/unknown_key.json", "residual"}).code == kExitConfigError);
    CHECK(cli({"--config", kData + "/does_not_exist.json", "residual"}).code == kExitConfigError);
    CHECK(cli({"--config", kData + "/linear_euclidean.json", "residual"}).code
          == kExitCheckFailed);
}

TEST_CASE("unknown keys are named in the diagnostic")
{
    const auto r = cli({"--config", kData + "/unknown_key.json", "residual"});
    CHECK(r.err.find("colour") != std::string::npos);
    CHECK(r.out.empty());
}

TEST_CASE("ansatz overrides from the command line")
{
    const auto r = cli({"ansatz", "--family", "ex1", "--n", "7"});
    REQUIRE(r.code == kExitPass);
    const Json doc = Json::parse(r.out);
    CHECK(doc["experiment"] == "ansatz");
    CHECK(doc["status"] == "pass");
    const auto& roots = doc["summary"]["roots"];
    REQUIRE(roots.size() == 2);
    CHECK(roots[0]["a"].get<double>() == doctest::Approx(-1.0));
    CHECK(roots[1]["a"].get<double>() == doctest::Approx(2.5));

    const auto three = Json::parse(cli({"ansatz", "--family", "ex2", "--n", "3"}).out);
    CHECK(three["summary"].contains("sign_flipped_roots"));
    CHECK(cli({"ansatz", "--family", "ex3"}).code == kExitConfigError);
}

TEST_CASE("reports are deterministic and seeds are honoured")
{
    const fs::path dir = scratch("seed");
    const fs::path cfg = write_config(dir, R"({
  "schema_version": 1,
  "residual": {
    "manifold": {"kind": "euclidean", "dim": 3},
    "rho": {"preset": "random_cubic", "seed": 3},
    "grid": {"lower": -0.5, "upper": 0.5, "resolution": 2},
    "expect": "nonzero"
  }
})");
    const auto a = cli({"--config", cfg.string(), "residual"});
    const auto b = cli({"--config", cfg.string(), "residual"});
    CHECK(a.code == kExitPass);
    CHECK(a.out == b.out);
    const auto c = cli({"--config", cfg.string(), "--seed", "4", "residual"});
    CHECK(c.code == kExitPass);
    CHECK(c.out != a.out);
    CHECK(Json::parse(c.out)["config"]["rho"]["seed"] == 4);
}

TEST_CASE("output files")
{
    const fs::path dir = scratch("out");
    const auto r = cli({"--out", dir.string(), "--csv", "--timing", "ode"});
    REQUIRE(r.code == kExitPass);
    CHECK(slurp(dir / "ode.json") == r.out);
    const std::string csv = slurp(dir / "ode.csv");
    CHECK(csv.rfind("s,y,yp,rho\n", 0) == 0);
    CHECK(csv.find("1.0000000000000000e+00") != std::string::npos);
    CHECK(r.err.find("wall_time_seconds ode ") != std::string::npos);
}

TEST_CASE("report layout")
{
    const Json doc = run_counterexample_41a(Json::object()).to_json();
    std::vector<std::string> keys;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        keys.push_back(it.key());
    }
    CHECK(keys == std::vector<std::string>{"schema_version", "experiment", "status", "config",
                                           "checks", "summary"});
    CHECK(doc["schema_version"] == kSchemaVersion);
    CHECK(doc["status"] == "pass");
}

TEST_CASE("config validation")
{
    CHECK_THROWS_AS(validate_top_level(Json::parse(R"({"schema_version": 2})")), ConfigError);
    CHECK_THROWS_AS(validate_top_level(Json::parse(R"({"schema_version": 1, "nope": {}})")),
                    ConfigError);
    CHECK_THROWS_AS(run_residual(Json::parse(R"({"grid": {"resolution": 0}})")), ConfigError);
    CHECK_THROWS_AS(run_residual(Json::parse(R"({"fd": {"h": 0.5}})")), ConfigError);
    CHECK_THROWS_AS(run_residual(Json::parse(R"({"manifold": {"kind": "torus", "dim": 3}})")),
                    ConfigError);
    CHECK_THROWS_AS(run_ode(Json::parse(R"({"n": 3, "s0": 2, "s1": 1})")), ConfigError);
    CHECK_THROWS_AS(run_experiment("nope", Json::object()), ConfigError);
}
