// Drives the installed CLI binary through popen; checks exit codes, output
// files and reproducibility.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run cli(std::string const& args)
{
    std::string cmd = std::string(QNS_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) {
        r.out.append(buf.data(), n);
    }
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string canonical(std::string const& text)
{
    auto j = nlohmann::json::parse(text);
    j.erase("timestamp");
    return j.dump();
}

std::filesystem::path scratch(std::string const& name)
{
    auto p = std::filesystem::temp_directory_path() / ("qns_cli_test_" + name);
    std::filesystem::remove_all(p);
    return p;
}

std::string slurp(std::filesystem::path const& p)
{
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("help and version")
{
    CHECK(cli("--help").code == 0);
    auto v = cli("--version");
    CHECK(v.code == 0);
    CHECK(v.out.find("0.1.0") != std::string::npos);
    CHECK(cli("").code == 2);
    CHECK(cli("constants --no-such-flag").code == 2);
    CHECK(cli("frobnicate").code == 2);
}

TEST_CASE("constants")
{
    auto r = cli("constants --set unit-square --K 1 --compact");
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("C_from_K").get<double>() == doctest::Approx(2));
    CHECK(j.at("command") == "constants");
}

TEST_CASE("input errors")
{
    CHECK(cli("counterexample --N0 2").code == 2);
    CHECK(cli("analyze-set --window 1").code == 2);
    CHECK(cli("constants --workers 0").code == 2);
    auto bad = scratch("bad.json");
    std::ofstream(bad) << "{oops";
    CHECK(cli("constants --config " + bad.string()).code == 2);
}

TEST_CASE("check-qns thresholds and reproducibility")
{
    auto cfg = scratch("check.json");
    std::ofstream(cfg) << R"({
  "domain": {"dimension": 2, "primitives": [{"type": "ball", "center": [0, 0], "radius": 2}]},
  "field": {"kind": "indicator", "params": {"set": {"dimension": 2, "primitives": [{"type": "ball", "center": [0, 0], "radius": 1, "closed": true}]}}},
  "probes": {"lo": [-1, -1], "hi": [1, 1], "centers_per_axis": 7, "radii": 6, "r_max": 0.99}
})";
    auto pass = cli("check-qns --config " + cfg.string() + " --max-K 3 --seed 4");
    CHECK(pass.code == 0);
    auto fail = cli("check-qns --config " + cfg.string() + " --max-K 1.1 --seed 4");
    CHECK(fail.code == 1);
    auto w1 = cli("check-qns --config " + cfg.string() + " --seed 4 --workers 1");
    auto w1b = cli("check-qns --config " + cfg.string() + " --seed 4 --workers 1");
    CHECK(canonical(w1.out) == canonical(w1b.out));
}

TEST_CASE("counterexample writes its artifacts")
{
    auto dir = scratch("out");
    auto cfg = scratch("cx.json");
    std::ofstream(cfg) << R"({"quadrature": {"target_rel_err": 0.01, "max_samples": 100000},
 "restricted": {"rings": 2, "angles": 4, "radii": 3, "cross_checks": 1}})";
    auto r = cli("counterexample --config " + cfg.string() + " --M 4 --seed 9 --out " + dir.string());
    CHECK(r.code == 0);
    CHECK(std::filesystem::exists(dir / "report.json"));
    CHECK(std::filesystem::exists(dir / "domain.json"));
    auto csv = slurp(dir / "implied_k.csv");
    CHECK(csv.rfind("m,a_m,b_m,z_m,ratio,implied_K\r\n", 0) == 0);
    CHECK(canonical(slurp(dir / "report.json")) == canonical(r.out));
    std::filesystem::remove_all(dir);
}
