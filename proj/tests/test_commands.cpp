#include <cmath>
#include <numbers>
#include <string>

#include "doctest.h"
#include "qns/commands.hpp"
#include "qns/region_io.hpp"

using namespace qns;
using nlohmann::json;

namespace {

json disk_indicator_config()
{
    Region omega = Region::ball(2, {0, 0, 0}, 2);
    Field chi = Field::indicator(omega, Region::ball(2, {0, 0, 0}, 1, true));
    return {{"domain", io::region_to_json(omega)},
            {"field", io::field_to_json(chi)},
            {"probes", {{"lo", {-1, -1}}, {"hi", {1, 1}}, {"centers_per_axis", 9}, {"radii", 8}, {"r_max", 0.99}}},
            {"seed", 5}};
}

json fast_counterexample(std::string const& variant)
{
    return {{"variant", variant},
            {"N0", 3},
            {"M", 4},
            {"seed", 8},
            {"quadrature", {{"target_rel_err", 1e-2}, {"max_samples", 200000}}},
            {"restricted", {{"rings", 3}, {"angles", 6}, {"radii", 4}, {"cross_checks", 2}}},
            {"grid_points", 2001}};
}

}  // namespace

TEST_CASE("command registry")
{
    CHECK(commands::command_names().size() == 6);
    CHECK(std::string(commands::version()) == "0.1.0");
    auto out = commands::run("frobnicate", json::object());
    CHECK(out.exit_code == 2);
    CHECK(out.report.at("error_kind") == "invalid_input");
}

TEST_CASE("reports carry provenance fields")
{
    auto out = commands::run("constants", {{"seed", "18446744073709551615"}, {"lens_samples", 10000}});
    CHECK(out.exit_code == 0);
    CHECK(out.report.at("seed") == "18446744073709551615");
    CHECK(out.report.at("command") == "constants");
    CHECK(out.report.at("version") == "0.1.0");
    CHECK(out.report.contains("timestamp"));
    CHECK(out.report.at("worker_count") == 1);
    CHECK(commands::canonical_report(out.report).find("timestamp") == std::string::npos);
}

TEST_CASE("input errors exit with code 2")
{
    CHECK(commands::run_text("constants", "{not json").exit_code == 2);
    CHECK(commands::run("constants", json::array()).exit_code == 2);
    CHECK(commands::run("constants", {{"workers", 0}}).exit_code == 2);
    CHECK(commands::run("constants", {{"seed", -1}}).exit_code == 2);
    CHECK(commands::run("check-qns", json::object()).exit_code == 2);
    CHECK(commands::run("counterexample", {{"N0", 2}}).exit_code == 2);
    auto bad = commands::run("analyze-set", {{"form", "family"}, {"family", {{"name", "cantor"}}}});
    CHECK(bad.exit_code == 2);
    CHECK(bad.report.at("error").get<std::string>().find("cantor") != std::string::npos);
}

TEST_CASE("analyze-set")
{
    json geo = {{"set", {{"form", "family"}, {"family", {{"name", "geometric"}, {"params", {{"c", 1}, {"q", 2}}}}}}},
                {"window", {1e-3, 1e3}}};
    auto out = commands::run("analyze-set", geo);
    CHECK(out.exit_code == 0);
    CHECK(out.report.at("verdict") == "yes");
    json sg = {{"form", "family"}, {"family", {{"name", "super_geometric"}, {"params", {{"p", 2}}}}},
               {"window", {std::exp(-16.0), 1.0}}};
    auto no = commands::run("analyze-set", sg);
    CHECK(no.exit_code == 0);
    CHECK(no.report.at("verdict") == "no");
}

TEST_CASE("check-qns")
{
    auto cfg = disk_indicator_config();
    auto est = commands::run("check-qns", cfg);
    CHECK(est.exit_code == 0);
    CHECK(est.report.at("verdict") == "estimated");

    cfg["max_K"] = 3;
    auto pass = commands::run("check-qns", cfg);
    CHECK(pass.exit_code == 0);
    CHECK(pass.report.at("verdict") == "pass");

    cfg["max_K"] = 1.2;
    auto fail = commands::run("check-qns", cfg);
    CHECK(fail.exit_code == 1);
    CHECK(fail.report.at("verdict") == "fail");
    CHECK(fail.report.at("failure_count").get<int>() > 0);

    cfg["probes"]["lo"] = {5, 5};
    cfg["probes"]["hi"] = {6, 6};
    CHECK(commands::run("check-qns", cfg).exit_code == 2);
}

TEST_CASE("check-qns is reproducible across worker counts")
{
    auto cfg = disk_indicator_config();
    cfg["workers"] = 1;
    auto a = commands::run("check-qns", cfg);
    cfg["workers"] = 4;
    auto b = commands::run("check-qns", cfg);
    json ra = a.report;
    json rb = b.report;
    ra.erase("worker_count");
    rb.erase("worker_count");
    CHECK(commands::canonical_report(ra) == commands::canonical_report(rb));
    cfg["seed"] = 6;
    auto c = commands::run("check-qns", cfg);
    CHECK(c.report.at("K_hat") != a.report.at("K_hat"));
}

TEST_CASE("counterexample command")
{
    auto out = commands::run("counterexample", fast_counterexample("gaps"));
    CHECK(out.exit_code == 0);
    CHECK(out.report.at("verdict") == "pass");
    REQUIRE(out.artifacts.size() == 2);
    CHECK(out.artifacts[0].name == "domain.json");
    CHECK(json::parse(out.artifacts[0].data).at("variant") == "gaps");
    CHECK(out.artifacts[1].name == "implied_k.csv");
    auto again = commands::run("counterexample", fast_counterexample("gaps"));
    CHECK(commands::canonical_report(again.report) == commands::canonical_report(out.report));

    auto f1 = commands::run("counterexample", fast_counterexample("f1"));
    CHECK(f1.exit_code == 0);
    CHECK(f1.report.at("n0").at("as_written") == 1);
    CHECK(f1.report.at("n0").at("reversed") == 3);
    CHECK(f1.report.at("f1_mean").at("pass") == true);
}

TEST_CASE("constants")
{
    auto out = commands::run("constants", {{"set", "unit-square"}, {"K", 1}, {"lens_samples", 100000}});
    CHECK(out.exit_code == 0);
    CHECK(out.report.at("lens_constant").get<double>() == doctest::Approx(2.0 / 3 - std::sqrt(3.0) / (2 * std::numbers::pi)));
    CHECK(out.report.at("C_from_K").get<double>() == doctest::Approx(2));
    auto back = commands::run("constants", {{"set", "unit-square"}, {"C", 2}, {"lens_samples", 10000}});
    CHECK(back.report.at("K_from_C").get<double>() == doctest::Approx(std::numbers::pi));
}

TEST_CASE("analyze-f and phi")
{
    auto psi = commands::run("analyze-f", {{"function", "psi"}, {"grid_points", 20001}});
    CHECK(psi.exit_code == 0);
    CHECK(psi.report.at("admissible") == true);
    auto f1 = commands::run("analyze-f", {{"function", "f1"}, {"grid_points", 20001}});
    CHECK(f1.exit_code == 0);
    CHECK(f1.report.at("admissible") == false);

    auto p = commands::run("phi", {{"kind", "isoperimetric_deficit"}, {"scale", 3}, {"angle", 0.4}});
    CHECK(p.exit_code == 0);
    CHECK(p.report.at("phi").get<double>() == doctest::Approx(3 * std::sqrt(16 - 4 * std::numbers::pi)));
    CHECK(p.report.at("homogeneity_ratio").get<double>() == doctest::Approx(1));
    CHECK(commands::run("phi", {{"kind", "isoperimetric_deficit"}, {"D", "unit-disk"}}).exit_code == 2);
}
