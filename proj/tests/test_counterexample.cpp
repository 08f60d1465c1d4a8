#include <cmath>
#include <numbers>
#include <string>

#include "doctest.h"
#include "qns/counterexample.hpp"
#include "qns/errors.hpp"

using namespace qns;

namespace {

QuadratureSpec spec(std::uint64_t seed = 11)
{
    QuadratureSpec s;
    s.target_rel_err = 5e-3;
    s.max_samples = 500'000;
    s.seed = seed;
    s.workers = 4;
    return s;
}

std::string construction_message(SequencePair const& s)
{
    try {
        s.validate();
    } catch (ConstructionError const& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("default sequences")
{
    auto s = default_sequences(3, 5);
    REQUIRE(s.size() == 5);
    CHECK(s.b[0] == 1.0 / 16);
    CHECK(s.b[1] == std::ldexp(1.0, -16));
    CHECK(s.a[0] == doctest::Approx(1.0 / (16 * 12)));
    CHECK(s.a[2] == doctest::Approx(s.b[2] / 36));
    CHECK_NOTHROW(s.validate());

    CHECK_THROWS_AS(default_sequences(2, 5), ConstructionError);
    CHECK_THROWS_AS(default_sequences(3, 2), ConstructionError);
    CHECK_THROWS_AS(default_sequences(3, 16), ConstructionError);

    auto c = CounterexampleDomain::build(s);
    CHECK(c.centers()[0] == 0);
    CHECK(c.centers()[1] == 0.125);
}

TEST_CASE("sequence validation names the violated inequality")
{
    auto s = default_sequences(3, 4);
    for (std::size_t i = 0; i < s.a.size(); ++i) {
        s.a[i] = s.b[i] / 4;
    }
    auto msg = construction_message(s);
    CHECK(msg.find("2a_m < b_m/N0") != std::string::npos);
    CHECK(msg.find("m = 1") != std::string::npos);

    auto t = default_sequences(3, 4);
    t.b[2] = t.a[1] * 2;
    CHECK(construction_message(t).find("b_{m+1} < a_m") != std::string::npos);

    auto u = default_sequences(3, 4);
    u.a.pop_back();
    CHECK_THROWS_AS(u.validate(), ConstructionError);
}

TEST_CASE("f1 sequences")
{
    auto s = f1_sequences(3, 4);
    CHECK(s.first_index == 4);
    CHECK(s.variant == CounterexampleVariant::f1);
    CHECK(s.a[0] == std::ldexp(1.0, -64));
    CHECK(s.b[1] == doctest::Approx(5 * s.a[1]));
    CHECK_NOTHROW(s.validate());
    CHECK_THROWS_AS(f1_sequences(3, 13), ConstructionError);
    CHECK(std::string(to_string(CounterexampleVariant::f1)) == "f1");
}

TEST_CASE("local frames")
{
    auto c = CounterexampleDomain::build(default_sequences(3, 5));
    for (std::size_t i = 0; i < 5; ++i) {
        auto f = c.local_frame(i);
        CHECK(f.m == static_cast<int>(i) + 1);
        CHECK(f.ball_local == doctest::Approx(1.0 / 3));
        CHECK(f.a_local == doctest::Approx(1.0 / (12 * (i + 1))));
        // X is the closed ball of radius a_m / b_m.
        CHECK(f.x.contains({f.a_local, 0, 0}));
        CHECK_FALSE(f.x.contains({f.a_local * (1 + 1e-9), 0, 0}));
        CHECK(f.u.evaluate({0, 0, 0}) == 1);
        CHECK(f.omega.contains({0.3, 0, 0}));
        // The bridge to ball m+1 leaves through the right edge.
        if (i + 1 < 5) {
            CHECK(f.omega.contains({1.0, 0, 0}));
        } else {
            CHECK_FALSE(f.omega.contains({1.0, 0, 0}));
        }
        CHECK_FALSE(f.omega.contains({0, 0.34, 0}));
    }
    CHECK_THROWS_AS(c.local_frame(5), InvalidInput);
}

TEST_CASE("absolute descriptor")
{
    auto c = CounterexampleDomain::build(default_sequences(3, 4));
    auto j = c.to_json();
    CHECK(j.at("variant") == "gaps");
    CHECK(j.at("omega").at("primitives").size() == 7);
    CHECK(j.at("X").at("primitives").size() == 4);
    CHECK(j.at("sequences").size() == 4);
}

TEST_CASE("not-QNS certification")
{
    auto c = CounterexampleDomain::build(default_sequences(3, 5));
    auto r = certify_not_qns(c, spec());
    CHECK(r.pass);
    CHECK(r.increasing);
    REQUIRE(r.rows.size() == 5);
    for (auto const& row : r.rows) {
        // 4 N0^2 a_m^2 / b_m^2 = 1 / (4 m^2)
        CHECK(row.expected == doctest::Approx(1.0 / (4.0 * row.m * row.m)));
        CHECK(row.exact_mean == doctest::Approx(row.expected).epsilon(1e-12));
        CHECK(row.within);
        CHECK(row.implied_K == doctest::Approx(4.0 * row.m * row.m));
    }

    auto csv = implied_k_csv(c, r);
    CHECK(csv.rfind("m,a_m,b_m,z_m,ratio,implied_K\r\n", 0) == 0);
    std::size_t lines = 0;
    for (std::size_t p = csv.find("\r\n"); p != std::string::npos; p = csv.find("\r\n", p + 2)) {
        ++lines;
    }
    CHECK(lines == 6);
}

TEST_CASE("gap avoidance")
{
    auto c = CounterexampleDomain::build(default_sequences(3, 5));
    CHECK_NOTHROW(require_avoids_gaps(c, default_gap_complement(3)));
    auto s = c.sequences();
    double inside = std::sqrt(s.a[1] * s.b[1]);
    auto bad = RadiusSet::list({inside, 1}, Window{1e-30, 1});
    try {
        require_avoids_gaps(c, bad);
        FAIL("expected rejection");
    } catch (InvalidInput const& e) {
        CHECK(std::string(e.what()).find("m = 2") != std::string::npos);
    }
    // Endpoints of the gaps are allowed.
    CHECK_NOTHROW(require_avoids_gaps(c, RadiusSet::list({s.a[1], s.b[1]}, Window{1e-30, 1})));
    CHECK_THROWS_AS(require_avoids_gaps(c, RadiusSet::full(Window{1e-3, 1})), InvalidInput);
}

TEST_CASE("restricted certification")
{
    auto c = CounterexampleDomain::build(default_sequences(3, 4));
    RestrictedOptions opt;
    opt.rings = 4;
    opt.angles = 8;
    opt.radii = 6;
    opt.cross_checks = 3;
    auto r = certify_restricted_qns(c, default_gap_complement(3), opt, spec());
    CHECK(r.pass);
    CHECK(r.K == doctest::Approx(1 / lens_constant()));
    CHECK(r.ratio_max <= r.K * (1 + 1e-12));
    CHECK(r.ratio_max >= 1);
    CHECK(r.dichotomy_violations == 0);
    CHECK(r.cross_check_pass);
    CHECK(r.probes_admissible > 0);
    CHECK(r.avoided_set.favorable_all_open == Verdict::no);
}

TEST_CASE("f1 counterexample")
{
    auto f = build_f1_counterexample(3, 4, 1, MarkedSet::unit_ball(2));
    CHECK(f.n0_as_written == 1);
    CHECK(f.n0_reversed == 3);
    CHECK_THROWS_AS(build_f1_counterexample(3, 4, 1, MarkedSet::unit_square()), InvalidInput);

    F1ProbeOptions opt;
    opt.rings = 3;
    opt.angles = 6;
    opt.radii = 5;
    auto r = certify_f1_mean(f, opt, spec());
    CHECK(r.pass);
    CHECK(r.K == doctest::Approx(1 / (std::numbers::pi * lens_constant())));
    CHECK(r.ratio_max <= r.K * (1 + 1e-12));
    CHECK(r.probes_admissible > 0);
}
