#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "qns/errors.hpp"
#include "qns/radius_sets.hpp"

using namespace qns;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Largest log-gap of a sorted finite list, computed directly: an oracle for the
// window estimate when the list is all of A.
double list_log_gap(std::vector<double> xs)
{
    std::sort(xs.begin(), xs.end());
    double g = 0;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        g = std::max(g, std::log(xs[i] / xs[i - 1]));
    }
    return g;
}

}  // namespace

TEST_CASE("window validation")
{
    CHECK_THROWS_AS((Window{0, 1}).validate(), InvalidInput);
    CHECK_THROWS_AS((Window{2, 1}).validate(), InvalidInput);
    CHECK_THROWS_AS((Window{1, inf}).validate(), InvalidInput);
    CHECK_NOTHROW((Window{1e-3, 1e3}).validate());
}

TEST_CASE("geometric family")
{
    auto a = RadiusSet::geometric(1, 2, Window{1e-3, 1e3});
    CHECK(a.contains(0.25));
    CHECK(a.contains(1024));
    CHECK_FALSE(a.contains(3));
    CHECK(gap_constant(a) == doctest::Approx(2));
    CHECK(log_eps_net(a) == doctest::Approx(std::numbers::ln2 / 2));
    auto c = classify(a);
    CHECK(c.asymptotic);
    CHECK(c.favorable_all_open == Verdict::yes);
    CHECK(c.favorable_bounded == Verdict::yes);
    CHECK(c.p0 == doctest::Approx(0.5));
    // Window values agree with the closed form away from the window edges.
    CHECK(c.window.gap_constant == doctest::Approx(2));
    CHECK_THROWS_AS(RadiusSet::geometric(1, 1, Window{}), InvalidInput);
}

TEST_CASE("super-geometric family on a window")
{
    // {e^{-m^2}} on [e^{-16}, 1]: elements e^-1, e^-4, e^-9, e^-16; the widest
    // gap is e^-16 to e^-9.
    auto a = RadiusSet::super_geometric(2, Window{std::exp(-16.0), 1});
    auto w = window_estimate(a);
    CHECK(w.gap_constant == doctest::Approx(std::exp(7.0)).epsilon(1e-9));
    CHECK(w.eps_star == doctest::Approx(3.5).epsilon(1e-9));
    auto c = classify(a);
    CHECK(c.favorable_all_open == Verdict::no);
    CHECK(c.favorable_bounded == Verdict::no);
    CHECK(std::isinf(gap_constant(a)));
}

TEST_CASE("blocks family")
{
    // [2^-k, 2^-k] blocks: p0 = 1 - alpha beta = 1/2, i0 = 1.
    auto a = RadiusSet::blocks(1, 0.5, Window{1e-3, 1e3});
    auto p = porosity(a);
    REQUIRE(p.p0);
    CHECK(*p.p0 == doctest::Approx(0.5));
    CHECK(*p.i0 == doctest::Approx(1));
    CHECK(*p.i_inf == doctest::Approx(1));

    auto wide = RadiusSet::blocks(3, 0.25, Window{1e-3, 1e3});
    CHECK(wide.contains(0.5));
    CHECK(wide.contains(0.75));
    CHECK_FALSE(wide.contains(0.8));
    CHECK(gap_constant(wide) == doctest::Approx(4.0 / 3));

    // alpha beta >= 1: the blocks cover (0, inf).
    auto cover = RadiusSet::blocks(4, 0.5, Window{1e-3, 1e3});
    CHECK(gap_constant(cover) == doctest::Approx(1));
    CHECK(classify(cover).p0 == doctest::Approx(0));
    CHECK_THROWS_AS(RadiusSet::blocks(0.5, 0.5, Window{}), InvalidInput);
}

TEST_CASE("full and finite sets")
{
    auto full = classify(RadiusSet::full(Window{}));
    CHECK(full.gap_constant == 1);
    CHECK(full.favorable_all_open == Verdict::yes);

    // Finite lists are all of A: no elements below the minimum.
    auto l = RadiusSet::list({0.1, 0.2, 0.8}, Window{1e-2, 1});
    auto c = classify(l);
    CHECK(c.favorable_all_open == Verdict::no);
    CHECK(c.favorable_bounded == Verdict::no);
    CHECK(l.contains(0.2));
    CHECK_FALSE(l.contains(0.3));

    auto iv = RadiusSet::intervals({{0, 1}}, Window{1e-3, 1e3});
    CHECK(iv.contains(1e-300));
    CHECK(iv.contains(1));
    CHECK_FALSE(iv.contains(1.5));
}

TEST_CASE("window estimate of a dense list matches a direct scan")
{
    std::mt19937_64 g(31);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> xs;
        for (int i = 0; i < 12; ++i) {
            xs.push_back(std::exp(u(g)));
        }
        double lo = *std::min_element(xs.begin(), xs.end());
        double hi = *std::max_element(xs.begin(), xs.end());
        auto a = RadiusSet::list(xs, Window{lo, hi});
        CHECK(window_estimate(a).max_log_gap == doctest::Approx(list_log_gap(xs)).epsilon(1e-12));
    }
}

TEST_CASE("window porosity matches a brute-force scan")
{
    // The relative gap length in [0, h] peaks at gap right ends, so scanning
    // those ends over all gaps is an exact oracle.
    std::mt19937_64 g(23);
    std::uniform_real_distribution<double> u(-6, 6);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<double> ls;
        for (int i = 0; i < 15; ++i) {
            ls.push_back(u(g));
        }
        std::sort(ls.begin(), ls.end());
        std::vector<double> xs;
        for (double l : ls) {
            xs.push_back(std::exp(l));
        }
        auto a = RadiusSet::list(xs, Window{xs.front(), xs.back()});
        double brute = 0;
        for (std::size_t j = 1; j < ls.size(); ++j) {
            for (std::size_t i = 1; i <= j; ++i) {
                brute = std::max(brute, (xs[i] - xs[i - 1]) / xs[j]);
            }
        }
        CHECK(window_estimate(a).p0 == doctest::Approx(brute).epsilon(1e-12));
    }
}

TEST_CASE("porosity index identity i0 = p0 / (1 - p0)")
{
    std::mt19937_64 g(12);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 100; ++trial) {
        double beta = 0.05 + 0.9 * u(g);
        double alpha = 1 + (1 / beta - 1) * u(g) * 0.99;
        auto a = RadiusSet::blocks(alpha, beta, Window{1e-4, 1e4});
        auto c = classify(a);
        CHECK(c.i0 == doctest::Approx(c.p0 / (1 - c.p0)).epsilon(1e-9));
        CHECK(c.p0 == doctest::Approx(1 - alpha * beta).epsilon(1e-9));
    }
}

TEST_CASE("rescaling")
{
    std::mt19937_64 g(77);
    std::uniform_real_distribution<double> u(0, 1);
    auto base = RadiusSet::geometric(1, 3, Window{1e-3, 1e3});
    double c0 = gap_constant(base);
    for (int trial = 0; trial < 50; ++trial) {
        double alpha = std::exp(4 * u(g) - 2);
        double beta = 0.2 + 2 * u(g);
        auto r = base.rescaled(alpha, beta);
        // ln C scales by beta; alpha has no effect.
        CHECK(std::log(gap_constant(r)) == doctest::Approx(beta * std::log(c0)).epsilon(1e-12));
        CHECK(classify(r).favorable_all_open == classify(base).favorable_all_open);
        double x = std::pow(3.0, static_cast<int>(10 * u(g)) - 5);
        CHECK(r.contains(alpha * std::pow(x, beta)));
        CHECK(gap_constant(base.rescaled(alpha, 1)) == doctest::Approx(c0));
    }
    CHECK_THROWS_AS(base.rescaled(0, 1), InvalidInput);
}

TEST_CASE("adding elements never increases the gap constant")
{
    std::mt19937_64 g(4);
    std::uniform_real_distribution<double> u(-3, 3);
    Window w{std::exp(-3.0), std::exp(3.0)};
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> xs{w.lo};
        for (int i = 0; i < 6; ++i) {
            xs.push_back(std::exp(u(g)));
        }
        auto a = RadiusSet::list(xs, w);
        xs.push_back(std::exp(u(g)));
        auto b = RadiusSet::list(xs, w);
        CHECK(window_estimate(b).gap_constant <= window_estimate(a).gap_constant * (1 + 1e-12));
    }
}

TEST_CASE("gap sequences")
{
    GapLaw law{12, 1, 2};
    auto a = RadiusSet::gap_sequence(law, Window{1e-40, 1});
    double a3 = std::exp(law.ln_a(3));
    CHECK(a.contains(a3));
    CHECK_FALSE(a.contains(2 * a3));
    CHECK(a.contains(3 * a3));
    auto c = classify(a);
    CHECK(c.favorable_all_open == Verdict::no);
    CHECK(std::isinf(c.i0));
    CHECK(c.i_inf == 0);
}

TEST_CASE("JSON round trip")
{
    using nlohmann::json;
    std::vector<RadiusSet> sets{
        RadiusSet::geometric(1.5, 2, Window{1e-2, 1e2}),
        RadiusSet::blocks(2, 0.25, Window{1e-3, 10}),
        RadiusSet::super_geometric(2, Window{1e-10, 1}),
        RadiusSet::list({0.5, 1, 4}, Window{0.1, 10}),
        RadiusSet::intervals({{0.1, 0.2}, {1, 3}}, Window{0.01, 10}),
        RadiusSet::gap_sequence(GapLaw{12, 1, 2}, Window{1e-20, 1}),
        RadiusSet::geometric(1, 2, Window{1e-2, 1e2}).rescaled(3, 0.5),
    };
    for (auto const& a : sets) {
        auto back = radius_set_from_json(a.descriptor());
        CHECK(back.descriptor() == a.descriptor());
        CHECK(classification_to_json(classify(back)) == classification_to_json(classify(a)));
    }
    CHECK_THROWS_AS(radius_set_from_json(json::parse(R"({"form": "family", "family": {"name": "cantor"}})")),
                    InvalidInput);
}
