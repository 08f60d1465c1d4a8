#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "qns/errors.hpp"
#include "qns/quadrature.hpp"

using namespace qns;

namespace {

QuadratureSpec spec_with(QuadMethod m, std::uint64_t seed = 1, int workers = 1)
{
    QuadratureSpec s;
    s.method = m;
    s.target_rel_err = 1e-3;
    s.max_samples = 2'000'000;
    s.seed = seed;
    s.workers = workers;
    return s;
}

}  // namespace

TEST_CASE("spec validation")
{
    QuadratureSpec s;
    s.target_rel_err = 0;
    CHECK_THROWS_AS(s.validate(), InvalidInput);
    s.target_rel_err = 0.2;
    CHECK_THROWS_AS(s.validate(), InvalidInput);
    s = {};
    s.max_samples = 10;
    CHECK_THROWS_AS(s.validate(), InvalidInput);
    CHECK(quad_method_from_string("stratified") == QuadMethod::stratified);
    CHECK_THROWS_AS(quad_method_from_string("simpson"), InvalidInput);
}

TEST_CASE("constant fields are exact")
{
    Field c = Field::constant(Region::ball(2, {0, 0, 0}, 3), 2.25);
    for (auto m : {QuadMethod::grid, QuadMethod::mc, QuadMethod::stratified}) {
        auto e = mean_over_ball(c, Ball(2, {0.5, 0.5, 0}, 1, true), spec_with(m));
        CHECK(e.mean == 2.25);
        CHECK(e.stderr_ == 0);
        CHECK(e.exact);
    }
}

TEST_CASE("harmonic mean value property")
{
    // 1 + (x^2 - y^2) / 10 at (2, 1) is 1.3.
    Region omega = Region::ball(2, {2, 1, 0}, 0.6);
    Field h = Field::harmonic(omega, 1, 10);
    Ball b(2, {2, 1, 0}, 0.5, true);
    for (auto m : {QuadMethod::grid, QuadMethod::mc, QuadMethod::stratified}) {
        auto e = mean_over_ball(h, b, spec_with(m));
        CHECK(std::abs(e.mean - 1.3) <= std::max(3 * e.stderr_, 1e-6));
    }
}

TEST_CASE("indicator means")
{
    Region omega = Region::ball(2, {0, 0, 0}, 3);
    Field half = Field::indicator(omega, Region::box(2, {0, -5, 0}, {5, 5, 0}));
    auto e = mean_over_ball(half, Ball(2, {0, 0, 0}, 1, true), spec_with(QuadMethod::stratified));
    CHECK(std::abs(e.mean - 0.5) <= 3 * e.stderr_ + 1e-12);
    CHECK_THROWS_AS(mean_over_ball(half, Ball(2, {0, 0, 0}, 1, true), spec_with(QuadMethod::grid)), InvalidInput);

    // m(B(0,1) n B((1,0),1)) / pi over the unit ball at (1, 0).
    Field chi = Field::indicator(omega, Region::ball(2, {0, 0, 0}, 1));
    auto lens = mean_over_ball(chi, Ball(2, {1, 0, 0}, 1, true), spec_with(QuadMethod::mc));
    CHECK(std::abs(lens.mean - lens_constant()) <= 4 * lens.stderr_);
}

TEST_CASE("three-dimensional means")
{
    Region omega = Region::ball(3, {0, 0, 0}, 2);
    Field bump = Field::radial_bump(omega, {0, 0, 0}, 1, 1);
    // Mean of 1 - |x|^2 over the unit ball in R^3 is 1 - 3/5.
    auto e = mean_over_ball(bump, Ball(3, {0, 0, 0}, 1, true), spec_with(QuadMethod::stratified));
    CHECK(std::abs(e.mean - 0.4) <= 4 * e.stderr_ + 1e-9);
    auto g = mean_over_ball(bump, Ball(3, {0, 0, 0}, 1, true), spec_with(QuadMethod::grid));
    CHECK(g.mean == doctest::Approx(0.4).epsilon(1e-3));
}

TEST_CASE("containment is enforced")
{
    Field c = Field::constant(Region::ball(2, {0, 0, 0}, 1), 1);
    try {
        mean_over_ball(c, Ball(2, {0.5, 0, 0}, 0.6, true), spec_with(QuadMethod::mc));
        FAIL("expected rejection");
    } catch (InvalidInput const& e) {
        CHECK(std::string(e.what()).find("direction") != std::string::npos);
    }
}

TEST_CASE("results do not depend on the worker count")
{
    Region omega = Region::ball(2, {0, 0, 0}, 3);
    Field chi = Field::indicator(omega, Region::ball(2, {0.3, 0, 0}, 1));
    Ball b(2, {1, 0.2, 0}, 1.2, true);
    for (auto m : {QuadMethod::mc, QuadMethod::stratified}) {
        auto one = mean_over_ball(chi, b, spec_with(m, 42, 1));
        auto four = mean_over_ball(chi, b, spec_with(m, 42, 4));
        CHECK(one.mean == four.mean);
        CHECK(one.stderr_ == four.stderr_);
        CHECK(one.samples == four.samples);
        auto other = mean_over_ball(chi, b, spec_with(m, 43, 1));
        CHECK(other.mean != one.mean);
    }
}

TEST_CASE("means over similarity images")
{
    Region omega = Region::ball(2, {2, 1, 0}, 0.9);
    Field h = Field::harmonic(omega, 1, 10);
    auto disk = MarkedSet::unit_ball(2);
    Similarity s = Similarity::sending(2, 0.5, identity_matrix(2), disk.marked(), {2, 1, 0});
    auto e = mean_over_image(h, disk, s, spec_with(QuadMethod::mc));
    CHECK(std::abs(e.mean - 1.3) <= 4 * e.stderr_ + 1e-9);

    Similarity far = Similarity::sending(2, 2, identity_matrix(2), disk.marked(), {2, 1, 0});
    CHECK_THROWS_AS(mean_over_image(h, disk, far, spec_with(QuadMethod::mc)), InvalidInput);
}

TEST_CASE("uniform ball points stay in the ball")
{
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 10'000; ++i) {
        Point p2 = unit_ball_point(2, u(g), u(g), u(g));
        Point p3 = unit_ball_point(3, u(g), u(g), u(g));
        CHECK(norm(p2, 2) <= 1 + 1e-15);
        CHECK(norm(p3, 3) <= 1 + 1e-15);
    }
}
