#include <cmath>

#include "doctest.h"
#include "qns/errors.hpp"
#include "qns/fields.hpp"
#include "qns/region_io.hpp"

using namespace qns;

TEST_CASE("constant and indicator fields")
{
    Region omega = Region::ball(2, {0, 0, 0}, 2);
    Field c = Field::constant(omega, 3.5);
    CHECK(c.evaluate({1, 1, 0}) == 3.5);
    CHECK(c.constant_value() == 3.5);
    CHECK_THROWS_AS(c.evaluate({3, 0, 0}), InvalidInput);
    CHECK_THROWS_AS(Field::constant(omega, -1), InvalidInput);

    Field chi = Field::indicator(omega, Region::ball(2, {0, 0, 0}, 1, true));
    CHECK(chi.evaluate({1, 0, 0}) == 1);
    CHECK(chi.evaluate({1.01, 0, 0}) == 0);
    CHECK(chi.contains_indicator());
    CHECK_FALSE(chi.constant_value());
}

TEST_CASE("harmonic field")
{
    Region omega = Region::ball(2, {2, 1, 0}, 0.5);
    // 1 + (x^2 - y^2) / 10, equal to 1.3 at (2, 1).
    Field h = Field::harmonic(omega, 1, 10);
    CHECK(h.evaluate({2, 1, 0}) == doctest::Approx(1.3));
    // Negative somewhere on the bounding box of B(0, 2).
    CHECK_THROWS_AS(Field::harmonic(Region::ball(2, {0, 0, 0}, 2), 0.1, 1), InvalidInput);
    CHECK_THROWS_AS(Field::harmonic(Region::ball(3, {0, 0, 0}, 1), 1, 1), InvalidInput);
}

TEST_CASE("radial bump, sum and composition")
{
    Region omega = Region::box(2, {-2, -2, 0}, {2, 2, 0});
    Field bump = Field::radial_bump(omega, {0, 0, 0}, 2, 1);
    CHECK(bump.evaluate({0, 0, 0}) == 2);
    CHECK(bump.evaluate({0.5, 0, 0}) == doctest::Approx(1.5));
    CHECK(bump.evaluate({1.5, 0, 0}) == 0);

    Field s = Field::sum(omega, {{2.0, bump}, {1.0, Field::constant(omega, 1)}});
    CHECK(s.evaluate({0.5, 0, 0}) == doctest::Approx(4));
    CHECK_THROWS_AS(Field::sum(omega, {{-1.0, bump}}), InvalidInput);

    // (u o h)(x) = u(2x + (1, 0)); the domain is the preimage of Omega.
    Similarity h = Similarity::dilation(2, 2, {1, 0, 0});
    Field comp = Field::composed(bump, h);
    CHECK(comp.evaluate({-0.5, 0, 0}) == 2);
    CHECK(comp.domain().contains({-1.4, 0, 0}));
    CHECK_FALSE(comp.domain().contains({0.6, 0, 0}));
}

TEST_CASE("field JSON round trip")
{
    Region omega = Region::ball(2, {0, 0, 0}, 2);
    Field chi = Field::indicator(omega, Region::ball(2, {0, 0, 0}, 1));
    auto j = io::field_to_json(chi);
    Field back = io::field_from_json(j, omega);
    CHECK(back.kind() == FieldKind::indicator);
    CHECK(back.indicator_set() == chi.indicator_set());

    Field sum = Field::sum(omega, {{0.5, chi}, {2.0, Field::constant(omega, 1)}});
    Field sum_back = io::field_from_json(io::field_to_json(sum), omega);
    CHECK(sum_back.evaluate({0.5, 0, 0}) == doctest::Approx(2.5));
    CHECK_THROWS_AS(io::field_from_json(nlohmann::json::parse(R"({"kind": "wavelet"})"), omega), InvalidInput);
}
