//---------------------------------------------------------------------------//
//! \file qns/regions.hpp
//! \brief Finite unions of balls, axis-aligned boxes, and planar polygons.
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "qns/geometry.hpp"

namespace qns {

//! Axis-aligned box (lo, hi), open unless \c closed is set.
struct Box {
    int dim = 2;
    Point lo{};
    Point hi{};
    bool closed = false;

    Box() = default;
    Box(int dim, Point lo, Point hi, bool closed = false);

    double volume() const;
    bool contains(Point const& p) const;
};

//! Simple planar polygon given by its vertices in order (either orientation).
struct Polygon {
    std::vector<std::array<double, 2>> vertices;
    bool closed = false;

    Polygon() = default;
    explicit Polygon(std::vector<std::array<double, 2>> vertices, bool closed = false);

    double area() const;
    double perimeter() const;
    bool contains(Point const& p) const;
    //! Distance from p to the polygon boundary.
    double boundary_distance(Point const& p) const;
    bool is_convex() const;
};

using Primitive = std::variant<Ball, Box, Polygon>;

int primitive_dim(Primitive const& p);
double primitive_measure(Primitive const& p);
//! Membership ignoring the closed flag (open interior).
bool interior_contains(Primitive const& prim, Point const& p);
bool primitive_contains(Primitive const& prim, Point const& p);

//! Lebesgue measure with provenance: exact closed form or a sampled estimate.
struct MeasureResult {
    double value = 0;
    double stderr_ = 0;
    bool exact = true;
    std::uint64_t samples = 0;
};

//! Outcome of testing closure(B) against a region.
struct BallContainment {
    bool inside = false;
    //! Unit direction from the ball center to the first exterior sample;
    //! zero when the center itself lies outside.
    Point violating_direction{};
};

//---------------------------------------------------------------------------//
/*!
 * Finite union of primitives sharing a dimension.
 *
 * Primitives may overlap. Measures are exact when no three primitives
 * pairwise overlap and every overlapping pair has a closed-form intersection;
 * otherwise they are sampled with a reported standard error.
 */
class Region {
  public:
    static constexpr std::uint64_t default_measure_samples = 2'000'000;
    static constexpr std::uint64_t default_measure_seed = 0x5eed'0f'a11ULL;

    Region(int dim, std::vector<Primitive> primitives);

    static Region ball(int dim, Point center, double radius, bool closed = false);
    static Region box(int dim, Point lo, Point hi, bool closed = false);
    static Region polygon(std::vector<std::array<double, 2>> vertices, bool closed = false);

    int dim() const { return dim_; }
    std::vector<Primitive> const& primitives() const { return primitives_; }
    Box const& bounds() const { return bounds_; }

    bool contains(Point const& p) const;
    bool interior_contains(Point const& p) const;

    MeasureResult measure(std::uint64_t mc_samples = default_measure_samples,
                          std::uint64_t seed = default_measure_seed) const;
    MeasureResult measure_monte_carlo(std::uint64_t samples, std::uint64_t seed) const;

    //! Whether the closed ball lies in the region. Exact when the ball fits
    //! inside a single primitive; otherwise decided by dense boundary and
    //! interior sampling of the ball.
    BallContainment contains_closed_ball(Ball const& b) const;

    //! Exact m_n(region n B) when available (planar primitives without
    //! overlaps, or any single primitive whose intersection has a closed form).
    std::optional<double> exact_ball_intersection(Ball const& b) const;

    //! Image under a similarity. Boxes stay boxes under signed permutations;
    //! other planar boxes become polygons.
    Region transformed(Similarity const& h) const;

    //! Points on the boundary of the union, at least \p count in total.
    std::vector<Point> boundary_samples(int count) const;

    //! Sup over points of the region of |p - y|; exact for all primitives.
    double farthest_distance(Point const& p) const;

    bool operator==(Region const& other) const;

  private:
    int dim_;
    std::vector<Primitive> primitives_;
    Box bounds_;
};

//---------------------------------------------------------------------------//
/*!
 * Bounded set D with a marked interior point p_D, the outer radius
 * R_D = sup |p_D - y| over D and the inner radius r_D = dist(p_D, complement
 * of Int D).
 */
class MarkedSet {
  public:
    static constexpr int default_boundary_samples = 20'000;

    MarkedSet(Region region, Point marked, int boundary_samples = default_boundary_samples);

    static MarkedSet unit_ball(int dim);
    static MarkedSet unit_square();
    //! B(0,1) u B((1,0),1) marked at (1/2, 0).
    static MarkedSet two_ball_union();

    Region const& region() const { return region_; }
    Point const& marked() const { return marked_; }
    int dim() const { return region_.dim(); }
    double outer_radius() const { return outer_radius_; }
    double inner_radius() const { return inner_radius_; }
    //! Whether r_D came from a closed form rather than boundary sampling.
    bool inner_radius_exact() const { return inner_exact_; }
    MeasureResult const& measure() const { return measure_; }

  private:
    Region region_;
    Point marked_;
    double outer_radius_ = 0;
    double inner_radius_ = 0;
    bool inner_exact_ = true;
    MeasureResult measure_;
};

//! m_n(h(D)) = k(h)^n m_n(D), never re-integrated.
double similarity_image_measure(MarkedSet const& d, Similarity const& h);

//! Radial mass profile r -> m_n(D n B(p_D, r)) of a set of finite measure.
struct RadialProfile {
    std::function<double(double)> mass;
    double total = 0;
};

//! Minimal r with t * mass(r) >= total, to relative tolerance 1e-9; t > 1.
double truncation_radius(RadialProfile const& profile, double t);

}  // namespace qns
