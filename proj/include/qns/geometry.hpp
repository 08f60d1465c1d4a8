//---------------------------------------------------------------------------//
//! \file qns/geometry.hpp
//! \brief Euclidean primitives in two and three dimensions.
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <span>

namespace qns {

//! Coordinates in R^n for n in {2, 3}; unused trailing coordinates are zero.
using Point = std::array<double, 3>;

//! Row-major n x n matrix stored in a fixed 3x3 buffer.
using Matrix = std::array<double, 9>;

void require_dimension(int dim);

double dot(Point const& a, Point const& b, int dim);
double norm(Point const& a, int dim);
double distance(Point const& a, Point const& b, int dim);
Point add(Point const& a, Point const& b);
Point sub(Point const& a, Point const& b);
Point scaled(Point const& a, double s);

//! Volume of the unit ball: pi in the plane, 4 pi / 3 in space.
double unit_ball_volume(int dim);

//---------------------------------------------------------------------------//
/*!
 * Euclidean ball B(center, radius), open unless \c closed is set.
 */
struct Ball {
    int dim = 2;
    Point center{};
    double radius = 1.0;
    bool closed = false;

    Ball() = default;
    Ball(int dim, Point center, double radius, bool closed = false);

    double volume() const;
    bool contains(Point const& p) const;
};

//---------------------------------------------------------------------------//
/*!
 * Similarity h(x) = k T x + a with k > 0 and T orthogonal.
 *
 * Construction validates the orthogonality residual max|T^T T - I| against
 * 1e-12, so every instance satisfies |h(x) - h(y)| = k |x - y|.
 */
class Similarity {
  public:
    static constexpr double orthogonality_tolerance = 1e-12;

    Similarity(int dim, double scale, Matrix const& orthogonal, Point const& shift);

    static Similarity identity(int dim);
    //! x -> k x + a
    static Similarity dilation(int dim, double scale, Point const& shift);
    //! Planar rotation by \p angle followed by scaling and shift.
    static Similarity rotation2d(double angle, double scale = 1.0, Point const& shift = {});
    //! Planar reflection across the line through the origin at \p angle.
    static Similarity reflection2d(double angle, double scale = 1.0, Point const& shift = {});
    //! Rotation about a unit axis in space (Rodrigues form).
    static Similarity rotation3d(Point const& axis, double angle, double scale = 1.0,
                                 Point const& shift = {});
    //! The similarity with scale k and orthogonal part T sending \p from to \p to.
    static Similarity sending(int dim, double scale, Matrix const& orthogonal,
                              Point const& from, Point const& to);

    int dim() const { return dim_; }
    double scale() const { return scale_; }
    Matrix const& orthogonal() const { return orthogonal_; }
    Point const& shift() const { return shift_; }

    Point apply(Point const& p) const;
    //! Apply only the linear part k T.
    Point apply_linear(Point const& v) const;
    Point apply_inverse(Point const& p) const;
    Similarity inverse() const;
    //! (*this) o other
    Similarity compose(Similarity const& other) const;

  private:
    int dim_;
    double scale_;
    Matrix orthogonal_;
    Point shift_;
};

//! Orthogonal identity matrix of size dim.
Matrix identity_matrix(int dim);
//! max |T^T T - I| over entries.
double orthogonality_residual(Matrix const& t, int dim);

//! Area of the intersection of two planar disks with radii r1, r2 at center
//! distance d.
double lens_area(double r1, double r2, double d);

//! inf over r >= 1 of m2(B(0,r) n B(r,1)) / pi = 2/3 - sqrt(3)/(2 pi).
double lens_constant();

//! Signed area of the intersection of the disk B(0, r) with the triangle
//! (0, a, b); positive when (a, b) is counter-clockwise.
double disk_triangle_area(double r, std::array<double, 2> a, std::array<double, 2> b);

//! Area of disk B(center, r) intersected with a simple polygon.
double disk_polygon_area(std::array<double, 2> center, double r,
                         std::span<std::array<double, 2> const> polygon);

}  // namespace qns
