#include "qns/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qns/errors.hpp"

namespace qns {

void require_dimension(int dim)
{
    if (dim != 2 && dim != 3) {
        throw InvalidInput("dimension must be 2 or 3, got " + std::to_string(dim));
    }
}

double dot(Point const& a, Point const& b, int dim)
{
    double s = 0;
    for (int i = 0; i < dim; ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double norm(Point const& a, int dim)
{
    return dim == 2 ? std::hypot(a[0], a[1]) : std::hypot(a[0], a[1], a[2]);
}

double distance(Point const& a, Point const& b, int dim)
{
    return norm(sub(a, b), dim);
}

Point add(Point const& a, Point const& b)
{
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

Point sub(Point const& a, Point const& b)
{
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

Point scaled(Point const& a, double s)
{
    return {a[0] * s, a[1] * s, a[2] * s};
}

double unit_ball_volume(int dim)
{
    require_dimension(dim);
    return dim == 2 ? std::numbers::pi : 4.0 * std::numbers::pi / 3.0;
}

//---------------------------------------------------------------------------//
Ball::Ball(int dim_, Point center_, double radius_, bool closed_)
    : dim(dim_), center(center_), radius(radius_), closed(closed_)
{
    require_dimension(dim);
    if (!(radius > 0) || !std::isfinite(radius)) {
        throw InvalidInput("ball radius must be positive and finite");
    }
}

double Ball::volume() const
{
    return unit_ball_volume(dim) * std::pow(radius, dim);
}

bool Ball::contains(Point const& p) const
{
    double d = distance(p, center, dim);
    return closed ? d <= radius : d < radius;
}

//---------------------------------------------------------------------------//
Matrix identity_matrix(int dim)
{
    Matrix m{};
    for (int i = 0; i < dim; ++i) {
        m[i * 3 + i] = 1.0;
    }
    return m;
}

double orthogonality_residual(Matrix const& t, int dim)
{
    double worst = 0;
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            double s = 0;
            for (int k = 0; k < dim; ++k) {
                s += t[k * 3 + i] * t[k * 3 + j];
            }
            worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
        }
    }
    return worst;
}

Similarity::Similarity(int dim, double scale, Matrix const& orthogonal, Point const& shift)
    : dim_(dim), scale_(scale), orthogonal_(orthogonal), shift_(shift)
{
    require_dimension(dim_);
    if (!(scale_ > 0) || !std::isfinite(scale_)) {
        throw InvalidInput("similarity scale must be positive and finite");
    }
    if (orthogonality_residual(orthogonal_, dim_) > orthogonality_tolerance) {
        throw InvalidInput("similarity orthogonal part fails T^T T = I within 1e-12");
    }
    // Zero the unused block so padded entries never leak into products.
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (i >= dim_ || j >= dim_) {
                orthogonal_[i * 3 + j] = 0.0;
            }
        }
    }
    if (dim_ == 2) {
        shift_[2] = 0.0;
    }
}

Similarity Similarity::identity(int dim)
{
    return Similarity(dim, 1.0, identity_matrix(dim), Point{});
}

Similarity Similarity::dilation(int dim, double scale, Point const& shift)
{
    return Similarity(dim, scale, identity_matrix(dim), shift);
}

Similarity Similarity::rotation2d(double angle, double scale, Point const& shift)
{
    double c = std::cos(angle);
    double s = std::sin(angle);
    Matrix m{c, -s, 0, s, c, 0, 0, 0, 0};
    return Similarity(2, scale, m, shift);
}

Similarity Similarity::reflection2d(double angle, double scale, Point const& shift)
{
    double c = std::cos(2 * angle);
    double s = std::sin(2 * angle);
    Matrix m{c, s, 0, s, -c, 0, 0, 0, 0};
    return Similarity(2, scale, m, shift);
}

Similarity Similarity::rotation3d(Point const& axis, double angle, double scale,
                                  Point const& shift)
{
    double len = norm(axis, 3);
    if (!(len > 0)) {
        throw InvalidInput("rotation axis must be nonzero");
    }
    Point u = scaled(axis, 1.0 / len);
    double c = std::cos(angle);
    double s = std::sin(angle);
    double t = 1 - c;
    Matrix m{t * u[0] * u[0] + c,        t * u[0] * u[1] - s * u[2], t * u[0] * u[2] + s * u[1],
             t * u[0] * u[1] + s * u[2], t * u[1] * u[1] + c,        t * u[1] * u[2] - s * u[0],
             t * u[0] * u[2] - s * u[1], t * u[1] * u[2] + s * u[0], t * u[2] * u[2] + c};
    return Similarity(3, scale, m, shift);
}

Similarity Similarity::sending(int dim, double scale, Matrix const& orthogonal,
                               Point const& from, Point const& to)
{
    Similarity linear(dim, scale, orthogonal, Point{});
    return Similarity(dim, scale, orthogonal, sub(to, linear.apply_linear(from)));
}

Point Similarity::apply_linear(Point const& v) const
{
    Point r{};
    for (int i = 0; i < dim_; ++i) {
        double s = 0;
        for (int j = 0; j < dim_; ++j) {
            s += orthogonal_[i * 3 + j] * v[j];
        }
        r[i] = scale_ * s;
    }
    return r;
}

Point Similarity::apply(Point const& p) const
{
    return add(apply_linear(p), shift_);
}

Point Similarity::apply_inverse(Point const& p) const
{
    Point v = sub(p, shift_);
    Point r{};
    for (int i = 0; i < dim_; ++i) {
        double s = 0;
        for (int j = 0; j < dim_; ++j) {
            s += orthogonal_[j * 3 + i] * v[j];
        }
        r[i] = s / scale_;
    }
    return r;
}

Similarity Similarity::inverse() const
{
    Matrix tt{};
    for (int i = 0; i < dim_; ++i) {
        for (int j = 0; j < dim_; ++j) {
            tt[i * 3 + j] = orthogonal_[j * 3 + i];
        }
    }
    Similarity linear(dim_, 1.0 / scale_, tt, Point{});
    return Similarity(dim_, 1.0 / scale_, tt, scaled(linear.apply_linear(shift_), -1.0));
}

Similarity Similarity::compose(Similarity const& other) const
{
    if (other.dim_ != dim_) {
        throw InvalidInput("cannot compose similarities of different dimension");
    }
    Matrix m{};
    for (int i = 0; i < dim_; ++i) {
        for (int j = 0; j < dim_; ++j) {
            double s = 0;
            for (int k = 0; k < dim_; ++k) {
                s += orthogonal_[i * 3 + k] * other.orthogonal_[k * 3 + j];
            }
            m[i * 3 + j] = s;
        }
    }
    return Similarity(dim_, scale_ * other.scale_, m, apply(other.shift_));
}

//---------------------------------------------------------------------------//
double lens_area(double r1, double r2, double d)
{
    if (!(r1 > 0) || !(r2 > 0)) {
        throw InvalidInput("lens_area requires positive radii");
    }
    if (!(d >= 0)) {
        throw InvalidInput("lens_area requires a nonnegative center distance");
    }
    if (d >= r1 + r2) {
        return 0.0;
    }
    double small = std::min(r1, r2);
    if (d <= std::abs(r1 - r2)) {
        return std::numbers::pi * small * small;
    }
    auto clamp_unit = [](double x) { return std::clamp(x, -1.0, 1.0); };
    double alpha = std::acos(clamp_unit((d * d + r1 * r1 - r2 * r2) / (2 * d * r1)));
    double beta = std::acos(clamp_unit((d * d + r2 * r2 - r1 * r1) / (2 * d * r2)));
    double kite = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
    double area = r1 * r1 * alpha + r2 * r2 * beta - 0.5 * std::sqrt(std::max(kite, 0.0));
    return std::clamp(area, 0.0, std::numbers::pi * small * small);
}

double lens_constant()
{
    return 2.0 / 3.0 - std::sqrt(3.0) / (2.0 * std::numbers::pi);
}

namespace {

using P2 = std::array<double, 2>;

double cross2(P2 a, P2 b) { return a[0] * b[1] - a[1] * b[0]; }
double dot2(P2 a, P2 b) { return a[0] * b[0] + a[1] * b[1]; }

double sector(double r, P2 u, P2 v)
{
    return 0.5 * r * r * std::atan2(cross2(u, v), dot2(u, v));
}

}  // namespace

double disk_triangle_area(double r, P2 a, P2 b)
{
    P2 d{b[0] - a[0], b[1] - a[1]};
    double dd = dot2(d, d);
    if (dd == 0.0) {
        return 0.0;
    }
    double r2 = r * r;
    double aa = dot2(a, a);
    double bb = dot2(b, b);
    if (aa <= r2 && bb <= r2) {
        return 0.5 * cross2(a, b);
    }
    double ad = dot2(a, d);
    double disc = ad * ad - dd * (aa - r2);
    if (disc <= 0.0) {
        return sector(r, a, b);
    }
    double s = std::sqrt(disc);
    double t1 = (-ad - s) / dd;
    double t2 = (-ad + s) / dd;
    if (t2 <= 0.0 || t1 >= 1.0) {
        return sector(r, a, b);
    }
    double u1 = std::max(t1, 0.0);
    double u2 = std::min(t2, 1.0);
    P2 p1{a[0] + u1 * d[0], a[1] + u1 * d[1]};
    P2 p2{a[0] + u2 * d[0], a[1] + u2 * d[1]};
    double area = 0.5 * cross2(p1, p2);
    if (t1 > 0.0) {
        area += sector(r, a, p1);
    }
    if (t2 < 1.0) {
        area += sector(r, p2, b);
    }
    return area;
}

double disk_polygon_area(P2 center, double r, std::span<P2 const> polygon)
{
    double total = 0;
    std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
        P2 a{polygon[i][0] - center[0], polygon[i][1] - center[1]};
        P2 const& q = polygon[(i + 1) % n];
        P2 b{q[0] - center[0], q[1] - center[1]};
        total += disk_triangle_area(r, a, b);
    }
    return std::abs(total);
}

}  // namespace qns
