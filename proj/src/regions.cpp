#include "qns/regions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qns/errors.hpp"
#include "qns/random.hpp"

namespace qns {
namespace {

using P2 = std::array<double, 2>;

double cross2(P2 a, P2 b, P2 c)
{
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

double signed_area(std::vector<P2> const& v)
{
    double s = 0;
    for (std::size_t i = 0, n = v.size(); i < n; ++i) {
        P2 const& a = v[i];
        P2 const& b = v[(i + 1) % n];
        s += a[0] * b[1] - a[1] * b[0];
    }
    return 0.5 * s;
}

double segment_distance(P2 p, P2 a, P2 b)
{
    double dx = b[0] - a[0];
    double dy = b[1] - a[1];
    double len2 = dx * dx + dy * dy;
    double t = len2 > 0 ? ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p[0] - (a[0] + t * dx), p[1] - (a[1] + t * dy));
}

std::vector<P2> box_corners(Box const& b)
{
    return {{b.lo[0], b.lo[1]}, {b.hi[0], b.lo[1]}, {b.hi[0], b.hi[1]}, {b.lo[0], b.hi[1]}};
}

// Sutherland-Hodgman; `clipper` must be convex.
std::vector<P2> clip_convex(std::vector<P2> subject, std::vector<P2> clipper)
{
    if (signed_area(clipper) < 0) {
        std::reverse(clipper.begin(), clipper.end());
    }
    for (std::size_t e = 0, n = clipper.size(); e < n && !subject.empty(); ++e) {
        P2 a = clipper[e];
        P2 b = clipper[(e + 1) % n];
        std::vector<P2> out;
        for (std::size_t i = 0, m = subject.size(); i < m; ++i) {
            P2 cur = subject[i];
            P2 prev = subject[(i + m - 1) % m];
            double dc = cross2(a, b, cur);
            double dp = cross2(a, b, prev);
            if (dc >= 0) {
                if (dp < 0) {
                    double t = dp / (dp - dc);
                    out.push_back({prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])});
                }
                out.push_back(cur);
            } else if (dp >= 0) {
                double t = dp / (dp - dc);
                out.push_back({prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])});
            }
        }
        subject = std::move(out);
    }
    return subject;
}

Box primitive_bounds(Primitive const& prim)
{
    return std::visit(
        [](auto const& p) -> Box {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Ball>) {
                Point lo{}, hi{};
                for (int i = 0; i < p.dim; ++i) {
                    lo[i] = p.center[i] - p.radius;
                    hi[i] = p.center[i] + p.radius;
                }
                return Box(p.dim, lo, hi, true);
            } else if constexpr (std::is_same_v<T, Box>) {
                return Box(p.dim, p.lo, p.hi, true);
            } else {
                Point lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 0};
                Point hi{-lo[0], -lo[1], 0};
                for (auto const& v : p.vertices) {
                    lo[0] = std::min(lo[0], v[0]);
                    lo[1] = std::min(lo[1], v[1]);
                    hi[0] = std::max(hi[0], v[0]);
                    hi[1] = std::max(hi[1], v[1]);
                }
                return Box(2, lo, hi, true);
            }
        },
        prim);
}

bool boxes_overlap(Box const& a, Box const& b)
{
    for (int i = 0; i < a.dim; ++i) {
        if (a.hi[i] <= b.lo[i] || b.hi[i] <= a.lo[i]) {
            return false;
        }
    }
    return true;
}

double point_box_distance(Point const& c, Box const& b)
{
    double s = 0;
    for (int i = 0; i < b.dim; ++i) {
        double d = std::max({b.lo[i] - c[i], 0.0, c[i] - b.hi[i]});
        s += d * d;
    }
    return std::sqrt(s);
}

bool closed_ball_inside(Primitive const& prim, Ball const& b)
{
    return std::visit(
        [&](auto const& p) -> bool {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Ball>) {
                double d = distance(p.center, b.center, b.dim);
                return p.closed ? d + b.radius <= p.radius : d + b.radius < p.radius;
            } else if constexpr (std::is_same_v<T, Box>) {
                for (int i = 0; i < b.dim; ++i) {
                    double lo = b.center[i] - b.radius;
                    double hi = b.center[i] + b.radius;
                    if (p.closed ? (lo < p.lo[i] || hi > p.hi[i]) : (lo <= p.lo[i] || hi >= p.hi[i])) {
                        return false;
                    }
                }
                return true;
            } else {
                if (!p.contains(b.center)) {
                    return false;
                }
                double d = p.boundary_distance(b.center);
                return p.closed ? d >= b.radius : d > b.radius;
            }
        },
        prim);
}

// Exact m_n(a n b) when a closed form is available.
std::optional<double> pair_intersection(Primitive const& a, Primitive const& b)
{
    if (!boxes_overlap(primitive_bounds(a), primitive_bounds(b))) {
        return 0.0;
    }
    if (a.index() > b.index()) {
        return pair_intersection(b, a);
    }
    if (auto const* ba = std::get_if<Ball>(&a)) {
        if (auto const* bb = std::get_if<Ball>(&b)) {
            double d = distance(ba->center, bb->center, ba->dim);
            if (ba->dim == 2) {
                return lens_area(ba->radius, bb->radius, d);
            }
            if (d >= ba->radius + bb->radius) {
                return 0.0;
            }
            if (d <= std::abs(ba->radius - bb->radius)) {
                return std::min(ba->volume(), bb->volume());
            }
            return std::nullopt;
        }
        if (auto const* bx = std::get_if<Box>(&b)) {
            if (ba->dim == 2) {
                auto corners = box_corners(*bx);
                return disk_polygon_area({ba->center[0], ba->center[1]}, ba->radius, corners);
            }
            if (point_box_distance(ba->center, *bx) >= ba->radius) {
                return 0.0;
            }
            if (closed_ball_inside(Box(bx->dim, bx->lo, bx->hi, true), *ba)) {
                return ba->volume();
            }
            bool corners_inside = true;
            for (int mask = 0; mask < 8 && corners_inside; ++mask) {
                Point c{mask & 1 ? bx->hi[0] : bx->lo[0], mask & 2 ? bx->hi[1] : bx->lo[1],
                        mask & 4 ? bx->hi[2] : bx->lo[2]};
                corners_inside = distance(c, ba->center, 3) <= ba->radius;
            }
            if (corners_inside) {
                return bx->volume();
            }
            return std::nullopt;
        }
        auto const& poly = std::get<Polygon>(b);
        return disk_polygon_area({ba->center[0], ba->center[1]}, ba->radius, poly.vertices);
    }
    if (auto const* bx = std::get_if<Box>(&a)) {
        if (auto const* by = std::get_if<Box>(&b)) {
            double v = 1;
            for (int i = 0; i < bx->dim; ++i) {
                v *= std::max(0.0, std::min(bx->hi[i], by->hi[i]) - std::max(bx->lo[i], by->lo[i]));
            }
            return v;
        }
        auto const& poly = std::get<Polygon>(b);
        return std::abs(signed_area(clip_convex(poly.vertices, box_corners(*bx))));
    }
    auto const& pa = std::get<Polygon>(a);
    auto const& pb = std::get<Polygon>(b);
    if (pb.is_convex()) {
        return std::abs(signed_area(clip_convex(pa.vertices, pb.vertices)));
    }
    if (pa.is_convex()) {
        return std::abs(signed_area(clip_convex(pb.vertices, pa.vertices)));
    }
    return std::nullopt;
}

std::vector<Point> sphere_directions(int dim, int count)
{
    std::vector<Point> dirs;
    dirs.reserve(count);
    if (dim == 2) {
        for (int i = 0; i < count; ++i) {
            double t = 2 * std::numbers::pi * i / count;
            dirs.push_back({std::cos(t), std::sin(t), 0});
        }
        return dirs;
    }
    double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
        double z = 1 - 2 * (i + 0.5) / count;
        double r = std::sqrt(std::max(0.0, 1 - z * z));
        double phi = golden * i;
        dirs.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
    return dirs;
}

}  // namespace

//---------------------------------------------------------------------------//
Box::Box(int dim_, Point lo_, Point hi_, bool closed_) : dim(dim_), lo(lo_), hi(hi_), closed(closed_)
{
    require_dimension(dim);
    for (int i = 0; i < dim; ++i) {
        if (!(lo[i] < hi[i]) || !std::isfinite(lo[i]) || !std::isfinite(hi[i])) {
            throw InvalidInput("box requires finite lo < hi on every axis");
        }
    }
    for (int i = dim; i < 3; ++i) {
        lo[i] = hi[i] = 0;
    }
}

double Box::volume() const
{
    double v = 1;
    for (int i = 0; i < dim; ++i) {
        v *= hi[i] - lo[i];
    }
    return v;
}

bool Box::contains(Point const& p) const
{
    for (int i = 0; i < dim; ++i) {
        if (closed ? (p[i] < lo[i] || p[i] > hi[i]) : (p[i] <= lo[i] || p[i] >= hi[i])) {
            return false;
        }
    }
    return true;
}

//---------------------------------------------------------------------------//
Polygon::Polygon(std::vector<P2> vertices_, bool closed_) : vertices(std::move(vertices_)), closed(closed_)
{
    if (vertices.size() < 3) {
        throw InvalidInput("polygon needs at least three vertices");
    }
    for (auto const& v : vertices) {
        if (!std::isfinite(v[0]) || !std::isfinite(v[1])) {
            throw InvalidInput("polygon vertices must be finite");
        }
    }
    if (!(std::abs(signed_area(vertices)) > 0)) {
        throw InvalidInput("polygon has zero area");
    }
}

double Polygon::area() const
{
    return std::abs(signed_area(vertices));
}

double Polygon::perimeter() const
{
    double s = 0;
    for (std::size_t i = 0, n = vertices.size(); i < n; ++i) {
        P2 const& a = vertices[i];
        P2 const& b = vertices[(i + 1) % n];
        s += std::hypot(b[0] - a[0], b[1] - a[1]);
    }
    return s;
}

double Polygon::boundary_distance(Point const& p) const
{
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0, n = vertices.size(); i < n; ++i) {
        best = std::min(best, segment_distance({p[0], p[1]}, vertices[i], vertices[(i + 1) % n]));
    }
    return best;
}

bool Polygon::contains(Point const& p) const
{
    bool inside = false;
    for (std::size_t i = 0, n = vertices.size(), j = n - 1; i < n; j = i++) {
        P2 const& a = vertices[i];
        P2 const& b = vertices[j];
        if ((a[1] > p[1]) != (b[1] > p[1])) {
            double x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if (p[0] < x) {
                inside = !inside;
            }
        }
    }
    // Points within rounding of an edge follow the closed flag.
    double scale = 0;
    for (auto const& v : vertices) {
        scale = std::max({scale, std::abs(v[0]), std::abs(v[1])});
    }
    if (boundary_distance(p) <= 1e-13 * std::max(scale, 1e-300)) {
        return closed;
    }
    return inside;
}

bool Polygon::is_convex() const
{
    double sign = 0;
    for (std::size_t i = 0, n = vertices.size(); i < n; ++i) {
        double c = cross2(vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]);
        if (c != 0) {
            if (sign != 0 && (c > 0) != (sign > 0)) {
                return false;
            }
            sign = c;
        }
    }
    return true;
}

//---------------------------------------------------------------------------//
int primitive_dim(Primitive const& p)
{
    return std::visit(
        [](auto const& q) -> int {
            if constexpr (std::is_same_v<std::decay_t<decltype(q)>, Polygon>) {
                return 2;
            } else {
                return q.dim;
            }
        },
        p);
}

double primitive_measure(Primitive const& p)
{
    return std::visit(
        [](auto const& q) -> double {
            if constexpr (std::is_same_v<std::decay_t<decltype(q)>, Polygon>) {
                return q.area();
            } else {
                return q.volume();
            }
        },
        p);
}

bool primitive_contains(Primitive const& prim, Point const& p)
{
    return std::visit([&](auto const& q) { return q.contains(p); }, prim);
}

bool interior_contains(Primitive const& prim, Point const& p)
{
    return std::visit(
        [&](auto const& q) -> bool {
            auto open = q;
            open.closed = false;
            return open.contains(p);
        },
        prim);
}

//---------------------------------------------------------------------------//
Region::Region(int dim, std::vector<Primitive> primitives) : dim_(dim), primitives_(std::move(primitives))
{
    require_dimension(dim_);
    if (primitives_.empty()) {
        throw InvalidInput("region needs at least one primitive");
    }
    Point lo{}, hi{};
    for (int i = 0; i < dim_; ++i) {
        lo[i] = std::numeric_limits<double>::infinity();
        hi[i] = -std::numeric_limits<double>::infinity();
    }
    for (auto const& prim : primitives_) {
        if (primitive_dim(prim) != dim_) {
            throw InvalidInput("all primitives of a region must share its dimension");
        }
        Box b = primitive_bounds(prim);
        for (int i = 0; i < dim_; ++i) {
            lo[i] = std::min(lo[i], b.lo[i]);
            hi[i] = std::max(hi[i], b.hi[i]);
        }
    }
    bounds_ = Box(dim_, lo, hi, true);
}

Region Region::ball(int dim, Point center, double radius, bool closed)
{
    return Region(dim, {Ball(dim, center, radius, closed)});
}

Region Region::box(int dim, Point lo, Point hi, bool closed)
{
    return Region(dim, {Box(dim, lo, hi, closed)});
}

Region Region::polygon(std::vector<P2> vertices, bool closed)
{
    return Region(2, {Polygon(std::move(vertices), closed)});
}

bool Region::contains(Point const& p) const
{
    if (!bounds_.contains(p)) {
        return false;
    }
    for (auto const& prim : primitives_) {
        if (primitive_contains(prim, p)) {
            return true;
        }
    }
    return false;
}

bool Region::interior_contains(Point const& p) const
{
    for (auto const& prim : primitives_) {
        if (qns::interior_contains(prim, p)) {
            return true;
        }
    }
    return false;
}

MeasureResult Region::measure(std::uint64_t mc_samples, std::uint64_t seed) const
{
    std::size_t n = primitives_.size();
    if (n == 1) {
        return {primitive_measure(primitives_.front()), 0.0, true, 0};
    }
    // Inclusion-exclusion truncated at pairs is exact when no three primitives
    // overlap pairwise.
    std::vector<std::vector<char>> overlaps(n, std::vector<char>(n, 0));
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        total += primitive_measure(primitives_[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            auto inter = pair_intersection(primitives_[i], primitives_[j]);
            if (!inter) {
                return measure_monte_carlo(mc_samples, seed);
            }
            if (*inter > 0) {
                overlaps[i][j] = overlaps[j][i] = 1;
                total -= *inter;
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!overlaps[i][j]) {
                continue;
            }
            for (std::size_t k = j + 1; k < n; ++k) {
                if (overlaps[i][k] && overlaps[j][k]) {
                    return measure_monte_carlo(mc_samples, seed);
                }
            }
        }
    }
    return {total, 0.0, true, 0};
}

MeasureResult Region::measure_monte_carlo(std::uint64_t samples, std::uint64_t seed) const
{
    if (samples == 0) {
        throw InvalidInput("Monte Carlo measure needs at least one sample");
    }
    UniformStream rng(seed);
    std::uint64_t hits = 0;
    Point p{};
    for (std::uint64_t s = 0; s < samples; ++s) {
        for (int i = 0; i < dim_; ++i) {
            p[i] = bounds_.lo[i] + (bounds_.hi[i] - bounds_.lo[i]) * rng.next();
        }
        hits += contains(p) ? 1 : 0;
    }
    double box_volume = bounds_.volume();
    double frac = static_cast<double>(hits) / static_cast<double>(samples);
    double se = box_volume * std::sqrt(frac * (1 - frac) / static_cast<double>(samples));
    return {box_volume * frac, se, false, samples};
}

BallContainment Region::contains_closed_ball(Ball const& b) const
{
    if (b.dim != dim_) {
        throw InvalidInput("ball and region dimensions differ");
    }
    for (auto const& prim : primitives_) {
        if (closed_ball_inside(prim, b)) {
            return {true, {}};
        }
    }
    if (!contains(b.center)) {
        return {false, {}};
    }
    constexpr int boundary_count = 2048;
    constexpr int ring_count = 512;
    bool single = primitives_.size() == 1;
    for (auto const& dir : sphere_directions(dim_, boundary_count)) {
        if (!contains(add(b.center, scaled(dir, b.radius)))) {
            return {false, dir};
        }
    }
    if (!single) {
        auto ring_dirs = sphere_directions(dim_, ring_count);
        for (double frac : {0.75, 0.5, 0.25}) {
            for (auto const& dir : ring_dirs) {
                if (!contains(add(b.center, scaled(dir, frac * b.radius)))) {
                    return {false, dir};
                }
            }
        }
        return {true, {}};
    }
    // A single primitive decides exactly; the samples only missed the
    // exterior point (tangency), so report the axis toward the primitive edge.
    Point dir{};
    dir[0] = 1.0;
    if (auto const* pb = std::get_if<Ball>(&primitives_.front())) {
        Point v = sub(b.center, pb->center);
        double len = norm(v, dim_);
        if (len > 0) {
            dir = scaled(v, 1.0 / len);
        }
    }
    return {false, dir};
}

std::optional<double> Region::exact_ball_intersection(Ball const& b) const
{
    if (b.dim != dim_) {
        throw InvalidInput("ball and region dimensions differ");
    }
    Primitive as_prim = b;
    if (primitives_.size() == 1) {
        return pair_intersection(primitives_.front(), as_prim);
    }
    if (dim_ != 2) {
        return std::nullopt;
    }
    // Sum over primitives is exact only when primitives are pairwise null.
    double total = 0;
    std::vector<std::size_t> touched;
    for (std::size_t i = 0; i < primitives_.size(); ++i) {
        auto part = pair_intersection(primitives_[i], as_prim);
        if (!part) {
            return std::nullopt;
        }
        if (*part > 0) {
            touched.push_back(i);
            total += *part;
        }
    }
    for (std::size_t i = 0; i < touched.size(); ++i) {
        for (std::size_t j = i + 1; j < touched.size(); ++j) {
            auto inter = pair_intersection(primitives_[touched[i]], primitives_[touched[j]]);
            if (!inter || *inter > 0) {
                return std::nullopt;
            }
        }
    }
    return total;
}

Region Region::transformed(Similarity const& h) const
{
    if (h.dim() != dim_) {
        throw InvalidInput("similarity and region dimensions differ");
    }
    Matrix const& t = h.orthogonal();
    bool signed_permutation = true;
    for (int i = 0; i < dim_ && signed_permutation; ++i) {
        for (int j = 0; j < dim_; ++j) {
            double v = std::abs(t[i * 3 + j]);
            if (v > 1e-15 && std::abs(v - 1) > 1e-15) {
                signed_permutation = false;
                break;
            }
        }
    }
    std::vector<Primitive> out;
    out.reserve(primitives_.size());
    for (auto const& prim : primitives_) {
        if (auto const* b = std::get_if<Ball>(&prim)) {
            out.emplace_back(Ball(dim_, h.apply(b->center), h.scale() * b->radius, b->closed));
        } else if (auto const* bx = std::get_if<Box>(&prim)) {
            if (signed_permutation) {
                Point a = h.apply(bx->lo);
                Point c = h.apply(bx->hi);
                Point lo{}, hi{};
                for (int i = 0; i < dim_; ++i) {
                    lo[i] = std::min(a[i], c[i]);
                    hi[i] = std::max(a[i], c[i]);
                }
                out.emplace_back(Box(dim_, lo, hi, bx->closed));
            } else if (dim_ == 2) {
                std::vector<P2> verts;
                for (auto const& c : box_corners(*bx)) {
                    Point q = h.apply({c[0], c[1], 0});
                    verts.push_back({q[0], q[1]});
                }
                out.emplace_back(Polygon(std::move(verts), bx->closed));
            } else {
                throw InvalidInput("rotated boxes are only supported in the plane");
            }
        } else {
            auto const& poly = std::get<Polygon>(prim);
            std::vector<P2> verts;
            for (auto const& v : poly.vertices) {
                Point q = h.apply({v[0], v[1], 0});
                verts.push_back({q[0], q[1]});
            }
            out.emplace_back(Polygon(std::move(verts), poly.closed));
        }
    }
    return Region(dim_, std::move(out));
}

std::vector<Point> Region::boundary_samples(int count) const
{
    int per = std::max(256, count / static_cast<int>(primitives_.size()));
    std::vector<Point> raw;
    for (auto const& prim : primitives_) {
        if (auto const* b = std::get_if<Ball>(&prim)) {
            for (auto const& dir : sphere_directions(dim_, per)) {
                raw.push_back(add(b->center, scaled(dir, b->radius)));
            }
        } else if (auto const* bx = std::get_if<Box>(&prim)) {
            if (dim_ == 2) {
                auto corners = box_corners(*bx);
                Polygon edges(corners);
                double perim = edges.perimeter();
                for (std::size_t e = 0; e < 4; ++e) {
                    P2 a = corners[e];
                    P2 c = corners[(e + 1) % 4];
                    int m = std::max(2, static_cast<int>(per * std::hypot(c[0] - a[0], c[1] - a[1]) / perim));
                    for (int i = 0; i < m; ++i) {
                        double t = static_cast<double>(i) / m;
                        raw.push_back({a[0] + t * (c[0] - a[0]), a[1] + t * (c[1] - a[1]), 0});
                    }
                }
            } else {
                int side = std::max(2, static_cast<int>(std::sqrt(per / 6.0)));
                for (int axis = 0; axis < 3; ++axis) {
                    int u = (axis + 1) % 3;
                    int v = (axis + 2) % 3;
                    for (double face : {bx->lo[axis], bx->hi[axis]}) {
                        for (int i = 0; i <= side; ++i) {
                            for (int j = 0; j <= side; ++j) {
                                Point q{};
                                q[axis] = face;
                                q[u] = bx->lo[u] + (bx->hi[u] - bx->lo[u]) * i / side;
                                q[v] = bx->lo[v] + (bx->hi[v] - bx->lo[v]) * j / side;
                                raw.push_back(q);
                            }
                        }
                    }
                }
            }
        } else {
            auto const& poly = std::get<Polygon>(prim);
            double perim = poly.perimeter();
            for (std::size_t e = 0, n = poly.vertices.size(); e < n; ++e) {
                P2 a = poly.vertices[e];
                P2 c = poly.vertices[(e + 1) % n];
                int m = std::max(2, static_cast<int>(per * std::hypot(c[0] - a[0], c[1] - a[1]) / perim));
                for (int i = 0; i < m; ++i) {
                    double t = static_cast<double>(i) / m;
                    raw.push_back({a[0] + t * (c[0] - a[0]), a[1] + t * (c[1] - a[1]), 0});
                }
            }
        }
    }
    if (primitives_.size() == 1) {
        return raw;
    }
    std::vector<Point> kept;
    for (auto const& p : raw) {
        if (!interior_contains(p)) {
            kept.push_back(p);
        }
    }
    return kept;
}

double Region::farthest_distance(Point const& p) const
{
    double best = 0;
    for (auto const& prim : primitives_) {
        if (auto const* b = std::get_if<Ball>(&prim)) {
            best = std::max(best, distance(p, b->center, dim_) + b->radius);
        } else if (auto const* bx = std::get_if<Box>(&prim)) {
            Point far{};
            for (int i = 0; i < dim_; ++i) {
                far[i] = std::max(std::abs(p[i] - bx->lo[i]), std::abs(p[i] - bx->hi[i]));
            }
            best = std::max(best, norm(far, dim_));
        } else {
            for (auto const& v : std::get<Polygon>(prim).vertices) {
                best = std::max(best, std::hypot(p[0] - v[0], p[1] - v[1]));
            }
        }
    }
    return best;
}

bool Region::operator==(Region const& other) const
{
    if (dim_ != other.dim_ || primitives_.size() != other.primitives_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < primitives_.size(); ++i) {
        Primitive const& a = primitives_[i];
        Primitive const& b = other.primitives_[i];
        if (a.index() != b.index()) {
            return false;
        }
        bool same = std::visit(
            [&](auto const& x) -> bool {
                using T = std::decay_t<decltype(x)>;
                auto const& y = std::get<T>(b);
                if constexpr (std::is_same_v<T, Ball>) {
                    return x.center == y.center && x.radius == y.radius && x.closed == y.closed;
                } else if constexpr (std::is_same_v<T, Box>) {
                    return x.lo == y.lo && x.hi == y.hi && x.closed == y.closed;
                } else {
                    return x.vertices == y.vertices && x.closed == y.closed;
                }
            },
            a);
        if (!same) {
            return false;
        }
    }
    return true;
}

//---------------------------------------------------------------------------//
MarkedSet::MarkedSet(Region region, Point marked, int boundary_samples)
    : region_(std::move(region)), marked_(marked)
{
    if (!region_.interior_contains(marked_)) {
        throw InvalidInput("marked point must lie in the interior of the set");
    }
    outer_radius_ = region_.farthest_distance(marked_);
    measure_ = region_.measure();

    auto const& prims = region_.primitives();
    if (prims.size() == 1) {
        Primitive const& prim = prims.front();
        if (auto const* b = std::get_if<Ball>(&prim)) {
            inner_radius_ = b->radius - distance(marked_, b->center, b->dim);
        } else if (auto const* bx = std::get_if<Box>(&prim)) {
            inner_radius_ = std::numeric_limits<double>::infinity();
            for (int i = 0; i < bx->dim; ++i) {
                inner_radius_ = std::min({inner_radius_, marked_[i] - bx->lo[i], bx->hi[i] - marked_[i]});
            }
        } else {
            inner_radius_ = std::get<Polygon>(prim).boundary_distance(marked_);
        }
        inner_exact_ = true;
    } else {
        if (boundary_samples < 10'000) {
            throw InvalidInput("composite marked sets need at least 1e4 boundary samples");
        }
        auto samples = region_.boundary_samples(boundary_samples);
        double best = std::numeric_limits<double>::infinity();
        for (auto const& y : samples) {
            best = std::min(best, distance(marked_, y, dim()));
        }
        // Half the coarsest sample spacing turns the sampled minimum into a
        // lower bound on the true distance.
        double spacing = 0;
        for (auto const& prim : prims) {
            Box b = primitive_bounds(prim);
            double extent = 0;
            for (int i = 0; i < dim(); ++i) {
                extent = std::max(extent, b.hi[i] - b.lo[i]);
            }
            int per = std::max(256, boundary_samples / static_cast<int>(prims.size()));
            double step = dim() == 2 ? std::numbers::pi * extent * 2 / per
                                     : extent * 4 / std::sqrt(static_cast<double>(per));
            spacing = std::max(spacing, step);
        }
        inner_radius_ = std::max(best - 0.5 * spacing, 0.5 * best);
        inner_exact_ = false;
    }
    if (!(inner_radius_ > 0) || inner_radius_ > outer_radius_) {
        throw InternalError("marked set radii violate 0 < r_D <= R_D");
    }
}

MarkedSet MarkedSet::unit_ball(int dim)
{
    return MarkedSet(Region::ball(dim, Point{}, 1.0), Point{});
}

MarkedSet MarkedSet::unit_square()
{
    return MarkedSet(Region::box(2, {0, 0, 0}, {1, 1, 0}), {0.5, 0.5, 0});
}

MarkedSet MarkedSet::two_ball_union()
{
    Region r(2, {Ball(2, {0, 0, 0}, 1.0), Ball(2, {1, 0, 0}, 1.0)});
    return MarkedSet(std::move(r), {0.5, 0, 0});
}

double similarity_image_measure(MarkedSet const& d, Similarity const& h)
{
    if (h.dim() != d.dim()) {
        throw InvalidInput("similarity and set dimensions differ");
    }
    return std::pow(h.scale(), d.dim()) * d.measure().value;
}

double truncation_radius(RadialProfile const& profile, double t)
{
    if (!(t > 1)) {
        throw InvalidInput("truncation requires t > 1");
    }
    if (!(profile.total > 0) || !std::isfinite(profile.total)) {
        throw InvalidInput("radial profile total must be positive and finite");
    }
    auto reached = [&](double r) { return t * profile.mass(r) >= profile.total; };
    double hi = 1.0;
    int guard = 0;
    while (!reached(hi)) {
        hi *= 2;
        if (++guard > 2000) {
            throw InvalidInput("radial profile never reaches total / t");
        }
    }
    double lo = 0.0;
    while (hi - lo > 1e-9 * hi * 0.5 && hi > std::numeric_limits<double>::min()) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        (reached(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace qns
