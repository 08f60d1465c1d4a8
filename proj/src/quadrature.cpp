#include "qns/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>
#include <vector>

#include "qns/errors.hpp"
#include "qns/random.hpp"

namespace qns {

char const* to_string(QuadMethod m)
{
    switch (m) {
        case QuadMethod::grid: return "grid";
        case QuadMethod::mc: return "mc";
        case QuadMethod::stratified: return "stratified";
    }
    return "unknown";
}

QuadMethod quad_method_from_string(std::string const& s)
{
    if (s == "grid") {
        return QuadMethod::grid;
    }
    if (s == "mc") {
        return QuadMethod::mc;
    }
    if (s == "stratified") {
        return QuadMethod::stratified;
    }
    throw InvalidInput("unknown quadrature method \"" + s + "\"");
}

void QuadratureSpec::validate() const
{
    if (!(target_rel_err > 0 && target_rel_err <= 0.1)) {
        throw InvalidInput("target relative error must lie in (0, 0.1]");
    }
    if (max_samples < 1000) {
        throw InvalidInput("max_samples must be at least 1e3");
    }
    if (workers < 1) {
        throw InvalidInput("worker count must be at least 1");
    }
}

Point unit_ball_point(int dim, double u0, double u1, double u2)
{
    if (dim == 2) {
        double r = std::sqrt(u0);
        double t = 2 * std::numbers::pi * u1;
        return {r * std::cos(t), r * std::sin(t), 0};
    }
    double r = std::cbrt(u0);
    double z = 1 - 2 * u1;
    double s = std::sqrt(std::max(0.0, 1 - z * z));
    double phi = 2 * std::numbers::pi * u2;
    return {r * s * std::cos(phi), r * s * std::sin(phi), r * z};
}

namespace {

constexpr int strata = 2048;

// Stratum s of the unit ball: 32 rings x 64 sectors in the plane, 8 shells x
// 16 polar x 16 azimuthal bins in space; all strata have equal volume.
Point stratum_point(int dim, int s, double u0, double u1, double u2)
{
    if (dim == 2) {
        double r = std::sqrt((s / 64 + u0) / 32.0);
        double t = 2 * std::numbers::pi * (s % 64 + u1) / 64.0;
        return {r * std::cos(t), r * std::sin(t), 0};
    }
    double r = std::cbrt((s / 256 + u0) / 8.0);
    double z = -1 + 2 * ((s / 16) % 16 + u1) / 16.0;
    double sz = std::sqrt(std::max(0.0, 1 - z * z));
    double phi = 2 * std::numbers::pi * (s % 16 + u2) / 16.0;
    return {r * sz * std::cos(phi), r * sz * std::sin(phi), r * z};
}

struct ChunkStats {
    double sum = 0;
    double sumsq = 0;
    double var_sum = 0;  // stratified: per-pass variance of the pass mean
    std::uint64_t n = 0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double y)
    {
        sum += y;
        sumsq += y * y;
        ++n;
        lo = std::min(lo, y);
        hi = std::max(hi, y);
    }
};

// Runs chunk functions in index order and applies the stopping rule
// sequentially, computing up to `workers` chunks ahead in parallel.
template<class ChunkFn>
MeanEstimate run_chunks(QuadratureSpec const& spec, bool stratified, ChunkFn&& chunk_fn)
{
    std::uint64_t max_chunks = std::max<std::uint64_t>(1, spec.max_samples / QuadratureSpec::chunk_size);
    std::uint64_t min_chunks = stratified ? 1 : 2;
    ChunkStats total;
    std::uint64_t passes = 0;
    std::uint64_t next = 0;
    int workers = std::max(1, spec.workers);

    auto estimate = [&]() {
        MeanEstimate e;
        e.samples = total.n;
        double n = static_cast<double>(total.n);
        e.mean = total.sum / n;
        if (stratified) {
            double p = static_cast<double>(passes);
            e.stderr_ = std::sqrt(total.var_sum) / p;
        } else {
            double var = std::max(0.0, total.sumsq / n - e.mean * e.mean) * n / std::max(1.0, n - 1);
            e.stderr_ = std::sqrt(var / n);
        }
        return e;
    };

    while (next < max_chunks) {
        std::uint64_t batch = std::min<std::uint64_t>(workers, max_chunks - next);
        std::vector<ChunkStats> results(batch);
        if (batch == 1) {
            results[0] = chunk_fn(next);
        } else {
            std::vector<std::exception_ptr> errors(batch);
            std::vector<std::thread> threads;
            for (std::uint64_t i = 0; i < batch; ++i) {
                threads.emplace_back([&, i]() {
                    try {
                        results[i] = chunk_fn(next + i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                });
            }
            for (auto& t : threads) {
                t.join();
            }
            for (auto& e : errors) {
                if (e) {
                    std::rethrow_exception(e);
                }
            }
        }
        for (auto const& r : results) {
            total.sum += r.sum;
            total.sumsq += r.sumsq;
            total.var_sum += r.var_sum;
            total.n += r.n;
            total.lo = std::min(total.lo, r.lo);
            total.hi = std::max(total.hi, r.hi);
            ++passes;
            ++next;
            if (total.lo == total.hi) {
                return {total.lo, 0.0, total.n, true};
            }
            MeanEstimate e = estimate();
            if (passes >= min_chunks && e.stderr_ <= spec.target_rel_err * std::abs(e.mean)) {
                return e;
            }
            if (next >= max_chunks) {
                return e;
            }
        }
    }
    return estimate();
}

// Equal-volume midpoint rule with `level` refinements; returns the mean.
double grid_mean(Field const& u, Ball const& b, int level)
{
    double s = 0;
    std::uint64_t n = 0;
    if (b.dim == 2) {
        int rings = 8 << level;
        int sectors = 16 << level;
        for (int i = 0; i < rings; ++i) {
            double r = b.radius * std::sqrt((i + 0.5) / rings);
            for (int j = 0; j < sectors; ++j) {
                double t = 2 * std::numbers::pi * (j + 0.5) / sectors;
                s += u.evaluate_unchecked({b.center[0] + r * std::cos(t), b.center[1] + r * std::sin(t), 0});
                ++n;
            }
        }
    } else {
        int shells = 4 << level;
        int polar = 8 << level;
        int azimuth = 8 << level;
        for (int i = 0; i < shells; ++i) {
            double r = b.radius * std::cbrt((i + 0.5) / shells);
            for (int c = 0; c < polar; ++c) {
                double z = -1 + 2 * (c + 0.5) / polar;
                double sz = std::sqrt(1 - z * z);
                for (int f = 0; f < azimuth; ++f) {
                    double phi = 2 * std::numbers::pi * (f + 0.5) / azimuth;
                    s += u.evaluate_unchecked(add(b.center, scaled({sz * std::cos(phi), sz * std::sin(phi), z}, r)));
                    ++n;
                }
            }
        }
    }
    return s / static_cast<double>(n);
}

MeanEstimate grid_over_ball(Field const& u, Ball const& b, QuadratureSpec const& spec)
{
    if (u.contains_indicator()) {
        throw InvalidInput("grid quadrature is disallowed for indicator fields");
    }
    auto cells = [&](int level) -> std::uint64_t {
        return b.dim == 2 ? (8ULL << level) * (16ULL << level) : (4ULL << level) * (8ULL << level) * (8ULL << level);
    };
    double coarse = grid_mean(u, b, 0);
    std::uint64_t used = cells(0);
    for (int level = 1;; ++level) {
        if (used + cells(level) > spec.max_samples) {
            // Budget exhausted: report the last refinement difference as error.
            return {coarse, std::numeric_limits<double>::infinity(), used, false};
        }
        double fine = grid_mean(u, b, level);
        used += cells(level);
        double err = std::abs(fine - coarse);
        if (err <= spec.target_rel_err * std::abs(fine) || err == 0) {
            return {fine, err, used, false};
        }
        coarse = fine;
    }
}

}  // namespace

MeanEstimate mean_over_ball(Field const& u, Ball const& b, QuadratureSpec const& spec)
{
    Ball closed = b;
    closed.closed = true;
    auto inside = u.domain().contains_closed_ball(closed);
    if (!inside.inside) {
        Point const& d = inside.violating_direction;
        std::string msg = "ball closure leaves the field domain";
        if (d != Point{}) {
            msg += " in direction (" + std::to_string(d[0]) + ", " + std::to_string(d[1]);
            if (b.dim == 3) {
                msg += ", " + std::to_string(d[2]);
            }
            msg += ")";
        } else {
            msg += " (center outside)";
        }
        throw InvalidInput(msg);
    }
    return mean_over_ball_unchecked(u, b, spec);
}

MeanEstimate mean_over_ball_unchecked(Field const& u, Ball const& b, QuadratureSpec const& spec)
{
    spec.validate();
    if (b.dim != u.dim()) {
        throw InvalidInput("ball and field dimensions differ");
    }
    if (auto c = u.constant_value()) {
        return {*c, 0.0, 0, true};
    }
    if (spec.method == QuadMethod::grid) {
        return grid_over_ball(u, b, spec);
    }
    int dim = b.dim;
    if (spec.method == QuadMethod::mc) {
        return run_chunks(spec, false, [&](std::uint64_t chunk) {
            UniformStream rng(derive_seed(spec.seed, chunk));
            ChunkStats st;
            for (std::uint64_t i = 0; i < QuadratureSpec::chunk_size; ++i) {
                double u0 = rng.next();
                double u1 = rng.next();
                double u2 = dim == 3 ? rng.next() : 0.0;
                st.add(u.evaluate_unchecked(add(b.center, scaled(unit_ball_point(dim, u0, u1, u2), b.radius))));
            }
            return st;
        });
    }
    return run_chunks(spec, true, [&](std::uint64_t chunk) {
        UniformStream rng(derive_seed(spec.seed, chunk));
        ChunkStats st;
        double pass_var = 0;
        for (int s = 0; s < strata; ++s) {
            double y[2];
            for (double& yi : y) {
                double u0 = rng.next();
                double u1 = rng.next();
                double u2 = dim == 3 ? rng.next() : 0.0;
                yi = u.evaluate_unchecked(add(b.center, scaled(stratum_point(dim, s, u0, u1, u2), b.radius)));
                st.add(yi);
            }
            pass_var += (y[0] - y[1]) * (y[0] - y[1]) / 4.0;
        }
        st.var_sum = pass_var / (static_cast<double>(strata) * strata);
        return st;
    });
}

MeanEstimate mean_over_image(Field const& u, MarkedSet const& d, Similarity const& h, QuadratureSpec const& spec)
{
    spec.validate();
    if (h.dim() != d.dim() || d.dim() != u.dim()) {
        throw InvalidInput("field, set and similarity dimensions differ");
    }
    Region const& omega = u.domain();
    Region const& region = d.region();
    Box const& bb = region.bounds();
    int dim = d.dim();
    auto chunk_fn = [&](std::uint64_t chunk) {
        UniformStream rng(derive_seed(spec.seed, chunk));
        ChunkStats st;
        std::uint64_t attempts = 0;
        while (st.n < QuadratureSpec::chunk_size) {
            if (++attempts > 1000 * QuadratureSpec::chunk_size) {
                throw InvalidInput("rejection sampling of the marked set failed; set too thin for its bounding box");
            }
            Point p{};
            for (int i = 0; i < dim; ++i) {
                p[i] = bb.lo[i] + (bb.hi[i] - bb.lo[i]) * rng.next();
            }
            if (!region.contains(p)) {
                continue;
            }
            Point y = h.apply(p);
            if (!omega.contains(y)) {
                throw InvalidInput("similarity image leaves the field domain");
            }
            st.add(u.evaluate_unchecked(y));
        }
        return st;
    };
    if (auto c = u.constant_value()) {
        // Still sample once so that an inadmissible image is rejected.
        chunk_fn(0);
        return {*c, 0.0, QuadratureSpec::chunk_size, true};
    }
    return run_chunks(spec, false, chunk_fn);
}

}  // namespace qns
