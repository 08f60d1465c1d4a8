#include "qns/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "parallel.hpp"
#include "qns/errors.hpp"
#include "qns/random.hpp"
#include "qns/region_io.hpp"

namespace qns {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr int max_index = 15;

std::string at(int m)
{
    return " at m = " + std::to_string(m);
}

std::vector<double> log_spaced(double lo, double hi, int n)
{
    std::vector<double> out;
    if (n <= 0 || !(lo < hi)) {
        return out;
    }
    double llo = std::log(lo);
    double lhi = std::log(hi);
    for (int i = 0; i < n; ++i) {
        double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
        out.push_back(std::exp(llo + t * (lhi - llo)));
    }
    return out;
}

// z_m on an axis, the ball of X centred there and rings of points inside it.
std::vector<Point> ring_centers(double a_local, int rings, int angles)
{
    std::vector<Point> out{{0, 0, 0}};
    for (int j = 1; j <= rings; ++j) {
        double rho = a_local * j / rings;
        for (int k = 0; k < angles; ++k) {
            double th = 2 * std::numbers::pi * k / angles;
            out.push_back({rho * std::cos(th), rho * std::sin(th), 0});
        }
    }
    // The outermost ring must stay in the closed X ball despite rounding.
    for (auto& p : out) {
        double r = std::hypot(p[0], p[1]);
        if (r > a_local) {
            p[0] *= a_local / r;
            p[1] *= a_local / r;
        }
    }
    return out;
}

double exact_mean(LocalFrame const& f, Point const& c, double r)
{
    Ball open(2, c, r, false);
    auto m = f.x.exact_ball_intersection(open);
    if (!m) {
        throw InternalError("no closed-form intersection in the counterexample frame");
    }
    return *m / open.volume();
}

QuadratureSpec sub_spec(QuadratureSpec const& spec, char const* name, std::uint64_t i)
{
    QuadratureSpec s = spec;
    s.seed = derive_seed(derive_seed(spec.seed, name), i);
    s.workers = 1;
    return s;
}

}  // namespace

//---------------------------------------------------------------------------//
char const* to_string(CounterexampleVariant v)
{
    return v == CounterexampleVariant::gaps ? "gaps" : "f1";
}

void SequencePair::validate() const
{
    if (N0 <= 2) {
        throw ConstructionError("N0 must be an integer > 2, got " + std::to_string(N0));
    }
    if (a.size() != b.size()) {
        throw ConstructionError("sequences a and b differ in length");
    }
    if (size() < 3) {
        throw ConstructionError("need at least M = 3 terms");
    }
    bool strict = variant == CounterexampleVariant::gaps;
    for (int i = 0; i < size(); ++i) {
        int m = index(i);
        double am = a[i];
        double bm = b[i];
        if (!(am > 0) || !(bm > 0) || !std::isfinite(bm)) {
            throw ConstructionError("0 < a_m and 0 < b_m violated" + at(m));
        }
        if (strict && !(am < 2 * am)) {
            throw ConstructionError("a_m < 2a_m violated" + at(m));
        }
        if (strict && !(2 * am < bm / N0)) {
            throw ConstructionError("2a_m < b_m/N0 violated" + at(m));
        }
        if (!strict && !(am < bm / N0)) {
            throw ConstructionError("a_m < b_m/N0 violated" + at(m));
        }
        if (!(bm / N0 < bm)) {
            throw ConstructionError("b_m/N0 < b_m violated" + at(m));
        }
        if (i + 1 < size()) {
            if (!(b[i + 1] > 0)) {
                throw ConstructionError("0 < b_{m+1} violated" + at(m));
            }
            if (!(b[i + 1] < am)) {
                throw ConstructionError("b_{m+1} < a_m violated" + at(m));
            }
            if (!(a[i + 1] < am)) {
                throw ConstructionError("a_m decreasing violated" + at(m));
            }
            if (!(b[i + 1] / a[i + 1] > bm / am)) {
                throw ConstructionError("b_m/a_m increasing violated" + at(m));
            }
        }
    }
}

SequencePair default_sequences(int N0, int M)
{
    if (N0 <= 2) {
        throw ConstructionError("N0 must be an integer > 2, got " + std::to_string(N0));
    }
    if (M < 3 || M > max_index) {
        throw ConstructionError("M must lie in [3, " + std::to_string(max_index) + "]");
    }
    SequencePair s;
    s.N0 = N0;
    for (int m = 1; m <= M; ++m) {
        double bm = std::ldexp(1.0, -4 * m * m);
        s.b.push_back(bm);
        s.a.push_back(bm / (4.0 * N0 * m));
    }
    s.validate();
    return s;
}

SequencePair f1_sequences(int N0, int M)
{
    if (N0 <= 2) {
        throw ConstructionError("N0 must be an integer > 2, got " + std::to_string(N0));
    }
    if (M < 3 || N0 + M > max_index) {
        throw ConstructionError("f1 variant needs M >= 3 and N0 + M <= " + std::to_string(max_index));
    }
    SequencePair s;
    s.N0 = N0;
    s.first_index = N0 + 1;
    s.variant = CounterexampleVariant::f1;
    for (int m = N0 + 1; m <= N0 + M; ++m) {
        double am = std::ldexp(1.0, -4 * m * m);
        s.a.push_back(am);
        s.b.push_back(m * am);
    }
    s.validate();
    return s;
}

//---------------------------------------------------------------------------//
CounterexampleDomain::CounterexampleDomain(SequencePair s) : seq_(std::move(s)) {}

CounterexampleDomain CounterexampleDomain::build(SequencePair s)
{
    s.validate();
    CounterexampleDomain d(std::move(s));
    auto const& q = d.seq_;
    double z = 0;
    for (int i = 0; i < q.size(); ++i) {
        d.z_.push_back(z);
        z += 2 * q.b[i];
    }
    // Checked on relative offsets, which stay exact where the absolute z_m
    // have already merged.
    for (int i = 0; i + 1 < q.size(); ++i) {
        int m = q.index(i);
        double sep = 2 * q.b[i] - (q.b[i] + q.b[i + 1]) / q.N0;
        if (!(sep > 0)) {
            throw ConstructionError("balls m and m+1 overlap" + at(m));
        }
        // R_m must reach into both balls it bridges.
        if (!(q.a[i + 1] < q.b[i + 1] / q.N0)) {
            throw ConstructionError("bridge R_m wider than ball m+1" + at(m));
        }
    }
    return d;
}

LocalFrame CounterexampleDomain::local_frame(std::size_t i) const
{
    auto const& q = seq_;
    if (i >= static_cast<std::size_t>(q.size())) {
        throw InvalidInput("local frame index out of range");
    }
    double s = q.b[i];
    double n0 = q.N0;
    std::vector<Primitive> omega{Ball(2, {0, 0, 0}, 1.0 / n0)};
    std::vector<Primitive> x{Ball(2, {0, 0, 0}, q.a[i] / s, true)};
    if (i > 0) {
        double off = -2 * q.b[i - 1] / s;
        omega.push_back(Ball(2, {off, 0, 0}, q.b[i - 1] / (n0 * s)));
        omega.push_back(Box(2, {off, -q.a[i] / s, 0}, {0, q.a[i] / s, 0}));
        x.push_back(Ball(2, {off, 0, 0}, q.a[i - 1] / s, true));
    }
    if (i + 1 < static_cast<std::size_t>(q.size())) {
        omega.push_back(Box(2, {0, -q.a[i + 1] / s, 0}, {2, q.a[i + 1] / s, 0}));
        // Ball m+1 can be narrower than the spacing of doubles near 2; it is
        // then dropped, which no probe of this frame can detect.
        double rb = q.b[i + 1] / (n0 * s);
        double rx = q.a[i + 1] / s;
        if (2 - rb < 2 && 2 - rx < 2) {
            omega.push_back(Ball(2, {2, 0, 0}, rb));
            x.push_back(Ball(2, {2, 0, 0}, rx, true));
        }
    }
    Region om(2, std::move(omega));
    Region xr(2, std::move(x));
    return LocalFrame{q.index(i), s, q.a[i] / s, 1.0 / n0, om, xr, Field::indicator(om, xr)};
}

nlohmann::json CounterexampleDomain::to_json() const
{
    using io::format_double;
    using nlohmann::json;
    auto const& q = seq_;
    auto pt = [](double x, double y) { return json::array({format_double(x), format_double(y)}); };
    json omega = json::array();
    json xs = json::array();
    json seq = json::array();
    for (int i = 0; i < q.size(); ++i) {
        omega.push_back({{"type", "ball"}, {"center", pt(z_[i], 0)}, {"radius", format_double(q.b[i] / q.N0)}});
        if (i + 1 < q.size()) {
            double h = q.a[i + 1];
            omega.push_back({{"type", "rect"}, {"lo", pt(z_[i], -h)}, {"hi", pt(z_[i + 1], h)}});
        }
        xs.push_back({{"type", "ball"},
                      {"center", pt(z_[i], 0)},
                      {"radius", format_double(q.a[i])},
                      {"closed", true}});
        seq.push_back({{"m", q.index(i)},
                       {"a_m", format_double(q.a[i])},
                       {"b_m", format_double(q.b[i])},
                       {"z_m", format_double(z_[i])}});
    }
    return {{"variant", to_string(q.variant)},
            {"N0", q.N0},
            {"M", q.size()},
            {"omega", {{"dimension", 2}, {"primitives", omega}}},
            {"X", {{"dimension", 2}, {"primitives", xs}}},
            {"sequences", seq},
            {"precision_note",
             "absolute z_m merge in double precision once b_m falls below the spacing of doubles near z_m; "
             "certification uses per-ball local frames (x - z_m) / b_m"}};
}

//---------------------------------------------------------------------------//
NotQnsReport certify_not_qns(CounterexampleDomain const& c, QuadratureSpec const& spec)
{
    spec.validate();
    auto const& q = c.sequences();
    NotQnsReport rep;
    rep.rows.resize(q.size());
    detail::parallel_for(q.size(), spec.workers, [&](std::size_t i) {
        LocalFrame f = c.local_frame(i);
        double rho = f.ball_local / 2;
        Ball ball(2, {0, 0, 0}, rho, true);
        if (!f.omega.contains_closed_ball(ball).inside) {
            throw InternalError("probe ball B(z_m, b_m/(2N0)) leaves Omega" + at(f.m));
        }
        NotQnsRow& row = rep.rows[i];
        row.m = f.m;
        double ratio = f.a_local / rho;
        row.expected = std::min(1.0, ratio * ratio);
        row.exact_mean = exact_mean(f, ball.center, rho);
        MeanEstimate e = mean_over_ball_unchecked(f.u, ball, sub_spec(spec, "not-qns", i));
        row.mean = e.mean;
        row.stderr_ = e.stderr_;
        row.within = std::abs(e.mean - row.expected) <= 3 * e.stderr_ + 1e-12 * row.expected;
        row.implied_K = 1 / row.expected;
        row.measured_K = e.mean > 0 ? 1 / e.mean : inf;
    });
    // The f1 variant starts with balls fully inside X (bound 1), so only the
    // tail has to grow there.
    bool strict = q.variant == CounterexampleVariant::gaps;
    rep.increasing = rep.rows.back().implied_K > rep.rows.front().implied_K;
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        double prev = rep.rows[i - 1].implied_K;
        double cur = rep.rows[i].implied_K;
        if (strict ? !(cur > prev) : !(cur >= prev)) {
            rep.increasing = false;
        }
    }
    rep.pass = rep.increasing
               && std::all_of(rep.rows.begin(), rep.rows.end(), [](NotQnsRow const& r) { return r.within; });
    return rep;
}

std::string implied_k_csv(CounterexampleDomain const& c, NotQnsReport const& r)
{
    using io::format_double;
    auto const& q = c.sequences();
    std::ostringstream os;
    os << "m,a_m,b_m,z_m,ratio,implied_K\r\n";
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        auto const& row = r.rows[i];
        os << row.m << ',' << format_double(q.a[i]) << ',' << format_double(q.b[i]) << ','
           << format_double(c.centers()[i]) << ',' << format_double(row.expected) << ','
           << format_double(row.implied_K) << "\r\n";
    }
    return os.str();
}

//---------------------------------------------------------------------------//
void require_avoids_gaps(CounterexampleDomain const& c, RadiusSet const& a)
{
    auto const& q = c.sequences();
    for (int i = 0; i < q.size(); ++i) {
        double la = std::log(q.a[i]);
        double lb = std::log(q.b[i]);
        std::string gap = "(a_m, b_m) = (" + io::format_double(q.a[i]) + ", " + io::format_double(q.b[i]) + ")"
                          + at(q.index(i));
        if (a.window_only() && (q.a[i] < a.window().lo || q.b[i] > a.window().hi)) {
            throw InvalidInput("radius set is only known on its window, which misses the gap " + gap);
        }
        double tol = 1e-9 * std::max(1.0, std::abs(la));
        for (auto const& p : a.pieces(la, lb)) {
            double overlap = std::min(p.hi, lb) - std::max(p.lo, la);
            bool point_inside = p.lo > la + tol && p.lo < lb - tol;
            if (overlap > tol || point_inside) {
                throw InvalidInput("radius set meets the gap " + gap);
            }
        }
    }
}

RadiusSet default_gap_complement(int N0, Window w)
{
    return RadiusSet::gap_sequence(GapLaw{4.0 * N0, 4.0 * N0, 1}, w);
}

//---------------------------------------------------------------------------//
RestrictedReport certify_restricted_qns(CounterexampleDomain const& c, RadiusSet const& a,
                                        RestrictedOptions const& opt, QuadratureSpec const& spec)
{
    spec.validate();
    if (opt.rings < 1 || opt.angles < 1 || opt.radii < 1 || !(opt.radius_floor > 0 && opt.radius_floor < 1)) {
        throw InvalidInput("restricted probe options out of range");
    }
    require_avoids_gaps(c, a);
    auto const& q = c.sequences();

    struct Work {
        std::size_t frame;
        Point center;
        double radius;
        bool dichotomy;
    };
    struct Slot {
        bool admissible = false;
        LocalProbe probe;
    };
    std::vector<LocalFrame> frames;
    std::vector<Work> work;
    for (int i = 0; i < q.size(); ++i) {
        frames.push_back(c.local_frame(i));
        auto const& f = frames.back();
        double lo = opt.radius_floor * q.a[i];
        if (i + 1 < q.size()) {
            lo = std::max(lo, q.b[i + 1]);
        }
        std::vector<double> radii;
        for (double r : log_spaced(lo, q.a[i], opt.radii)) {
            if (r < q.a[i] && a.contains(r)) {
                radii.push_back(r / f.scale);
            }
        }
        if (a.contains(q.a[i])) {
            radii.push_back(f.a_local);
        }
        // Radii past b_m exceed every part of Omega near z_m; the frame holds
        // everything within 4 b_m of the ball.
        std::vector<double> big;
        for (double t : {1.0, 1.5, 2.0, 4.0}) {
            if (a.contains(t * q.b[i])) {
                big.push_back(t);
            }
        }
        for (auto const& p : ring_centers(f.a_local, opt.rings, opt.angles)) {
            for (double r : radii) {
                work.push_back({static_cast<std::size_t>(i), p, r, false});
            }
            for (double r : big) {
                work.push_back({static_cast<std::size_t>(i), p, r, true});
            }
        }
    }

    std::vector<Slot> slots(work.size());
    detail::parallel_for(work.size(), spec.workers, [&](std::size_t k) {
        auto const& w = work[k];
        auto const& f = frames[w.frame];
        Ball ball(2, w.center, w.radius, true);
        if (!f.omega.contains_closed_ball(ball).inside) {
            return;
        }
        Slot& s = slots[k];
        s.admissible = true;
        s.probe.m = f.m;
        s.probe.center = w.center;
        s.probe.radius = w.radius;
        if (!w.dichotomy) {
            s.probe.mean = exact_mean(f, w.center, w.radius);
            s.probe.ratio = f.u.evaluate(w.center) / s.probe.mean;
        }
    });

    RestrictedReport rep;
    rep.K = 1 / lens_constant();
    std::vector<std::size_t> order;
    for (std::size_t k = 0; k < work.size(); ++k) {
        if (work[k].dichotomy) {
            ++rep.dichotomy_probes;
            rep.dichotomy_violations += slots[k].admissible ? 1 : 0;
            continue;
        }
        ++rep.probes_total;
        if (!slots[k].admissible) {
            continue;
        }
        ++rep.probes_admissible;
        auto const& p = slots[k].probe;
        if (p.ratio > rep.K * (1 + 1e-12)) {
            ++rep.failures;
        }
        if (!rep.witness || p.ratio > rep.ratio_max) {
            rep.ratio_max = p.ratio;
            rep.witness = p;
        }
        order.push_back(k);
    }
    rep.sharp = rep.ratio_max >= opt.sharpness;

    // Second route on the extremal probes: sampled means must agree with the
    // closed form.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return slots[x].probe.ratio > slots[y].probe.ratio; });
    order.resize(std::min<std::size_t>(order.size(), std::max(0, opt.cross_checks)));
    std::vector<double> z(order.size());
    detail::parallel_for(order.size(), spec.workers, [&](std::size_t j) {
        auto const& w = work[order[j]];
        auto const& p = slots[order[j]].probe;
        MeanEstimate e = mean_over_ball_unchecked(frames[w.frame].u, Ball(2, w.center, w.radius, true),
                                                  sub_spec(spec, "restricted-cross-check", j));
        double diff = std::abs(e.mean - p.mean);
        z[j] = diff <= 1e-12 ? 0.0 : (e.stderr_ > 0 ? diff / e.stderr_ : inf);
    });
    rep.cross_check_max_z = z.empty() ? 0.0 : *std::max_element(z.begin(), z.end());
    rep.cross_check_pass = rep.cross_check_max_z <= 5;

    rep.avoided_set = classify(a);
    rep.pass = rep.failures == 0 && rep.probes_admissible > 0 && rep.dichotomy_violations == 0
               && rep.cross_check_pass;
    return rep;
}

//---------------------------------------------------------------------------//
F1Counterexample build_f1_counterexample(int N0, int M, double c, MarkedSet const& d)
{
    if (d.dim() != 2 || d.region().primitives().size() != 1
        || !std::holds_alternative<Ball>(d.region().primitives().front())) {
        throw InvalidInput("the f1 counterexample needs D to be a single planar disk");
    }
    double r_d = d.inner_radius();
    if (!(r_d > 0)) {
        throw InvalidInput("D needs a positive inner radius");
    }
    auto smallest = [r_d](bool written) {
        for (int n = 1; n < 1'000'000; ++n) {
            double v = 2 / (n * r_d);
            if (written ? v > 1 : v < 1) {
                return n;
            }
        }
        throw InvalidInput("no N0 below 1e6 satisfies the inequality");
    };
    auto domain = CounterexampleDomain::build(f1_sequences(N0, M));
    auto f = ScaleFunction::f1(c, GapLaw{0, 1, N0 + 1});
    return F1Counterexample{std::move(domain), std::move(f), c, d, smallest(true), smallest(false)};
}

F1MeanReport certify_f1_mean(F1Counterexample const& fx, F1ProbeOptions const& opt, QuadratureSpec const& spec)
{
    spec.validate();
    if (opt.rings < 1 || opt.angles < 1 || opt.radii < 2 || !(opt.radius_floor > 0 && opt.radius_floor < 1)) {
        throw InvalidInput("f1 probe options out of range");
    }
    auto const& q = fx.domain.sequences();
    double R = fx.d.inner_radius();
    double lens = lens_constant();

    struct Work {
        std::size_t frame;
        Point center;
        double radius;  // of h(D), local frame
    };
    std::vector<LocalFrame> frames;
    std::vector<Work> work;
    for (int i = 0; i < q.size(); ++i) {
        frames.push_back(fx.domain.local_frame(i));
        auto const& f = frames.back();
        auto radii = log_spaced(opt.radius_floor * f.a_local, f.ball_local, opt.radii);
        radii.push_back(f.a_local);
        // Inside the gap (a_m, m a_m), where f1 drops to k / m.
        double m = f.m;
        radii.push_back(f.a_local * std::sqrt(m));
        radii.push_back(f.a_local * (m + 1) / 2);
        for (auto const& p : ring_centers(f.a_local, opt.rings, opt.angles)) {
            for (double r : radii) {
                work.push_back({static_cast<std::size_t>(i), p, r});
            }
        }
    }

    std::vector<std::optional<LocalProbe>> slots(work.size());
    detail::parallel_for(work.size(), spec.workers, [&](std::size_t k) {
        auto const& w = work[k];
        auto const& f = frames[w.frame];
        Ball ball(2, w.center, w.radius, true);
        if (!f.omega.contains_closed_ball(ball).inside) {
            return;
        }
        LocalProbe p;
        p.m = f.m;
        p.center = w.center;
        p.radius = w.radius;
        p.mean = exact_mean(f, w.center, w.radius);
        // k(h) = radius / r_D in absolute units; ratio = (f1(k)/k)^2 / (pi R^2 mean)
        // after dividing numerator and denominator by k^2.
        double ln_k = std::log(w.radius) + std::log(f.scale) - std::log(R);
        double g = std::exp(2 * (fx.f1.log_f(ln_k) - ln_k));
        p.ratio = f.u.evaluate(w.center) * g / (std::numbers::pi * R * R * p.mean);
        slots[k] = p;
    });

    F1MeanReport rep;
    rep.K = fx.c * fx.c / (std::numbers::pi * std::pow(std::min(R, 1.0), 2) * lens);
    rep.probes_total = work.size();
    std::size_t witness_k = 0;
    for (std::size_t k = 0; k < slots.size(); ++k) {
        if (!slots[k]) {
            continue;
        }
        ++rep.probes_admissible;
        if (!rep.witness || slots[k]->ratio > rep.ratio_max) {
            rep.ratio_max = slots[k]->ratio;
            rep.witness = slots[k];
            witness_k = k;
        }
    }
    if (rep.witness) {
        auto const& w = work[witness_k];
        MeanEstimate e = mean_over_ball_unchecked(frames[w.frame].u, Ball(2, w.center, w.radius, true),
                                                  sub_spec(spec, "f1-cross-check", 0));
        double diff = std::abs(e.mean - rep.witness->mean);
        rep.cross_check_z = diff <= 1e-12 ? 0.0 : (e.stderr_ > 0 ? diff / e.stderr_ : inf);
        rep.cross_check_pass = rep.cross_check_z <= 5;
    }
    rep.pass = rep.probes_admissible > 0 && rep.ratio_max <= rep.K * (1 + 1e-12) && rep.cross_check_pass;
    return rep;
}

}  // namespace qns
