#include "qns/qns_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "parallel.hpp"
#include "qns/errors.hpp"
#include "qns/random.hpp"

namespace qns {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

std::vector<double> log_spaced(double lo, double hi, int n)
{
    if (n < 1 || !(lo > 0) || !(hi >= lo)) {
        throw InvalidInput("log-spaced grid needs n >= 1 and 0 < lo <= hi");
    }
    if (n == 1) {
        return {hi};
    }
    std::vector<double> out;
    double a = std::log(lo);
    double b = std::log(hi);
    for (int i = 0; i < n; ++i) {
        out.push_back(i == n - 1 ? hi : std::exp(a + (b - a) * i / (n - 1)));
    }
    return out;
}

std::vector<Point> tensor_centers(int dim, Point const& lo, Point const& hi, int per_axis)
{
    std::vector<Point> out;
    if (per_axis < 1) {
        return out;
    }
    auto coord = [&](int axis, int i) {
        return per_axis == 1 ? 0.5 * (lo[axis] + hi[axis]) : lo[axis] + (hi[axis] - lo[axis]) * i / (per_axis - 1);
    };
    int nz = dim == 3 ? per_axis : 1;
    for (int i = 0; i < per_axis; ++i) {
        for (int j = 0; j < per_axis; ++j) {
            for (int k = 0; k < nz; ++k) {
                out.push_back({coord(0, i), coord(1, j), dim == 3 ? coord(2, k) : 0.0});
            }
        }
    }
    return out;
}

QuadratureSpec probe_spec(QuadratureSpec const& spec, std::size_t index)
{
    QuadratureSpec s = spec;
    s.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(index));
    s.workers = 1;
    return s;
}

enum class Status { inadmissible, zero, evaluated };

struct Slot {
    Status status = Status::inadmissible;
    ProbeOutcome outcome;
};

}  // namespace

//---------------------------------------------------------------------------//
std::vector<Point> ProbeGrid::centers() const
{
    require_dimension(dim);
    std::vector<Point> out;
    for (auto const& c : tensor_centers(dim, lo, hi, centers_per_axis)) {
        if (!center_region || center_region->contains(c)) {
            out.push_back(c);
        }
    }
    out.insert(out.end(), extra_centers.begin(), extra_centers.end());
    return out;
}

std::vector<double> ProbeGrid::radius_list() const
{
    std::vector<double> out;
    if (radii > 0) {
        out = log_spaced(r_min, r_max, radii);
    }
    out.insert(out.end(), extra_radii.begin(), extra_radii.end());
    if (radius_set) {
        std::erase_if(out, [&](double r) { return !radius_set->contains(r); });
    }
    return out;
}

std::vector<ProbeOutcome> evaluate_probes(Field const& u, ProbeGrid const& grid, QuadratureSpec const& spec,
                                          MeanSource source, KEstimate* stats)
{
    spec.validate();
    if (grid.dim != u.dim()) {
        throw InvalidInput("probe grid and field dimensions differ");
    }
    auto centers = grid.centers();
    auto radii = grid.radius_list();
    std::size_t total = centers.size() * radii.size();
    if (total == 0) {
        throw InvalidInput("probe grid is empty");
    }
    Region const& omega = u.domain();
    bool exact_indicator = source == MeanSource::exact_when_available && u.kind() == FieldKind::indicator;

    std::vector<Slot> slots(total);
    detail::parallel_for(total, spec.workers, [&](std::size_t idx) {
        BallProbe probe{centers[idx / radii.size()], radii[idx % radii.size()]};
        Ball ball(grid.dim, probe.center, probe.radius, true);
        Slot& slot = slots[idx];
        if (!omega.contains_closed_ball(ball).inside) {
            return;
        }
        ProbeOutcome& out = slot.outcome;
        out.index = idx;
        out.probe = probe;
        out.u = u.evaluate(probe.center);
        std::optional<double> exact;
        if (exact_indicator) {
            Ball open(grid.dim, probe.center, probe.radius, false);
            if (auto m = u.indicator_set().exact_ball_intersection(open)) {
                exact = *m / open.volume();
            }
        }
        if (exact) {
            out.mean = *exact;
            out.exact = true;
        } else {
            MeanEstimate e = mean_over_ball_unchecked(u, ball, probe_spec(spec, idx));
            out.mean = e.mean;
            out.stderr_ = e.stderr_;
            out.exact = e.exact;
        }
        if (out.u == 0 && out.mean == 0) {
            slot.status = Status::zero;
            return;
        }
        out.ratio = out.mean > 0 ? out.u / out.mean : inf;
        slot.status = Status::evaluated;
    });

    KEstimate est;
    est.probes_total = total;
    std::vector<ProbeOutcome> outcomes;
    for (auto const& s : slots) {
        switch (s.status) {
            case Status::inadmissible: ++est.skipped_containment; break;
            case Status::zero: ++est.skipped_zero; break;
            case Status::evaluated:
                ++est.probes_evaluated;
                est.stderr_max = std::max(est.stderr_max, s.outcome.stderr_);
                // Strict comparison keeps the lowest index among ties.
                if (!est.witness || s.outcome.ratio > est.ratio_max) {
                    est.ratio_max = s.outcome.ratio;
                    est.witness = s.outcome;
                }
                outcomes.push_back(s.outcome);
                break;
        }
    }
    est.K_hat = std::max(1.0, est.ratio_max);
    if (stats) {
        *stats = est;
    }
    return outcomes;
}

KEstimate estimate_K(Field const& u, ProbeGrid const& grid, QuadratureSpec const& spec, MeanSource source)
{
    KEstimate est;
    evaluate_probes(u, grid, spec, source, &est);
    return est;
}

CheckReport check_K(Field const& u, double K, ProbeGrid const& grid, QuadratureSpec const& spec, MeanSource source)
{
    if (!(K >= 1)) {
        throw InvalidInput("check_K requires K >= 1");
    }
    CheckReport rep;
    rep.K = K;
    for (auto const& o : evaluate_probes(u, grid, spec, source, &rep.estimate)) {
        double bound = K * (o.mean + 3 * o.stderr_);
        if (o.u > bound * (1 + 1e-12)) {
            rep.failures.push_back(o);
        }
    }
    rep.pass = rep.failures.empty();
    return rep;
}

//---------------------------------------------------------------------------//
DensityResult indicator_density(Region const& gamma, Region const& omega, ProbeGrid const& grid,
                                QuadratureSpec const& spec, double zero_tolerance)
{
    spec.validate();
    if (gamma.dim() != omega.dim() || grid.dim != omega.dim()) {
        throw InvalidInput("density regions and probe grid dimensions differ");
    }
    auto centers = grid.centers();
    auto radii = grid.radius_list();
    std::size_t total = centers.size() * radii.size();
    if (total == 0) {
        throw InvalidInput("probe grid is empty");
    }
    bool same = gamma == omega;
    Field chi = Field::indicator(omega, gamma);

    std::vector<Slot> slots(total);
    detail::parallel_for(total, spec.workers, [&](std::size_t idx) {
        BallProbe probe{centers[idx / radii.size()], radii[idx % radii.size()]};
        if (!gamma.contains(probe.center)) {
            return;
        }
        Ball closed(grid.dim, probe.center, probe.radius, true);
        if (!omega.contains_closed_ball(closed).inside) {
            return;
        }
        ProbeOutcome& out = slots[idx].outcome;
        out.index = idx;
        out.probe = probe;
        out.u = 1;
        if (same) {
            out.mean = 1;
            out.exact = true;
        } else {
            Ball open(grid.dim, probe.center, probe.radius, false);
            if (auto m = gamma.exact_ball_intersection(open)) {
                out.mean = *m / open.volume();
                out.exact = true;
            } else {
                MeanEstimate e = mean_over_ball_unchecked(chi, closed, probe_spec(spec, idx));
                out.mean = e.mean;
                out.stderr_ = e.stderr_;
            }
        }
        out.ratio = out.mean;
        slots[idx].status = Status::evaluated;
    });

    DensityResult res;
    for (auto const& s : slots) {
        if (s.status != Status::evaluated) {
            ++res.skipped;
            continue;
        }
        ++res.probes_evaluated;
        if (!res.witness || s.outcome.ratio < res.inf_ratio) {
            res.inf_ratio = s.outcome.ratio;
            res.witness = s.outcome;
        }
    }
    if (res.probes_evaluated == 0) {
        throw InvalidInput("no admissible density probe with center in Gamma");
    }
    res.compatible = res.inf_ratio > zero_tolerance;
    res.K = res.compatible ? 1.0 / res.inf_ratio : inf;
    return res;
}

double thm22_C_from_K(double K, MarkedSet const& d)
{
    if (!(K >= 1)) {
        throw InvalidInput("K must be >= 1");
    }
    return K * std::pow(d.outer_radius() / d.inner_radius(), d.dim());
}

double thm22_K_from_C(double C, MarkedSet const& d)
{
    if (!(C >= 1)) {
        throw InvalidInput("C must be >= 1");
    }
    return C * unit_ball_volume(d.dim()) * std::pow(d.outer_radius(), d.dim()) / d.measure().value;
}

//---------------------------------------------------------------------------//
double ScaleFunction::operator()(double k) const
{
    if (!(k > 0)) {
        throw InvalidInput("scale functions are defined on (0, inf)");
    }
    return std::exp(log_f(std::log(k)));
}

ScaleFunction ScaleFunction::linear(double c)
{
    if (!(c > 0)) {
        throw InvalidInput("linear scale function needs c > 0");
    }
    ScaleFunction f;
    f.name = "linear";
    double lc = std::log(c);
    f.log_f = [lc](double s) { return lc + s; };
    f.level_family = [c](double t, Window w) -> std::optional<RadiusSet> {
        if (t <= c) {
            return RadiusSet::full(w);
        }
        return std::nullopt;
    };
    return f;
}

ScaleFunction ScaleFunction::psi_example()
{
    ScaleFunction f;
    f.name = "psi_example";
    f.log_f = [](double s) {
        double mu = std::cosh(s);
        return s + std::log(1.5 + std::sin(2 * std::numbers::pi * mu));
    };
    return f;
}

ScaleFunction ScaleFunction::f1(double c, GapLaw law)
{
    if (!(c >= 1)) {
        throw InvalidInput("f1 needs c >= 1");
    }
    if (law.m0 < 2) {
        throw InvalidInput("f1 gaps start at m >= 2");
    }
    law.ratio_multiplier = 1;
    ScaleFunction f;
    f.name = "f1";
    double lc = std::log(c);
    f.log_f = [law, lc](double s) {
        double guess = std::sqrt(std::max(0.0, -s / (4 * std::numbers::ln2)));
        int c0 = static_cast<int>(guess);
        for (int m = std::max(law.m0, c0 - 3); m <= c0 + 3; ++m) {
            double a = law.ln_a(m);
            if (a < s && s < a + std::log(static_cast<double>(m))) {
                return s - std::log(static_cast<double>(m));
            }
        }
        return lc + s;
    };
    f.level_family = [law, c](double t, Window w) -> std::optional<RadiusSet> {
        if (!(t > 0) || t > c) {
            return std::nullopt;
        }
        // f1(k) >= t k fails exactly on the gaps with 1/m < t.
        GapLaw sub = law;
        sub.m0 = std::max(law.m0, static_cast<int>(std::floor(1.0 / t)) + 1);
        return RadiusSet::gap_sequence(sub, w);
    };
    return f;
}

//---------------------------------------------------------------------------//
std::vector<Matrix> orthogonal_probes(int dim, int rotations, bool reflections)
{
    require_dimension(dim);
    rotations = std::max(1, rotations);
    std::vector<Matrix> out;
    if (dim == 2) {
        for (int j = 0; j < rotations; ++j) {
            out.push_back(Similarity::rotation2d(2 * std::numbers::pi * j / rotations).orthogonal());
        }
        if (reflections) {
            for (int j = 0; j < rotations; ++j) {
                out.push_back(Similarity::reflection2d(std::numbers::pi * j / rotations).orthogonal());
            }
        }
        return out;
    }
    out.push_back(identity_matrix(3));
    for (Point axis : {Point{1, 0, 0}, Point{0, 1, 0}, Point{0, 0, 1}}) {
        for (int j = 1; j < rotations; ++j) {
            out.push_back(Similarity::rotation3d(axis, 2 * std::numbers::pi * j / rotations).orthogonal());
        }
    }
    if (reflections) {
        Matrix m = identity_matrix(3);
        m[8] = -1;
        out.push_back(m);
    }
    return out;
}

namespace {

bool image_admissible(Region const& omega, Region const& image, Point const& x)
{
    if (!omega.contains(x)) {
        return false;
    }
    for (auto const& prim : image.primitives()) {
        if (auto const* b = std::get_if<Ball>(&prim)) {
            Ball closed = *b;
            closed.closed = true;
            if (!omega.contains_closed_ball(closed).inside) {
                return false;
            }
        }
    }
    for (auto const& p : image.boundary_samples(2048)) {
        if (!omega.contains(p)) {
            return false;
        }
    }
    return true;
}

}  // namespace

GeneralizedEstimate generalized_test(Field const& u, MarkedSet const& d, ScaleFunction const* f,
                                     SimilarityGrid const& grid, QuadratureSpec const& spec)
{
    spec.validate();
    int dim = d.dim();
    if (u.dim() != dim) {
        throw InvalidInput("field and marked set dimensions differ");
    }
    std::vector<Point> centers;
    for (auto const& c : tensor_centers(dim, grid.lo, grid.hi, grid.centers_per_axis)) {
        if (!grid.center_region || grid.center_region->contains(c)) {
            centers.push_back(c);
        }
    }
    centers.insert(centers.end(), grid.extra_centers.begin(), grid.extra_centers.end());
    auto scales = log_spaced(grid.k_min, grid.k_max, grid.scales);

    // A ball centered at its marked point is rotation invariant.
    std::vector<Matrix> orth;
    auto const& prims = d.region().primitives();
    if (prims.size() == 1 && std::holds_alternative<Ball>(prims.front())
        && std::get<Ball>(prims.front()).center == d.marked()) {
        orth.push_back(identity_matrix(dim));
    } else {
        orth = orthogonal_probes(dim, grid.rotations, grid.reflections);
    }

    std::size_t no = orth.size();
    std::size_t ns = scales.size();
    std::size_t total = centers.size() * ns * no;
    if (total == 0) {
        throw InvalidInput("similarity grid is empty");
    }
    double md = d.measure().value;
    Region const& omega = u.domain();

    struct SimSlot {
        Status status = Status::inadmissible;
        SimilarityOutcome outcome;
    };
    std::vector<SimSlot> slots(total);
    detail::parallel_for(total, spec.workers, [&](std::size_t idx) {
        std::size_t ci = idx / (ns * no);
        std::size_t si = (idx / no) % ns;
        std::size_t oi = idx % no;
        double k = scales[si];
        Similarity h = Similarity::sending(dim, k, orth[oi], d.marked(), centers[ci]);
        Region image = d.region().transformed(h);
        if (!image_admissible(omega, image, centers[ci])) {
            return;
        }
        MeanEstimate e;
        try {
            e = mean_over_image(u, d, h, probe_spec(spec, idx));
        } catch (InvalidInput const&) {
            return;
        }
        SimilarityOutcome& out = slots[idx].outcome;
        out.index = idx;
        out.center = centers[ci];
        out.scale = k;
        out.orthogonal_index = oi;
        out.u = u.evaluate(centers[ci]);
        out.mean = e.mean;
        out.stderr_ = e.stderr_;
        if (out.u == 0 && out.mean == 0) {
            slots[idx].status = Status::zero;
            return;
        }
        double norm = 1.0;
        if (f) {
            // f(k)^n / m(h(D)) with m(h(D)) = k^n m(D)
            norm = std::exp(dim * (f->log_f(std::log(k)) - std::log(k))) / md;
        }
        out.ratio = out.mean > 0 ? out.u * norm / out.mean : inf;
        slots[idx].status = Status::evaluated;
    });

    GeneralizedEstimate est;
    est.probes_total = total;
    for (auto const& s : slots) {
        switch (s.status) {
            case Status::inadmissible: ++est.inadmissible; break;
            case Status::zero: ++est.skipped_zero; break;
            case Status::evaluated:
                ++est.probes_evaluated;
                est.stderr_max = std::max(est.stderr_max, s.outcome.stderr_);
                if (!est.witness || s.outcome.ratio > est.ratio_max) {
                    est.ratio_max = s.outcome.ratio;
                    est.witness = s.outcome;
                }
                break;
        }
    }
    est.vacuous = est.probes_evaluated == 0 && est.skipped_zero == 0;
    est.K_hat = std::max(1.0, est.ratio_max);
    return est;
}

//---------------------------------------------------------------------------//
namespace {

std::vector<double> sampled_ratios(ScaleFunction const& f, double llo, double lhi, int n,
                                   std::vector<double>& grid)
{
    if (n < 2) {
        throw InvalidInput("scale-function grid needs at least two points");
    }
    grid.resize(n);
    std::vector<double> ratios(n);
    for (int i = 0; i < n; ++i) {
        double s = llo + (lhi - llo) * i / (n - 1);
        double lf = f.log_f(s);
        if (std::isnan(lf) || lf == -inf) {
            throw InvalidInput("scale function is non-positive at k = " + std::to_string(std::exp(s)));
        }
        grid[i] = s;
        ratios[i] = std::exp(lf - s);
    }
    return ratios;
}

RadiusSet level_from_samples(std::vector<double> const& grid, std::vector<double> const& ratios, double t, Window w)
{
    std::vector<LogPiece> pieces;
    std::size_t n = grid.size();
    for (std::size_t i = 0; i < n;) {
        if (ratios[i] < t) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && ratios[j + 1] >= t) {
            ++j;
        }
        pieces.push_back({grid[i], grid[j]});
        i = j + 1;
    }
    return RadiusSet::sampled(std::move(pieces), w);
}

}  // namespace

RadiusSet sampled_level_set(ScaleFunction const& f, double t, Window window, int grid_points)
{
    window.validate();
    std::vector<double> grid;
    auto ratios = sampled_ratios(f, std::log(window.lo), std::log(window.hi), grid_points, grid);
    return level_from_samples(grid, ratios, t, window);
}

AdmissibilityReport f_admissibility(ScaleFunction const& f, Window window, std::vector<double> const& t_grid,
                                    double eps_threshold, int grid_points)
{
    window.validate();
    if (t_grid.empty()) {
        throw InvalidInput("t grid is empty");
    }
    AdmissibilityReport rep;
    rep.window = window;
    rep.asymptotic = static_cast<bool>(f.level_family);
    double llo = std::log(window.lo);
    double lhi = std::log(window.hi);
    std::vector<double> grid;
    auto ratios = sampled_ratios(f, llo, lhi, grid_points, grid);
    rep.c_min = *std::max_element(ratios.begin(), ratios.end());

    for (double t : t_grid) {
        if (!(t > 0)) {
            throw InvalidInput("t values must be positive");
        }
        LevelReport lr;
        lr.t = t;
        RadiusSet level = level_from_samples(grid, ratios, t, window);
        lr.nonempty = !level.pieces(llo, lhi).empty();
        if (lr.nonempty) {
            WindowEstimate we = window_estimate(level);
            lr.eps_star_window = we.eps_star;
            lr.gaps = we.gaps;
        } else {
            lr.eps_star_window = inf;
        }
        if (f.level_family) {
            auto fam = f.level_family(t, window);
            lr.eps_star_asymptotic = fam ? log_eps_net(*fam) : inf;
        }
        double eps = rep.asymptotic ? *lr.eps_star_asymptotic : lr.eps_star_window;
        bool ok = (rep.asymptotic || lr.nonempty) && eps <= eps_threshold && std::isfinite(eps);
        if (ok) {
            double c = std::max(rep.c_min, 1.0 / t);
            if (!rep.best_t || c < rep.c || (c == rep.c && t > *rep.best_t)) {
                rep.best_t = t;
                rep.c = c;
            }
        }
        rep.levels.push_back(lr);
    }
    rep.admissible = rep.best_t.has_value();
    if (rep.asymptotic) {
        rep.verdict = rep.admissible ? "admissible" : "not admissible";
    } else {
        rep.verdict = rep.admissible ? "admissible on window" : "not admissible on window";
    }
    if (!rep.admissible) {
        rep.c = rep.c_min;
    }

    // Largest log-gap of A_t as the lower window end moves toward 0.
    double tg = t_grid.front();
    if (rep.best_t) {
        tg = *rep.best_t;
    } else {
        bool found = false;
        for (double t : t_grid) {
            if (t <= rep.c_min && (!found || t > tg)) {
                tg = t;
                found = true;
            }
        }
        if (!found) {
            tg = *std::min_element(t_grid.begin(), t_grid.end());
        }
    }
    rep.gap_growth_t = tg;
    double span = lhi - llo;
    for (int j = 0; j < 6; ++j) {
        double lo_j = llo - span * j * j;
        if (lo_j < -700) {
            break;
        }
        Window w{std::exp(lo_j), window.hi};
        std::vector<double> g;
        auto r = sampled_ratios(f, lo_j, lhi, grid_points, g);
        RadiusSet level = level_from_samples(g, r, tg, w);
        double gap = level.pieces(lo_j, lhi).empty() ? inf : window_estimate(level).max_log_gap;
        rep.gap_growth.emplace_back(w.lo, gap);
    }
    return rep;
}

//---------------------------------------------------------------------------//
char const* to_string(PhiKind k)
{
    switch (k) {
        case PhiKind::boundary_H1: return "boundary_H1";
        case PhiKind::perimeter: return "perimeter";
        case PhiKind::isoperimetric_deficit: return "isoperimetric_deficit";
    }
    return "unknown";
}

PhiKind phi_kind_from_string(std::string const& s)
{
    if (s == "boundary_H1") {
        return PhiKind::boundary_H1;
    }
    if (s == "perimeter") {
        return PhiKind::perimeter;
    }
    if (s == "isoperimetric_deficit") {
        return PhiKind::isoperimetric_deficit;
    }
    throw InvalidInput("unknown phi functional \"" + s + "\"");
}

double phi_functional(PhiKind kind, Region const& d, Similarity const& h)
{
    if (d.dim() != 2 || d.primitives().size() != 1) {
        throw InvalidInput("phi functionals need a single planar disk, rectangle or polygon");
    }
    Region image = d.transformed(h);
    Primitive const& prim = image.primitives().front();
    double perimeter = 0;
    double area = 0;
    if (auto const* b = std::get_if<Ball>(&prim)) {
        if (kind == PhiKind::isoperimetric_deficit) {
            throw InvalidInput("isoperimetric deficit vanishes on a disk; D must not be a disk");
        }
        perimeter = 2 * std::numbers::pi * b->radius;
        area = b->volume();
    } else if (auto const* bx = std::get_if<Box>(&prim)) {
        double w = bx->hi[0] - bx->lo[0];
        double ht = bx->hi[1] - bx->lo[1];
        perimeter = 2 * (w + ht);
        area = w * ht;
    } else {
        auto const& poly = std::get<Polygon>(prim);
        perimeter = poly.perimeter();
        area = poly.area();
    }
    if (kind != PhiKind::isoperimetric_deficit) {
        return perimeter;
    }
    double deficit = perimeter * perimeter - 4 * std::numbers::pi * area;
    if (!(deficit > 0)) {
        throw InvalidInput("isoperimetric deficit is not positive for this shape");
    }
    return std::sqrt(deficit);
}

}  // namespace qns
