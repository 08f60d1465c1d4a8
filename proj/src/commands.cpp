#include "qns/commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <numbers>

#include "qns/counterexample.hpp"
#include "qns/errors.hpp"
#include "qns/qns_engine.hpp"
#include "qns/radius_sets.hpp"
#include "qns/random.hpp"
#include "qns/region_io.hpp"

namespace qns::commands {

namespace {

using nlohmann::json;
using io::format_double;
using io::parse_double;

constexpr char const* tool_version = "0.1.0";

//! Finite doubles as numbers; infinities and NaN as strings.
json num(double v)
{
    if (std::isfinite(v)) {
        return v;
    }
    return format_double(v);
}

json point2(Point const& p, int dim = 2)
{
    return io::point_to_json(p, dim);
}

std::string timestamp()
{
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::uint64_t get_seed(json const& cfg)
{
    if (!cfg.contains("seed")) {
        return 0;
    }
    json const& s = cfg.at("seed");
    if (s.is_number_unsigned()) {
        return s.get<std::uint64_t>();
    }
    if (s.is_number_integer() && s.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(s.get<std::int64_t>());
    }
    if (s.is_string()) {
        std::string str = s.get<std::string>();
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(str, &used);
        } catch (std::exception const&) {
            used = 0;
        }
        if (used == str.size() && used > 0 && str[0] != '-') {
            return v;
        }
    }
    throw InvalidInput("seed must be an unsigned 64-bit integer");
}

int get_int(json const& cfg, char const* key, int fallback)
{
    if (!cfg.contains(key)) {
        return fallback;
    }
    json const& v = cfg.at(key);
    if (v.is_number_integer()) {
        return v.get<int>();
    }
    if (v.is_number()) {
        double d = v.get<double>();
        if (d == std::floor(d) && std::abs(d) < 1e9) {
            return static_cast<int>(d);
        }
    }
    if (v.is_string()) {
        try {
            std::size_t used = 0;
            int i = std::stoi(v.get<std::string>(), &used);
            if (used == v.get<std::string>().size()) {
                return i;
            }
        } catch (std::exception const&) {
        }
    }
    throw InvalidInput(std::string("\"") + key + "\" must be an integer");
}

double get_double(json const& cfg, char const* key, double fallback)
{
    return cfg.contains(key) ? parse_double(cfg.at(key)) : fallback;
}

std::optional<double> get_opt(json const& cfg, char const* key)
{
    if (!cfg.contains(key) || cfg.at(key).is_null()) {
        return std::nullopt;
    }
    return parse_double(cfg.at(key));
}

std::string get_string(json const& cfg, char const* key, std::string fallback)
{
    if (!cfg.contains(key)) {
        return fallback;
    }
    if (!cfg.at(key).is_string()) {
        throw InvalidInput(std::string("\"") + key + "\" must be a string");
    }
    return cfg.at(key).get<std::string>();
}

std::optional<Window> get_window(json const& cfg)
{
    if (!cfg.contains("window")) {
        return std::nullopt;
    }
    json const& w = cfg.at("window");
    if (!w.is_array() || w.size() != 2) {
        throw InvalidInput("window must be [lo, hi]");
    }
    Window out{parse_double(w[0]), parse_double(w[1])};
    out.validate();
    return out;
}

int get_workers(json const& cfg)
{
    int w = get_int(cfg, "workers", 1);
    if (w < 1 || w > 1024) {
        throw InvalidInput("workers must lie in [1, 1024]");
    }
    return w;
}

//! Quadrature block {method, target_rel_err, max_samples} over defaults.
QuadratureSpec get_quadrature(json const& cfg, QuadratureSpec defaults, std::uint64_t seed, int workers)
{
    QuadratureSpec s = defaults;
    if (cfg.contains("quadrature")) {
        json const& q = cfg.at("quadrature");
        if (q.contains("method")) {
            s.method = quad_method_from_string(q.at("method").get<std::string>());
        }
        s.target_rel_err = get_double(q, "target_rel_err", s.target_rel_err);
        if (q.contains("max_samples")) {
            double m = parse_double(q.at("max_samples"));
            if (!(m >= 1) || m > 1e12) {
                throw InvalidInput("max_samples out of range");
            }
            s.max_samples = static_cast<std::uint64_t>(m);
        }
    }
    s.seed = seed;
    s.workers = workers;
    s.validate();
    return s;
}

json quadrature_json(QuadratureSpec const& s, double stderr_max)
{
    return {{"method", to_string(s.method)},
            {"target_rel_err", s.target_rel_err},
            {"max_samples", s.max_samples},
            {"stderr_max", num(stderr_max)}};
}

MarkedSet named_set(std::string const& name)
{
    if (name == "unit-square") {
        return MarkedSet::unit_square();
    }
    if (name == "unit-ball" || name == "unit-disk") {
        return MarkedSet::unit_ball(2);
    }
    if (name == "unit-ball-3d") {
        return MarkedSet::unit_ball(3);
    }
    if (name == "two-ball") {
        return MarkedSet::two_ball_union();
    }
    throw InvalidInput("unknown set \"" + name + "\" (unit-square, unit-ball, unit-ball-3d, two-ball)");
}

MarkedSet get_marked_set(json const& cfg, char const* key, std::string const& fallback)
{
    if (!cfg.contains(key)) {
        return named_set(fallback);
    }
    json const& s = cfg.at(key);
    if (s.is_string()) {
        return named_set(s.get<std::string>());
    }
    return io::marked_set_from_json(s);
}

//---------------------------------------------------------------------------//
Outcome analyze_set(json const& cfg)
{
    json set = cfg.contains("set") ? cfg.at("set") : cfg;
    if (auto w = get_window(cfg)) {
        set["window"] = {w->lo, w->hi};
    }
    RadiusSet a = radius_set_from_json(set);
    Classification c = classify(a);
    Outcome out;
    out.report = classification_to_json(c);
    out.report["verdict"] = to_string(c.favorable_all_open);
    out.report["set"] = a.descriptor();
    PorosityEstimate p = porosity(a);
    out.report["porosity"] = {{"p0_window", num(p.p0_window)},
                              {"i0_window", num(p.i0_window)},
                              {"i_inf_window", num(p.i_inf_window)}};
    return out;
}

ProbeGrid get_probe_grid(json const& cfg, Region const& omega)
{
    ProbeGrid g;
    g.dim = omega.dim();
    Box const& bb = omega.bounds();
    g.lo = bb.lo;
    g.hi = bb.hi;
    double extent = 0;
    for (int i = 0; i < g.dim; ++i) {
        extent = std::max(extent, bb.hi[i] - bb.lo[i]);
    }
    g.r_max = extent / 2;
    g.r_min = g.r_max * 1e-2;
    g.radii = 24;
    json p = cfg.contains("probes") ? cfg.at("probes") : json::object();
    if (p.contains("lo")) {
        g.lo = io::point_from_json(p.at("lo"), g.dim);
    }
    if (p.contains("hi")) {
        g.hi = io::point_from_json(p.at("hi"), g.dim);
    }
    g.centers_per_axis = get_int(p, "centers_per_axis", g.centers_per_axis);
    g.radii = get_int(p, "radii", g.radii);
    g.r_min = get_double(p, "r_min", g.r_min);
    g.r_max = get_double(p, "r_max", g.r_max);
    if (g.centers_per_axis < 1 || g.centers_per_axis > 1000 || g.radii < 0 || g.radii > 10'000
        || !(g.r_min > 0) || !(g.r_max >= g.r_min)) {
        throw InvalidInput("probe grid parameters out of range");
    }
    if (p.contains("center_region")) {
        g.center_region = io::region_from_json(p.at("center_region"));
    }
    for (auto const& c : p.value("extra_centers", json::array())) {
        g.extra_centers.push_back(io::point_from_json(c, g.dim));
    }
    for (auto const& r : p.value("extra_radii", json::array())) {
        g.extra_radii.push_back(parse_double(r));
    }
    return g;
}

json probe_json(ProbeOutcome const& o, int dim)
{
    return {{"center", point2(o.probe.center, dim)},
            {"radius", format_double(o.probe.radius)},
            {"u", num(o.u)},
            {"mean", num(o.mean)},
            {"stderr", num(o.stderr_)},
            {"ratio", num(o.ratio)},
            {"exact", o.exact}};
}

Outcome check_qns(json const& cfg, std::uint64_t seed, int workers)
{
    Region omega = io::region_from_json(io::require(cfg, "domain"));
    Field u = io::field_from_json(io::require(cfg, "field"), omega);
    ProbeGrid grid = get_probe_grid(cfg, omega);
    if (cfg.contains("radius_set")) {
        grid.radius_set = radius_set_from_json(cfg.at("radius_set"));
    }
    QuadratureSpec qd;
    qd.target_rel_err = 1e-2;
    qd.max_samples = 200'000;
    QuadratureSpec spec = get_quadrature(cfg, qd, derive_seed(seed, "check-qns"), workers);
    std::string src = get_string(cfg, "mean_source", "sampled");
    MeanSource source;
    if (src == "sampled") {
        source = MeanSource::sampled;
    } else if (src == "exact") {
        source = MeanSource::exact_when_available;
    } else {
        throw InvalidInput("mean_source must be \"sampled\" or \"exact\"");
    }
    std::optional<double> max_k = get_opt(cfg, "max_K");

    Outcome out;
    KEstimate est;
    std::vector<ProbeOutcome> failures;
    if (max_k) {
        CheckReport rep = check_K(u, *max_k, grid, spec, source);
        est = rep.estimate;
        failures = std::move(rep.failures);
    } else {
        est = estimate_K(u, grid, spec, source);
    }
    if (est.probes_evaluated == 0 && est.skipped_containment == est.probes_total) {
        throw InvalidInput("no probe ball fits inside the domain");
    }
    json& r = out.report;
    r["K_hat"] = num(est.K_hat);
    r["ratio_max"] = num(est.ratio_max);
    r["note"] = "K_hat is a certified lower bound; pass verdicts use 3 stderr slack";
    if (est.witness) {
        r["witness"] = probe_json(*est.witness, grid.dim);
    } else {
        r["witness"] = nullptr;
    }
    r["probes"] = {{"total", est.probes_total},
                   {"evaluated", est.probes_evaluated},
                   {"skipped_containment", est.skipped_containment},
                   {"skipped_zero", est.skipped_zero},
                   {"mean_source", src}};
    r["quadrature"] = quadrature_json(spec, est.stderr_max);
    if (max_k) {
        r["max_K"] = *max_k;
        r["verdict"] = failures.empty() ? "pass" : "fail";
        json f = json::array();
        for (std::size_t i = 0; i < failures.size() && i < 20; ++i) {
            f.push_back(probe_json(failures[i], grid.dim));
        }
        r["failures"] = std::move(f);
        r["failure_count"] = failures.size();
        out.exit_code = failures.empty() ? 0 : 1;
    } else {
        r["verdict"] = "estimated";
    }
    return out;
}

//---------------------------------------------------------------------------//
json not_qns_json(NotQnsReport const& r)
{
    json rows = json::array();
    for (auto const& row : r.rows) {
        rows.push_back({{"m", row.m},
                        {"mean", num(row.mean)},
                        {"stderr", num(row.stderr_)},
                        {"expected", num(row.expected)},
                        {"exact_mean", num(row.exact_mean)},
                        {"within_3_stderr", row.within},
                        {"implied_K", num(row.implied_K)},
                        {"measured_K", num(row.measured_K)}});
    }
    return {{"pass", r.pass}, {"implied_K_increasing", r.increasing}, {"rows", rows}};
}

json local_probe_json(std::optional<LocalProbe> const& p)
{
    if (!p) {
        return nullptr;
    }
    return {{"m", p->m},
            {"center_local", point2(p->center)},
            {"radius_local", format_double(p->radius)},
            {"mean", num(p->mean)},
            {"ratio", num(p->ratio)}};
}

json admissibility_json(AdmissibilityReport const& a)
{
    json levels = json::array();
    for (auto const& l : a.levels) {
        json lj = {{"t", l.t},
                   {"nonempty", l.nonempty},
                   {"eps_star_window", num(l.eps_star_window)},
                   {"gaps", l.gaps}};
        if (l.eps_star_asymptotic) {
            lj["eps_star_asymptotic"] = num(*l.eps_star_asymptotic);
        }
        levels.push_back(std::move(lj));
    }
    json growth = json::array();
    for (auto const& [lo, gap] : a.gap_growth) {
        growth.push_back({{"window_lo", format_double(lo)}, {"max_log_gap", num(gap)}});
    }
    json out = {{"verdict", a.verdict},
                {"admissible", a.admissible},
                {"asymptotic", a.asymptotic},
                {"c_min", num(a.c_min)},
                {"c", num(a.c)},
                {"best_t", a.best_t ? json(*a.best_t) : json(nullptr)},
                {"levels", levels},
                {"gap_growth_t", a.gap_growth_t},
                {"gap_growth", growth},
                {"window", {a.window.lo, a.window.hi}}};
    return out;
}

std::vector<double> get_t_grid(json const& cfg)
{
    std::vector<double> t{0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 2.5};
    if (cfg.contains("t_grid")) {
        t.clear();
        for (auto const& v : cfg.at("t_grid")) {
            t.push_back(parse_double(v));
        }
    }
    return t;
}

Outcome counterexample(json const& cfg, std::uint64_t seed, int workers)
{
    int N0 = get_int(cfg, "N0", 3);
    int M = get_int(cfg, "M", 5);
    std::string variant = get_string(cfg, "variant", "gaps");
    QuadratureSpec qd;
    qd.target_rel_err = 2e-3;
    qd.max_samples = 2'000'000;
    QuadratureSpec spec = get_quadrature(cfg, qd, derive_seed(seed, "counterexample"), workers);

    Outcome out;
    json& r = out.report;
    r["variant"] = variant;
    r["N0"] = N0;
    r["M"] = M;
    r["quadrature"] = quadrature_json(spec, 0);
    if (variant == "gaps") {
        auto domain = CounterexampleDomain::build(default_sequences(N0, M));
        NotQnsReport nq = certify_not_qns(domain, spec);
        RadiusSet a = cfg.contains("radius_set") ? radius_set_from_json(cfg.at("radius_set"))
                                                 : default_gap_complement(N0);
        RestrictedOptions opt;
        if (cfg.contains("restricted")) {
            json const& o = cfg.at("restricted");
            opt.rings = get_int(o, "rings", opt.rings);
            opt.angles = get_int(o, "angles", opt.angles);
            opt.radii = get_int(o, "radii", opt.radii);
            opt.cross_checks = get_int(o, "cross_checks", opt.cross_checks);
        }
        RestrictedReport rr = certify_restricted_qns(domain, a, opt, spec);
        r["not_qns"] = not_qns_json(nq);
        json ks = json::array();
        for (auto const& row : nq.rows) {
            ks.push_back(num(row.implied_K));
        }
        r["implied_K"] = ks;
        r["restricted"] = {{"pass", rr.pass},
                           {"K", rr.K},
                           {"probes_total", rr.probes_total},
                           {"probes_admissible", rr.probes_admissible},
                           {"failures", rr.failures},
                           {"ratio_max", num(rr.ratio_max)},
                           {"witness", local_probe_json(rr.witness)},
                           {"sharp", rr.sharp},
                           {"dichotomy_probes", rr.dichotomy_probes},
                           {"dichotomy_violations", rr.dichotomy_violations},
                           {"cross_check_pass", rr.cross_check_pass},
                           {"cross_check_max_z", num(rr.cross_check_max_z)},
                           {"radius_set", a.descriptor()},
                           {"radius_set_classification", classification_to_json(rr.avoided_set)}};
        bool ok = nq.pass && rr.pass;
        r["verdict"] = ok ? "pass" : "fail";
        out.exit_code = ok ? 0 : 1;
        out.artifacts.push_back({"domain.json", domain.to_json().dump(2) + "\n"});
        out.artifacts.push_back({"implied_k.csv", implied_k_csv(domain, nq)});
        return out;
    }
    if (variant != "f1") {
        throw InvalidInput("variant must be \"gaps\" or \"f1\"");
    }
    double c = get_double(cfg, "c", 1.0);
    MarkedSet d = get_marked_set(cfg, "D", "unit-ball");
    F1Counterexample fx = build_f1_counterexample(N0, M, c, d);
    NotQnsReport nq = certify_not_qns(fx.domain, spec);
    F1MeanReport e = certify_f1_mean(fx, {}, spec);
    Window w = get_window(cfg).value_or(Window{1e-3, 1e3});
    AdmissibilityReport adm = f_admissibility(fx.f1, w, get_t_grid(cfg), std::numeric_limits<double>::infinity(),
                                              get_int(cfg, "grid_points", 20'001));
    r["n0"] = {{"as_written", fx.n0_as_written}, {"reversed", fx.n0_reversed}, {"configured", N0}};
    r["c"] = c;
    r["not_qns"] = not_qns_json(nq);
    r["f1_mean"] = {{"pass", e.pass},
                {"K", num(e.K)},
                {"ratio_max", num(e.ratio_max)},
                {"probes_total", e.probes_total},
                {"probes_admissible", e.probes_admissible},
                {"witness", local_probe_json(e.witness)},
                {"cross_check_pass", e.cross_check_pass},
                {"cross_check_z", num(e.cross_check_z)}};
    r["admissibility"] = admissibility_json(adm);
    bool ok = nq.pass && e.pass && !adm.admissible;
    r["verdict"] = ok ? "pass" : "fail";
    out.exit_code = ok ? 0 : 1;
    out.artifacts.push_back({"domain.json", fx.domain.to_json().dump(2) + "\n"});
    out.artifacts.push_back({"implied_k.csv", implied_k_csv(fx.domain, nq)});
    return out;
}

//---------------------------------------------------------------------------//
Outcome constants(json const& cfg, std::uint64_t seed, int workers)
{
    Outcome out;
    json& r = out.report;
    double lc = lens_constant();
    // Sampled route: fraction of B((1,0),1) inside B(0,1).
    Region around = Region::ball(2, {1, 0, 0}, 1, true);
    Field chi = Field::indicator(around, Region::ball(2, {0, 0, 0}, 1));
    QuadratureSpec qs;
    qs.method = QuadMethod::mc;
    qs.target_rel_err = 1e-6;
    qs.max_samples = static_cast<std::uint64_t>(get_double(cfg, "lens_samples", 1e6));
    qs.seed = derive_seed(seed, "constants-lens");
    qs.workers = workers;
    qs.validate();
    MeanEstimate mc = mean_over_ball_unchecked(chi, Ball(2, {1, 0, 0}, 1, true), qs);
    r["lens_constant"] = lc;
    r["lens_K"] = 1 / lc;
    r["lens_area_unit"] = lens_area(1, 1, 1);
    r["lens_constant_mc"] = {{"mean", mc.mean},
                             {"stderr", mc.stderr_},
                             {"samples", mc.samples},
                             {"abs_error", std::abs(mc.mean - lc)}};
    std::optional<double> K = get_opt(cfg, "K");
    std::optional<double> C = get_opt(cfg, "C");
    if (cfg.contains("set") || K || C) {
        MarkedSet d = get_marked_set(cfg, "set", "unit-ball");
        r["set"] = {{"outer_radius", d.outer_radius()},
                    {"inner_radius", d.inner_radius()},
                    {"inner_radius_exact", d.inner_radius_exact()},
                    {"measure", d.measure().value},
                    {"measure_exact", d.measure().exact}};
        if (K) {
            if (!(*K >= 1)) {
                throw InvalidInput("K must be >= 1");
            }
            double c = thm22_C_from_K(*K, d);
            r["C_from_K"] = c;
            r["K_round_trip"] = thm22_K_from_C(c, d);
        }
        if (C) {
            if (!(*C >= 1)) {
                throw InvalidInput("C must be >= 1");
            }
            r["K_from_C"] = thm22_K_from_C(*C, d);
        }
    }
    r["verdict"] = "ok";
    return out;
}

ScaleFunction get_function(json const& cfg)
{
    json f = cfg.contains("function") ? cfg.at("function") : json("psi");
    std::string name = f.is_string() ? f.get<std::string>() : io::require(f, "name").get<std::string>();
    json params = f.is_object() && f.contains("params") ? f.at("params") : json::object();
    if (name == "linear") {
        return ScaleFunction::linear(get_double(params, "c", 1.0));
    }
    if (name == "psi") {
        return ScaleFunction::psi_example();
    }
    if (name == "f1") {
        GapLaw law{get_double(params, "a_divisor", 12), 1, get_int(params, "m0", 2)};
        return ScaleFunction::f1(get_double(params, "c", 1.0), law);
    }
    throw InvalidInput("unknown function \"" + name + "\" (linear, psi, f1)");
}

Outcome analyze_f(json const& cfg)
{
    ScaleFunction f = get_function(cfg);
    Window w = get_window(cfg).value_or(Window{1e-3, 1e3});
    double eps = get_opt(cfg, "eps_threshold").value_or(std::numeric_limits<double>::infinity());
    int points = get_int(cfg, "grid_points", 200'001);
    if (points < 2 || points > 50'000'000) {
        throw InvalidInput("grid_points out of range");
    }
    AdmissibilityReport a = f_admissibility(f, w, get_t_grid(cfg), eps, points);
    Outcome out;
    out.report = admissibility_json(a);
    out.report["function"] = f.name;
    out.report["grid_points"] = points;
    return out;
}

Outcome phi(json const& cfg)
{
    PhiKind kind = phi_kind_from_string(get_string(cfg, "kind", "perimeter"));
    Region d = [&] {
        if (!cfg.contains("D")) {
            return MarkedSet::unit_square().region();
        }
        json const& s = cfg.at("D");
        return s.is_string() ? named_set(s.get<std::string>()).region() : io::region_from_json(s);
    }();
    Similarity h = cfg.contains("similarity")
                       ? io::similarity_from_json(cfg.at("similarity"), d.dim())
                       : Similarity::rotation2d(get_double(cfg, "angle", 0), get_double(cfg, "scale", 1));
    double v = phi_functional(kind, d, h);
    double v0 = phi_functional(kind, d, Similarity::identity(d.dim()));
    Outcome out;
    out.report = {{"kind", to_string(kind)},
                  {"scale", h.scale()},
                  {"phi", v},
                  {"phi_identity", v0},
                  {"homogeneity_ratio", v / (h.scale() * v0)},
                  {"verdict", "ok"}};
    return out;
}

}  // namespace

//---------------------------------------------------------------------------//
std::vector<std::string> const& command_names()
{
    static std::vector<std::string> const names{"analyze-set", "check-qns", "counterexample",
                                                "constants",   "analyze-f", "phi"};
    return names;
}

std::string canonical_report(json const& report)
{
    json r = report;
    r.erase("timestamp");
    return r.dump();
}

namespace {

void stamp(Outcome& out, std::string const& command, std::uint64_t seed, int workers)
{
    out.report["command"] = command;
    out.report["seed"] = std::to_string(seed);
    out.report["worker_count"] = workers;
    out.report["version"] = tool_version;
    out.report["timestamp"] = timestamp();
}

}  // namespace

char const* version()
{
    return tool_version;
}

Outcome run_text(std::string const& command, std::string const& config_text)
{
    json cfg;
    try {
        cfg = json::parse(config_text);
    } catch (json::parse_error const& e) {
        Outcome out{2,
                    {{"error", std::string("config is not valid JSON: ") + e.what()},
                     {"error_kind", "invalid_input"},
                     {"verdict", "error"}},
                    {}};
        stamp(out, command, 0, 1);
        return out;
    }
    return run(command, cfg);
}

Outcome run(std::string const& command, json const& config)
{
    Outcome out;
    std::uint64_t seed = 0;
    int workers = 1;
    try {
        if (!config.is_object()) {
            throw InvalidInput("config must be a JSON object");
        }
        seed = get_seed(config);
        workers = get_workers(config);
        if (command == "analyze-set") {
            out = analyze_set(config);
        } else if (command == "check-qns") {
            out = check_qns(config, seed, workers);
        } else if (command == "counterexample") {
            out = counterexample(config, seed, workers);
        } else if (command == "constants") {
            out = constants(config, seed, workers);
        } else if (command == "analyze-f") {
            out = analyze_f(config);
        } else if (command == "phi") {
            out = phi(config);
        } else {
            throw InvalidInput("unknown command \"" + command + "\"");
        }
    } catch (InvalidInput const& e) {
        out = {2, {{"error", e.what()}, {"error_kind", "invalid_input"}, {"verdict", "error"}}, {}};
    } catch (ConstructionError const& e) {
        out = {2, {{"error", e.what()}, {"error_kind", "construction"}, {"verdict", "error"}}, {}};
    } catch (nlohmann::json::exception const& e) {
        out = {2, {{"error", e.what()}, {"error_kind", "invalid_input"}, {"verdict", "error"}}, {}};
    }
    stamp(out, command, seed, workers);
    return out;
}

}  // namespace qns::commands
