#include "qns/radius_sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qns/errors.hpp"
#include "qns/region_io.hpp"

namespace qns {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr std::size_t max_pieces = 2'000'000;

double ln16()
{
    return 4 * std::numbers::ln2;
}

bool same_log(double a, double b)
{
    return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b));
}

std::vector<LogPiece> merge(std::vector<LogPiece> v)
{
    std::sort(v.begin(), v.end(), [](LogPiece const& a, LogPiece const& b) { return a.lo < b.lo; });
    std::vector<LogPiece> out;
    for (auto const& p : v) {
        if (!out.empty() && p.lo <= out.back().hi) {
            out.back().hi = std::max(out.back().hi, p.hi);
        } else {
            out.push_back(p);
        }
    }
    return out;
}

std::vector<LogPiece> clip(std::vector<LogPiece> const& v, double lo, double hi)
{
    std::vector<LogPiece> out;
    for (auto const& p : v) {
        double a = std::max(p.lo, lo);
        double b = std::min(p.hi, hi);
        if (a <= b) {
            out.push_back({a, b});
        }
    }
    return out;
}

}  // namespace

//---------------------------------------------------------------------------//
void Window::validate() const
{
    if (!(lo > 0) || !(hi > lo) || !std::isfinite(hi)) {
        throw InvalidInput("window must satisfy 0 < lo < hi < inf");
    }
}

double GapLaw::ln_a(int m) const
{
    double v = -static_cast<double>(m) * m * ln16();
    if (a_divisor > 0) {
        v -= std::log(a_divisor * m);
    }
    return v;
}

double GapLaw::ln_b(int m) const
{
    return ln_a(m) + std::log(ratio_multiplier * m);
}

//---------------------------------------------------------------------------//
struct RadiusSet::Impl {
    virtual ~Impl() = default;
    virtual Form form() const { return Form::family; }
    virtual bool window_only() const { return false; }
    virtual std::vector<LogPiece> pieces(double lo, double hi) const = 0;
    virtual std::optional<double> predecessor(double s) const = 0;
    virtual std::optional<Asymptotics> asymptotics() const = 0;
    virtual nlohmann::json descriptor() const = 0;
};

namespace {

using Impl = RadiusSet::Impl;
using nlohmann::json;

// Explicit sorted pieces: finite lists, interval unions and sampled sets.
struct ExplicitSet final : Impl {
    std::vector<LogPiece> merged;
    RadiusSet::Form kind;
    bool sampled = false;

    RadiusSet::Form form() const override { return kind; }
    bool window_only() const override { return sampled; }

    std::vector<LogPiece> pieces(double lo, double hi) const override { return clip(merged, lo, hi); }

    std::optional<double> predecessor(double s) const override
    {
        std::optional<double> best;
        for (auto const& p : merged) {
            if (p.lo > s) {
                break;
            }
            best = std::min(p.hi, s);
        }
        return best;
    }

    std::optional<Asymptotics> asymptotics() const override
    {
        if (sampled) {
            return std::nullopt;
        }
        Asymptotics a{0, 0, 0};
        if (merged.front().lo > -inf) {
            a.L0 = inf;
            a.ln_C = inf;
        }
        if (merged.back().hi < inf) {
            a.Linf = inf;
            a.ln_C = inf;
        }
        for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
            a.ln_C = std::max(a.ln_C, merged[i + 1].lo - merged[i].hi);
        }
        return a;
    }

    json descriptor() const override
    {
        json out;
        if (kind == RadiusSet::Form::list) {
            json el = json::array();
            for (auto const& p : merged) {
                el.push_back(io::format_double(std::exp(p.lo)));
            }
            out["form"] = "list";
            out["elements"] = std::move(el);
        } else {
            json iv = json::array();
            for (auto const& p : merged) {
                iv.push_back({io::format_double(std::exp(p.lo)), io::format_double(std::exp(p.hi))});
            }
            out["form"] = "intervals";
            out["intervals"] = std::move(iv);
            if (sampled) {
                out["window_only"] = true;
            }
        }
        return out;
    }
};

struct Geometric final : Impl {
    double ln_c;
    double ln_q;
    double c, q;

    double element(double k) const { return ln_c + k * ln_q; }

    std::vector<LogPiece> pieces(double lo, double hi) const override
    {
        double k0 = std::ceil((lo - ln_c) / ln_q);
        double k1 = std::floor((hi - ln_c) / ln_q);
        if (k1 - k0 > static_cast<double>(max_pieces)) {
            throw InvalidInput("window holds too many elements of the geometric family");
        }
        std::vector<LogPiece> out;
        for (double k = k0; k <= k1; ++k) {
            double e = element(k);
            if (e >= lo && e <= hi) {
                out.push_back({e, e});
            }
        }
        return out;
    }

    std::optional<double> predecessor(double s) const override
    {
        double k = std::floor((s - ln_c) / ln_q);
        while (element(k) > s) {
            k -= 1;
        }
        while (element(k + 1) <= s) {
            k += 1;
        }
        return element(k);
    }

    std::optional<Asymptotics> asymptotics() const override { return Asymptotics{ln_q, ln_q, ln_q}; }

    json descriptor() const override
    {
        return {{"form", "family"}, {"family", {{"name", "geometric"}, {"params", {{"c", c}, {"q", q}}}}}};
    }
};

struct Blocks final : Impl {
    double ln_alpha;
    double ell;  // -ln beta
    double alpha, beta;

    bool covers() const { return ln_alpha >= ell; }

    std::vector<LogPiece> pieces(double lo, double hi) const override
    {
        if (covers()) {
            return {{lo, hi}};
        }
        // Piece k is [-k ell, ln alpha - k ell].
        double k_first = std::ceil(-(hi) / ell);
        double k_last = std::floor((ln_alpha - lo) / ell);
        if (k_last - k_first > static_cast<double>(max_pieces)) {
            throw InvalidInput("window holds too many blocks");
        }
        std::vector<LogPiece> out;
        for (double k = k_last; k >= k_first; --k) {
            out.push_back({-k * ell, ln_alpha - k * ell});
        }
        return clip(merge(out), lo, hi);
    }

    std::optional<double> predecessor(double s) const override
    {
        if (covers()) {
            return s;
        }
        double k = std::ceil(-s / ell);
        while (-k * ell > s) {
            k += 1;
        }
        double top = ln_alpha - k * ell;
        return std::min(s, top);
    }

    std::optional<Asymptotics> asymptotics() const override
    {
        double g = covers() ? 0.0 : ell - ln_alpha;
        return Asymptotics{g, g, g};
    }

    json descriptor() const override
    {
        return {{"form", "family"},
                {"family", {{"name", "blocks"}, {"params", {{"alpha", alpha}, {"beta", beta}}}}}};
    }
};

struct SuperGeometric final : Impl {
    double p;

    double element(double m) const { return -std::pow(m, p); }

    std::vector<LogPiece> pieces(double lo, double hi) const override
    {
        std::vector<LogPiece> out;
        double m_lo = std::max(1.0, std::ceil(std::pow(std::max(0.0, -hi), 1.0 / p)) - 1);
        for (double m = m_lo;; ++m) {
            double e = element(m);
            if (e < lo) {
                break;
            }
            if (e <= hi) {
                out.push_back({e, e});
            }
            if (out.size() > max_pieces) {
                throw InvalidInput("window holds too many super-geometric elements");
            }
        }
        std::reverse(out.begin(), out.end());
        return out;
    }

    std::optional<double> predecessor(double s) const override
    {
        if (s >= -1) {
            return -1.0;
        }
        double m = std::max(1.0, std::ceil(std::pow(-s, 1.0 / p)));
        while (element(m) > s) {
            m += 1;
        }
        while (m > 1 && element(m - 1) <= s) {
            m -= 1;
        }
        return element(m);
    }

    std::optional<Asymptotics> asymptotics() const override
    {
        double l0 = p > 1 ? inf : (p == 1 ? 1.0 : 0.0);
        return Asymptotics{inf, l0, inf};
    }

    json descriptor() const override
    {
        return {{"form", "family"}, {"family", {{"name", "super_geometric"}, {"params", {{"p", p}}}}}};
    }
};

struct Full final : Impl {
    std::vector<LogPiece> pieces(double lo, double hi) const override { return {{lo, hi}}; }
    std::optional<double> predecessor(double s) const override { return s; }
    std::optional<Asymptotics> asymptotics() const override { return Asymptotics{0, 0, 0}; }
    json descriptor() const override { return {{"form", "family"}, {"family", {{"name", "full"}}}}; }
};

struct GapSequence final : Impl {
    GapLaw law;

    // Largest index whose gap lies entirely below s is irrelevant; scan the
    // few indices whose gaps can contain s.
    int index_near(double s) const
    {
        double m = std::sqrt(std::max(0.0, -s / ln16()));
        return std::max(law.m0, static_cast<int>(m));
    }

    std::vector<LogPiece> pieces(double lo, double hi) const override
    {
        std::vector<LogPiece> gaps;
        for (int m = law.m0;; ++m) {
            double ga = law.ln_a(m);
            double gb = law.ln_b(m);
            if (gb <= lo) {
                break;
            }
            if (ga < hi) {
                gaps.push_back({ga, gb});
            }
            if (m - law.m0 > 100'000) {
                throw InvalidInput("gap sequence window too deep");
            }
        }
        std::reverse(gaps.begin(), gaps.end());
        std::vector<LogPiece> out;
        double cursor = lo;
        for (auto const& g : gaps) {
            if (g.lo >= cursor) {
                out.push_back({cursor, std::min(g.lo, hi)});
            }
            cursor = std::max(cursor, g.hi);
        }
        if (cursor <= hi) {
            out.push_back({cursor, hi});
        }
        return clip(out, lo, hi);
    }

    std::optional<double> predecessor(double s) const override
    {
        int c = index_near(s);
        for (int m = std::max(law.m0, c - 2); m <= c + 2; ++m) {
            if (law.ln_a(m) < s && s < law.ln_b(m)) {
                return law.ln_a(m);
            }
        }
        return s;
    }

    std::optional<Asymptotics> asymptotics() const override { return Asymptotics{inf, inf, 0}; }

    json descriptor() const override
    {
        return {{"form", "family"},
                {"family",
                 {{"name", "gap_sequence"},
                  {"params",
                   {{"a_divisor", law.a_divisor}, {"ratio_multiplier", law.ratio_multiplier}, {"m0", law.m0}}}}}};
    }
};

struct Rescaled final : Impl {
    std::shared_ptr<Impl const> base;
    double ln_alpha;
    double beta;
    double alpha;

    double fwd(double s) const { return ln_alpha + beta * s; }
    double back(double s) const { return (s - ln_alpha) / beta; }

    RadiusSet::Form form() const override { return base->form(); }
    bool window_only() const override { return base->window_only(); }

    std::vector<LogPiece> pieces(double lo, double hi) const override
    {
        auto v = base->pieces(back(lo), back(hi));
        for (auto& p : v) {
            p = {fwd(p.lo), fwd(p.hi)};
        }
        return clip(v, lo, hi);
    }

    std::optional<double> predecessor(double s) const override
    {
        // back(s) can round just below an element of the base set.
        double t = back(s);
        auto p = base->predecessor(t + 1e-13 * std::max(1.0, std::abs(t)));
        if (!p) {
            return std::nullopt;
        }
        return std::min(s, fwd(*p));
    }

    std::optional<Asymptotics> asymptotics() const override
    {
        auto a = base->asymptotics();
        if (!a) {
            return std::nullopt;
        }
        return Asymptotics{a->ln_C * beta, a->L0 * beta, a->Linf * beta};
    }

    json descriptor() const override
    {
        json b = base->descriptor();
        json fam = {{"name", "rescaled"}, {"params", {{"alpha", alpha}, {"beta", beta}}}, {"base", b}};
        return {{"form", "family"}, {"family", std::move(fam)}};
    }
};

std::shared_ptr<ExplicitSet> explicit_set(std::vector<LogPiece> pieces, RadiusSet::Form kind)
{
    if (pieces.empty()) {
        throw InvalidInput("radius set is empty");
    }
    auto impl = std::make_shared<ExplicitSet>();
    impl->merged = merge(std::move(pieces));
    impl->kind = kind;
    return impl;
}

}  // namespace

//---------------------------------------------------------------------------//
RadiusSet::RadiusSet(std::shared_ptr<Impl const> impl, Window w) : impl_(std::move(impl)), window_(w)
{
    window_.validate();
}

RadiusSet RadiusSet::list(std::vector<double> elements, Window w)
{
    std::vector<LogPiece> pieces;
    for (double x : elements) {
        if (!(x > 0) || !std::isfinite(x)) {
            throw InvalidInput("radius set elements must be positive and finite");
        }
        pieces.push_back({std::log(x), std::log(x)});
    }
    return RadiusSet(explicit_set(std::move(pieces), Form::list), w);
}

RadiusSet RadiusSet::intervals(std::vector<std::pair<double, double>> ivals, Window w)
{
    std::vector<LogPiece> pieces;
    for (auto [a, b] : ivals) {
        if (!(a >= 0) || !(b >= a) || !(b > 0)) {
            throw InvalidInput("intervals must satisfy 0 <= lo <= hi, hi > 0");
        }
        pieces.push_back({a == 0 ? -inf : std::log(a), std::log(b)});
    }
    return RadiusSet(explicit_set(std::move(pieces), Form::intervals), w);
}

RadiusSet RadiusSet::geometric(double c, double q, Window w)
{
    if (!(c > 0) || !(q > 1) || !std::isfinite(c) || !std::isfinite(q)) {
        throw InvalidInput("geometric family needs c > 0 and q > 1");
    }
    auto impl = std::make_shared<Geometric>();
    impl->ln_c = std::log(c);
    impl->ln_q = std::log(q);
    impl->c = c;
    impl->q = q;
    return RadiusSet(std::move(impl), w);
}

RadiusSet RadiusSet::blocks(double alpha, double beta, Window w)
{
    if (!(beta > 0 && beta < 1) || !(alpha >= 1) || !std::isfinite(alpha)) {
        throw InvalidInput("blocks family needs 0 < beta < 1 <= alpha");
    }
    auto impl = std::make_shared<Blocks>();
    impl->ln_alpha = std::log(alpha);
    impl->ell = -std::log(beta);
    impl->alpha = alpha;
    impl->beta = beta;
    return RadiusSet(std::move(impl), w);
}

RadiusSet RadiusSet::super_geometric(double p, Window w)
{
    if (!(p > 0) || !std::isfinite(p)) {
        throw InvalidInput("super-geometric family needs p > 0");
    }
    auto impl = std::make_shared<SuperGeometric>();
    impl->p = p;
    return RadiusSet(std::move(impl), w);
}

RadiusSet RadiusSet::full(Window w)
{
    return RadiusSet(std::make_shared<Full>(), w);
}

RadiusSet RadiusSet::gap_sequence(GapLaw law, Window w)
{
    if (law.m0 < 1 || law.a_divisor < 0 || !(law.ratio_multiplier > 0)) {
        throw InvalidInput("gap law needs m0 >= 1, a_divisor >= 0, ratio_multiplier > 0");
    }
    // Gaps must be disjoint and decreasing: b_{m+1} < a_m for the indices used.
    for (int m = law.m0; m < law.m0 + 64; ++m) {
        if (!(law.ln_b(m + 1) < law.ln_a(m)) || !(law.ln_a(m) < law.ln_b(m))) {
            throw InvalidInput("gap law violates b_{m+1} < a_m < b_m at m = " + std::to_string(m));
        }
    }
    auto impl = std::make_shared<GapSequence>();
    impl->law = law;
    return RadiusSet(std::move(impl), w);
}

RadiusSet RadiusSet::sampled(std::vector<LogPiece> pieces, Window w)
{
    w.validate();
    auto impl = std::make_shared<ExplicitSet>();
    impl->merged = clip(merge(std::move(pieces)), std::log(w.lo), std::log(w.hi));
    impl->kind = Form::intervals;
    impl->sampled = true;
    return RadiusSet(std::move(impl), w);
}

RadiusSet RadiusSet::rescaled(double alpha, double beta) const
{
    if (!(alpha > 0) || !(beta > 0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
        throw InvalidInput("rescaling needs alpha > 0 and beta > 0");
    }
    auto impl = std::make_shared<Rescaled>();
    impl->base = impl_;
    impl->ln_alpha = std::log(alpha);
    impl->beta = beta;
    impl->alpha = alpha;
    Window w{alpha * std::pow(window_.lo, beta), alpha * std::pow(window_.hi, beta)};
    return RadiusSet(std::move(impl), w);
}

RadiusSet RadiusSet::with_window(Window w) const
{
    return RadiusSet(impl_, w);
}

RadiusSet::Form RadiusSet::form() const
{
    return impl_->form();
}

bool RadiusSet::window_only() const
{
    return impl_->window_only();
}

bool RadiusSet::contains(double x) const
{
    if (!(x > 0)) {
        return false;
    }
    double s = std::log(x);
    auto p = impl_->predecessor(s);
    return p && same_log(*p, s);
}

std::vector<LogPiece> RadiusSet::pieces(double ln_lo, double ln_hi) const
{
    if (!(ln_lo <= ln_hi)) {
        return {};
    }
    return impl_->pieces(ln_lo, ln_hi);
}

std::optional<double> RadiusSet::predecessor_log(double ln_x) const
{
    return impl_->predecessor(ln_x);
}

std::optional<Asymptotics> RadiusSet::asymptotics() const
{
    return impl_->asymptotics();
}

nlohmann::json RadiusSet::descriptor() const
{
    json d = impl_->descriptor();
    d["window"] = {io::format_double(window_.lo), io::format_double(window_.hi)};
    return d;
}

//---------------------------------------------------------------------------//
WindowEstimate window_estimate(RadiusSet const& a)
{
    double llo = std::log(a.window().lo);
    double lhi = std::log(a.window().hi);
    auto pieces = a.pieces(llo, lhi);
    bool only = a.window_only();

    auto below = [&]() -> double {
        if (only) {
            return llo;
        }
        auto p = a.predecessor_log(llo);
        return p ? *p : -inf;
    };

    std::vector<LogPiece> gaps;
    if (pieces.empty()) {
        gaps.push_back({below(), lhi});
    } else {
        if (pieces.front().lo > llo) {
            gaps.push_back({below(), pieces.front().lo});
        }
        for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
            gaps.push_back({pieces[i].hi, pieces[i + 1].lo});
        }
        if (pieces.back().hi < lhi) {
            gaps.push_back({pieces.back().hi, lhi});
        }
    }

    WindowEstimate est;
    est.gaps = gaps.size();
    double ln_c = 0;
    for (auto const& g : gaps) {
        ln_c = std::max(ln_c, g.hi - g.lo);
        est.max_log_gap = std::max(est.max_log_gap, g.hi - std::max(g.lo, llo));
    }
    est.gap_constant = std::exp(ln_c);
    est.eps_star = est.max_log_gap / 2;

    // l(h, A)/h at h = hi 2^{-j} and at every gap right end.
    std::vector<double> hs;
    for (double lh = lhi; lh >= llo; lh -= std::numbers::ln2) {
        hs.push_back(lh);
    }
    for (auto const& g : gaps) {
        hs.push_back(g.hi);
    }
    // Gaps are sorted and disjoint: those ending below h contribute through a
    // prefix max of ln(e^hi - e^lo); at most one gap straddles h.
    std::sort(hs.begin(), hs.end());
    double p0 = 0;
    double best_len = -inf;
    std::size_t k = 0;
    for (double lh : hs) {
        while (k < gaps.size() && gaps[k].hi <= lh) {
            auto const& g = gaps[k];
            double len = g.lo == -inf ? g.hi : g.hi + std::log(-std::expm1(g.lo - g.hi));
            best_len = std::max(best_len, len);
            ++k;
        }
        p0 = std::max(p0, std::exp(best_len - lh));
        if (k < gaps.size() && gaps[k].lo < lh) {
            p0 = std::max(p0, -std::expm1(gaps[k].lo - lh));
        }
    }
    est.p0 = std::clamp(p0, 0.0, 1.0);
    est.i0 = est.p0 < 1 ? est.p0 / (1 - est.p0) : inf;

    double mid = 0.5 * (llo + lhi);
    for (auto const& g : gaps) {
        if (g.lo >= mid) {
            est.i_inf = std::max(est.i_inf, std::expm1(g.hi - g.lo));
        }
    }
    return est;
}

double gap_constant(RadiusSet const& a)
{
    if (auto asym = a.asymptotics()) {
        return std::exp(asym->ln_C);
    }
    return window_estimate(a).gap_constant;
}

double log_eps_net(RadiusSet const& a)
{
    if (auto asym = a.asymptotics()) {
        return asym->ln_C / 2;
    }
    return window_estimate(a).eps_star;
}

PorosityEstimate porosity(RadiusSet const& a)
{
    WindowEstimate w = window_estimate(a);
    PorosityEstimate p;
    p.p0_window = w.p0;
    p.i0_window = w.i0;
    p.i_inf_window = w.i_inf;
    if (auto asym = a.asymptotics()) {
        p.p0 = -std::expm1(-asym->L0);
        p.i0 = std::expm1(asym->L0);
        p.i_inf = std::expm1(asym->Linf);
    }
    return p;
}

char const* to_string(Verdict v)
{
    switch (v) {
        case Verdict::yes: return "yes";
        case Verdict::no: return "no";
        case Verdict::window_limited: return "window-limited";
    }
    return "unknown";
}

Classification classify(RadiusSet const& a)
{
    Classification c;
    c.window = window_estimate(a);
    if (auto asym = a.asymptotics()) {
        c.asymptotic = true;
        c.gap_constant = std::exp(asym->ln_C);
        c.eps_star = asym->ln_C / 2;
        c.p0 = -std::expm1(-asym->L0);
        c.i0 = std::expm1(asym->L0);
        c.i_inf = std::expm1(asym->Linf);
        bool by_gap = std::isfinite(c.gap_constant);
        bool by_net = std::isfinite(c.eps_star);
        bool by_index = std::isfinite(c.i0) && std::isfinite(c.i_inf);
        if (by_gap != by_net || by_gap != by_index) {
            throw InternalError("favorability criteria disagree: gap constant, eps-net and porosity indices");
        }
        c.favorable_all_open = by_gap ? Verdict::yes : Verdict::no;
        c.favorable_bounded = c.p0 < 1 ? Verdict::yes : Verdict::no;
        return c;
    }
    c.gap_constant = c.window.gap_constant;
    c.eps_star = c.window.eps_star;
    c.p0 = c.window.p0;
    c.i0 = c.window.i0;
    c.i_inf = c.window.i_inf;
    c.caveats.push_back("window-limited: no closed-form gap law; values describe A on the window only");
    if (c.window.gaps < 3) {
        c.caveats.push_back("fewer than 3 gaps in window; asymptotic porosity unknown");
    }
    return c;
}

//---------------------------------------------------------------------------//
namespace {

double param(json const& params, char const* key)
{
    return io::parse_double(io::require(params, key));
}

RadiusSet family_from_json(json const& fam, Window w)
{
    std::string name = io::require(fam, "name").get<std::string>();
    json params = fam.contains("params") ? fam.at("params") : json::object();
    if (name == "geometric") {
        double c = params.contains("c") ? param(params, "c") : 1.0;
        return RadiusSet::geometric(c, param(params, "q"), w);
    }
    if (name == "blocks") {
        return RadiusSet::blocks(param(params, "alpha"), param(params, "beta"), w);
    }
    if (name == "super_geometric") {
        return RadiusSet::super_geometric(params.contains("p") ? param(params, "p") : 2.0, w);
    }
    if (name == "full") {
        return RadiusSet::full(w);
    }
    if (name == "gap_sequence") {
        GapLaw law;
        law.a_divisor = params.contains("a_divisor") ? param(params, "a_divisor") : 0.0;
        law.ratio_multiplier = params.contains("ratio_multiplier") ? param(params, "ratio_multiplier") : 1.0;
        law.m0 = params.contains("m0") ? params.at("m0").get<int>() : 1;
        return RadiusSet::gap_sequence(law, w);
    }
    if (name == "counterexample_complement") {
        double n0 = params.contains("N0") ? param(params, "N0") : 3.0;
        return RadiusSet::gap_sequence(GapLaw{4 * n0, 4 * n0, 1}, w);
    }
    if (name == "rescaled") {
        json base = io::require(fam, "base");
        json const& base_fam = base.contains("family") ? base.at("family") : base;
        RadiusSet inner = family_from_json(base_fam, w);
        double alpha = param(params, "alpha");
        double beta = param(params, "beta");
        // The descriptor window belongs to the rescaled set.
        Window base_w{std::pow(w.lo / alpha, 1 / beta), std::pow(w.hi / alpha, 1 / beta)};
        return inner.with_window(base_w).rescaled(alpha, beta).with_window(w);
    }
    throw InvalidInput("unknown radius-set family \"" + name + "\"");
}

}  // namespace

RadiusSet radius_set_from_json(json const& j)
{
    try {
        Window w;
        if (j.contains("window")) {
            json const& win = j.at("window");
            if (!win.is_array() || win.size() != 2) {
                throw InvalidInput("window must be [lo, hi]");
            }
            w = {io::parse_double(win[0]), io::parse_double(win[1])};
        }
        w.validate();
        std::string form = io::require(j, "form").get<std::string>();
        if (form == "list") {
            std::vector<double> el;
            for (auto const& e : io::require(j, "elements")) {
                el.push_back(io::parse_double(e));
            }
            if (el.empty()) {
                throw InvalidInput("empty elements list");
            }
            return RadiusSet::list(std::move(el), w);
        }
        if (form == "intervals") {
            std::vector<std::pair<double, double>> iv;
            for (auto const& e : io::require(j, "intervals")) {
                if (!e.is_array() || e.size() != 2) {
                    throw InvalidInput("each interval must be [lo, hi]");
                }
                iv.emplace_back(io::parse_double(e[0]), io::parse_double(e[1], true));
            }
            if (iv.empty()) {
                throw InvalidInput("empty intervals list");
            }
            return RadiusSet::intervals(std::move(iv), w);
        }
        if (form == "family") {
            return family_from_json(io::require(j, "family"), w);
        }
        throw InvalidInput("unknown radius-set form \"" + form + "\"");
    } catch (json::exception const& e) {
        throw InvalidInput(std::string("malformed radius-set descriptor: ") + e.what());
    }
}

nlohmann::json classification_to_json(Classification const& c)
{
    auto num = [](double v) -> json {
        if (std::isfinite(v)) {
            return v;
        }
        return v > 0 ? "inf" : "-inf";
    };
    json window = {{"gap_constant", num(c.window.gap_constant)},
                   {"eps_star", num(c.window.eps_star)},
                   {"p0", num(c.window.p0)},
                   {"i0", num(c.window.i0)},
                   {"i_inf", num(c.window.i_inf)},
                   {"gaps", c.window.gaps}};
    return {{"favorable_all_open", to_string(c.favorable_all_open)},
            {"favorable_bounded", to_string(c.favorable_bounded)},
            {"gap_constant", num(c.gap_constant)},
            {"eps_star", num(c.eps_star)},
            {"p0", num(c.p0)},
            {"i0", num(c.i0)},
            {"i_inf", num(c.i_inf)},
            {"source", c.asymptotic ? "gap law" : "window"},
            {"window", std::move(window)},
            {"caveats", c.caveats}};
}

}  // namespace qns
