#include "qns/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qns/errors.hpp"

namespace qns {

struct Field::Node {
    FieldKind kind = FieldKind::constant;
    double a = 0;  // value | c | height
    double b = 0;  // s | rho
    Point center{};
    std::optional<Region> set;
    std::vector<std::pair<double, Field>> terms;
    std::shared_ptr<Field const> inner;
    std::optional<Similarity> sim;
};

char const* to_string(FieldKind kind)
{
    switch (kind) {
        case FieldKind::constant: return "constant";
        case FieldKind::indicator: return "indicator";
        case FieldKind::harmonic: return "harmonic";
        case FieldKind::radial_bump: return "radial_bump";
        case FieldKind::sum: return "sum";
        case FieldKind::composed: return "composed";
    }
    return "unknown";
}

Field::Field(Region domain, std::shared_ptr<Node const> node) : domain_(std::move(domain)), node_(std::move(node)) {}

Field Field::constant(Region domain, double value)
{
    if (!(value >= 0) || !std::isfinite(value)) {
        throw InvalidInput("constant field value must be finite and nonnegative");
    }
    auto node = std::make_shared<Node>();
    node->kind = FieldKind::constant;
    node->a = value;
    return Field(std::move(domain), std::move(node));
}

Field Field::indicator(Region domain, Region set)
{
    if (set.dim() != domain.dim()) {
        throw InvalidInput("indicator set and domain dimensions differ");
    }
    auto node = std::make_shared<Node>();
    node->kind = FieldKind::indicator;
    node->set = std::move(set);
    return Field(std::move(domain), std::move(node));
}

Field Field::harmonic(Region domain, double c, double s)
{
    if (domain.dim() != 2) {
        throw InvalidInput("harmonic field is planar");
    }
    if (!(s != 0) || !std::isfinite(s) || !std::isfinite(c)) {
        throw InvalidInput("harmonic field needs finite c and nonzero s");
    }
    // Over the bounding box, (x^2 - y^2)/s is extremal at corners or on an axis.
    Box const& bb = domain.bounds();
    double lowest = std::numeric_limits<double>::infinity();
    for (double x : {bb.lo[0], bb.hi[0], 0.0}) {
        for (double y : {bb.lo[1], bb.hi[1], 0.0}) {
            if ((x == 0.0 && (bb.lo[0] > 0 || bb.hi[0] < 0)) || (y == 0.0 && (bb.lo[1] > 0 || bb.hi[1] < 0))) {
                continue;
            }
            lowest = std::min(lowest, c + (x * x - y * y) / s);
        }
    }
    if (lowest < 0) {
        throw InvalidInput("harmonic field would be negative on the domain bounding box");
    }
    auto node = std::make_shared<Node>();
    node->kind = FieldKind::harmonic;
    node->a = c;
    node->b = s;
    return Field(std::move(domain), std::move(node));
}

Field Field::radial_bump(Region domain, Point center, double height, double rho)
{
    if (!(height >= 0) || !std::isfinite(height) || !(rho > 0) || !std::isfinite(rho)) {
        throw InvalidInput("radial bump needs height >= 0 and rho > 0");
    }
    auto node = std::make_shared<Node>();
    node->kind = FieldKind::radial_bump;
    node->a = height;
    node->b = rho;
    node->center = center;
    return Field(std::move(domain), std::move(node));
}

Field Field::sum(Region domain, std::vector<std::pair<double, Field>> terms)
{
    if (terms.empty()) {
        throw InvalidInput("sum field needs at least one term");
    }
    for (auto const& [w, f] : terms) {
        if (!(w >= 0) || !std::isfinite(w)) {
            throw InvalidInput("sum field weights must be finite and nonnegative");
        }
        if (f.dim() != domain.dim()) {
            throw InvalidInput("sum field term dimension differs from domain");
        }
    }
    auto node = std::make_shared<Node>();
    node->kind = FieldKind::sum;
    node->terms = std::move(terms);
    return Field(std::move(domain), std::move(node));
}

Field Field::composed(Field const& u, Similarity const& h)
{
    if (h.dim() != u.dim()) {
        throw InvalidInput("similarity and field dimensions differ");
    }
    auto node = std::make_shared<Node>();
    node->kind = FieldKind::composed;
    node->inner = std::make_shared<Field const>(u);
    node->sim = h;
    return Field(u.domain().transformed(h.inverse()), std::move(node));
}

FieldKind Field::kind() const
{
    return node_->kind;
}

double Field::evaluate(Point const& p) const
{
    if (!domain_.contains(p)) {
        throw InvalidInput("field evaluated outside its domain");
    }
    return evaluate_unchecked(p);
}

double Field::evaluate_unchecked(Point const& p) const
{
    Node const& n = *node_;
    switch (n.kind) {
        case FieldKind::constant: return n.a;
        case FieldKind::indicator: return n.set->contains(p) ? 1.0 : 0.0;
        case FieldKind::harmonic: {
            double v = n.a + (p[0] * p[0] - p[1] * p[1]) / n.b;
            if (v < 0) {
                throw InvalidInput("harmonic field negative at evaluation point");
            }
            return v;
        }
        case FieldKind::radial_bump: {
            double d = distance(p, n.center, dim());
            double q = 1 - (d * d) / (n.b * n.b);
            return q > 0 ? n.a * q : 0.0;
        }
        case FieldKind::sum: {
            double s = 0;
            for (auto const& [w, f] : n.terms) {
                s += w * f.evaluate_unchecked(p);
            }
            return s;
        }
        case FieldKind::composed: return n.inner->evaluate_unchecked(n.sim->apply(p));
    }
    throw InternalError("unhandled field kind");
}

bool Field::contains_indicator() const
{
    Node const& n = *node_;
    switch (n.kind) {
        case FieldKind::indicator: return true;
        case FieldKind::sum:
            for (auto const& term : n.terms) {
                if (term.second.contains_indicator()) {
                    return true;
                }
            }
            return false;
        case FieldKind::composed: return n.inner->contains_indicator();
        default: return false;
    }
}

std::optional<double> Field::constant_value() const
{
    Node const& n = *node_;
    switch (n.kind) {
        case FieldKind::constant: return n.a;
        case FieldKind::sum: {
            double s = 0;
            for (auto const& [w, f] : n.terms) {
                auto v = f.constant_value();
                if (!v) {
                    return std::nullopt;
                }
                s += w * *v;
            }
            return s;
        }
        case FieldKind::composed: return n.inner->constant_value();
        default: return std::nullopt;
    }
}

namespace {
void require_kind(FieldKind actual, FieldKind wanted)
{
    if (actual != wanted) {
        throw InvalidInput(std::string("field parameter requested from a ") + to_string(actual) + " field");
    }
}
}  // namespace

double Field::param_value() const
{
    require_kind(kind(), FieldKind::constant);
    return node_->a;
}

double Field::param_c() const
{
    require_kind(kind(), FieldKind::harmonic);
    return node_->a;
}

double Field::param_s() const
{
    require_kind(kind(), FieldKind::harmonic);
    return node_->b;
}

Point Field::param_center() const
{
    require_kind(kind(), FieldKind::radial_bump);
    return node_->center;
}

double Field::param_height() const
{
    require_kind(kind(), FieldKind::radial_bump);
    return node_->a;
}

double Field::param_rho() const
{
    require_kind(kind(), FieldKind::radial_bump);
    return node_->b;
}

Region const& Field::indicator_set() const
{
    require_kind(kind(), FieldKind::indicator);
    return *node_->set;
}

std::vector<std::pair<double, Field>> const& Field::terms() const
{
    require_kind(kind(), FieldKind::sum);
    return node_->terms;
}

Field const& Field::inner() const
{
    require_kind(kind(), FieldKind::composed);
    return *node_->inner;
}

Similarity const& Field::similarity() const
{
    require_kind(kind(), FieldKind::composed);
    return *node_->sim;
}

}  // namespace qns
