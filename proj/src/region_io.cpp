#include "qns/region_io.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <system_error>

#include "qns/errors.hpp"

namespace qns::io {

std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc{}) {
        throw InternalError("to_chars failed");
    }
    return std::string(buf, res.ptr);
}

double parse_double(json const& j, bool null_is_inf)
{
    if (j.is_null() && null_is_inf) {
        return std::numeric_limits<double>::infinity();
    }
    if (j.is_number()) {
        return j.get<double>();
    }
    if (j.is_string()) {
        auto const& s = j.get_ref<std::string const&>();
        if (s == "inf" || s == "+inf" || s == "infinity") {
            return std::numeric_limits<double>::infinity();
        }
        if (s == "-inf") {
            return -std::numeric_limits<double>::infinity();
        }
        double v = 0;
        auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
            throw InvalidInput("not a decimal number: \"" + s + "\"");
        }
        return v;
    }
    throw InvalidInput("expected a number or decimal string, got " + j.dump());
}

json const& require(json const& j, char const* key)
{
    if (!j.is_object() || !j.contains(key)) {
        throw InvalidInput(std::string("missing required field \"") + key + "\"");
    }
    return j.at(key);
}

json point_to_json(Point const& p, int dim)
{
    json out = json::array();
    for (int i = 0; i < dim; ++i) {
        out.push_back(format_double(p[i]));
    }
    return out;
}

Point point_from_json(json const& j, int dim)
{
    if (!j.is_array() || static_cast<int>(j.size()) != dim) {
        throw InvalidInput("point must be an array of " + std::to_string(dim) + " coordinates");
    }
    Point p{};
    for (int i = 0; i < dim; ++i) {
        p[i] = parse_double(j[i]);
    }
    return p;
}

namespace {

bool closed_flag(json const& j)
{
    return j.contains("closed") && j.at("closed").get<bool>();
}

Primitive primitive_from_json(json const& j, int dim)
{
    std::string type = require(j, "type").get<std::string>();
    if (type == "ball") {
        return Ball(dim, point_from_json(require(j, "center"), dim), parse_double(require(j, "radius")),
                    closed_flag(j));
    }
    if (type == "rect") {
        return Box(dim, point_from_json(require(j, "lo"), dim), point_from_json(require(j, "hi"), dim),
                   closed_flag(j));
    }
    if (type == "polygon") {
        if (dim != 2) {
            throw InvalidInput("polygons are planar");
        }
        std::vector<std::array<double, 2>> verts;
        for (auto const& v : require(j, "vertices")) {
            Point p = point_from_json(v, 2);
            verts.push_back({p[0], p[1]});
        }
        return Polygon(std::move(verts), closed_flag(j));
    }
    throw InvalidInput("unknown primitive type \"" + type + "\"");
}

json primitive_to_json(Primitive const& prim, int dim)
{
    return std::visit(
        [&](auto const& p) -> json {
            using T = std::decay_t<decltype(p)>;
            json out;
            if constexpr (std::is_same_v<T, Ball>) {
                out["type"] = "ball";
                out["center"] = point_to_json(p.center, dim);
                out["radius"] = format_double(p.radius);
            } else if constexpr (std::is_same_v<T, Box>) {
                out["type"] = "rect";
                out["lo"] = point_to_json(p.lo, dim);
                out["hi"] = point_to_json(p.hi, dim);
            } else {
                out["type"] = "polygon";
                json verts = json::array();
                for (auto const& v : p.vertices) {
                    verts.push_back(point_to_json({v[0], v[1], 0}, 2));
                }
                out["vertices"] = std::move(verts);
            }
            out["closed"] = p.closed;
            return out;
        },
        prim);
}

}  // namespace

json region_to_json(Region const& r)
{
    json prims = json::array();
    for (auto const& p : r.primitives()) {
        prims.push_back(primitive_to_json(p, r.dim()));
    }
    return {{"dimension", r.dim()}, {"primitives", std::move(prims)}};
}

Region region_from_json(json const& j)
{
    try {
        int dim = require(j, "dimension").get<int>();
        require_dimension(dim);
        json const& prims = require(j, "primitives");
        if (!prims.is_array() || prims.empty()) {
            throw InvalidInput("region needs a nonempty \"primitives\" array");
        }
        std::vector<Primitive> out;
        for (auto const& p : prims) {
            out.push_back(primitive_from_json(p, dim));
        }
        return Region(dim, std::move(out));
    } catch (json::exception const& e) {
        throw InvalidInput(std::string("malformed region descriptor: ") + e.what());
    }
}

MarkedSet marked_set_from_json(json const& j, int boundary_samples)
{
    Region r = region_from_json(j);
    Point p = point_from_json(require(j, "marked_point"), r.dim());
    return MarkedSet(std::move(r), p, boundary_samples);
}

json similarity_to_json(Similarity const& h)
{
    json rows = json::array();
    for (int i = 0; i < h.dim(); ++i) {
        json row = json::array();
        for (int k = 0; k < h.dim(); ++k) {
            row.push_back(format_double(h.orthogonal()[i * 3 + k]));
        }
        rows.push_back(std::move(row));
    }
    return {{"scale", format_double(h.scale())},
            {"orthogonal", std::move(rows)},
            {"shift", point_to_json(h.shift(), h.dim())}};
}

Similarity similarity_from_json(json const& j, int dim)
{
    double k = parse_double(require(j, "scale"));
    Matrix t = identity_matrix(dim);
    if (j.contains("orthogonal")) {
        json const& rows = j.at("orthogonal");
        if (!rows.is_array() || static_cast<int>(rows.size()) != dim) {
            throw InvalidInput("orthogonal part must be a dim x dim array");
        }
        for (int i = 0; i < dim; ++i) {
            Point row = point_from_json(rows[i], dim);
            for (int c = 0; c < dim; ++c) {
                t[i * 3 + c] = row[c];
            }
        }
    } else if (j.contains("angle")) {
        if (dim != 2) {
            throw InvalidInput("\"angle\" shorthand is planar");
        }
        double a = parse_double(j.at("angle"));
        t = {std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 0};
    }
    Point shift = j.contains("shift") ? point_from_json(j.at("shift"), dim) : Point{};
    return Similarity(dim, k, t, shift);
}

json field_to_json(Field const& f)
{
    json params;
    switch (f.kind()) {
        case FieldKind::constant: params["value"] = format_double(f.param_value()); break;
        case FieldKind::indicator: params["set"] = region_to_json(f.indicator_set()); break;
        case FieldKind::harmonic:
            params["c"] = format_double(f.param_c());
            params["s"] = format_double(f.param_s());
            break;
        case FieldKind::radial_bump:
            params["center"] = point_to_json(f.param_center(), f.dim());
            params["height"] = format_double(f.param_height());
            params["rho"] = format_double(f.param_rho());
            break;
        case FieldKind::sum: {
            json terms = json::array();
            for (auto const& [w, t] : f.terms()) {
                terms.push_back({{"weight", format_double(w)}, {"field", field_to_json(t)}});
            }
            params["terms"] = std::move(terms);
            break;
        }
        case FieldKind::composed:
            params["field"] = field_to_json(f.inner());
            params["domain"] = region_to_json(f.inner().domain());
            params["similarity"] = similarity_to_json(f.similarity());
            break;
    }
    return {{"kind", to_string(f.kind())}, {"params", std::move(params)}};
}

Field field_from_json(json const& j, Region const& domain)
{
    try {
        std::string kind = require(j, "kind").get<std::string>();
        json params = j.contains("params") ? j.at("params") : json::object();
        int dim = domain.dim();
        if (kind == "constant") {
            return Field::constant(domain, parse_double(require(params, "value")));
        }
        if (kind == "indicator") {
            json set = require(params, "set");
            if (!set.contains("dimension")) {
                set["dimension"] = dim;
            }
            return Field::indicator(domain, region_from_json(set));
        }
        if (kind == "harmonic") {
            return Field::harmonic(domain, parse_double(require(params, "c")), parse_double(require(params, "s")));
        }
        if (kind == "radial_bump") {
            return Field::radial_bump(domain, point_from_json(require(params, "center"), dim),
                                      parse_double(require(params, "height")), parse_double(require(params, "rho")));
        }
        if (kind == "sum") {
            std::vector<std::pair<double, Field>> terms;
            for (auto const& t : require(params, "terms")) {
                terms.emplace_back(parse_double(require(t, "weight")), field_from_json(require(t, "field"), domain));
            }
            return Field::sum(domain, std::move(terms));
        }
        if (kind == "composed") {
            Region inner_domain = params.contains("domain") ? region_from_json(params.at("domain")) : domain;
            Field inner = field_from_json(require(params, "field"), inner_domain);
            return Field::composed(inner, similarity_from_json(require(params, "similarity"), dim));
        }
        throw InvalidInput("unknown field kind \"" + kind + "\"");
    } catch (json::exception const& e) {
        throw InvalidInput(std::string("malformed field descriptor: ") + e.what());
    }
}

}  // namespace qns::io
