//---------------------------------------------------------------------------//
//! \file qns/region_io.hpp
//! \brief JSON descriptors for regions, marked sets, fields, and similarities.
//!
//! Coordinates are written as shortest round-trip decimal strings so that a
//! write/read cycle reproduces every double bit for bit. Readers accept either
//! JSON numbers or decimal strings.
//---------------------------------------------------------------------------//
#pragma once

#include <string>

#include "json.hpp"
#include "qns/fields.hpp"
#include "qns/regions.hpp"

namespace qns::io {

using nlohmann::json;

//! Shortest decimal string that parses back to exactly \p v ("inf" for +inf).
std::string format_double(double v);
//! Number, decimal string, "inf"/"-inf", or null (read as +inf when
//! \p null_is_inf is set).
double parse_double(json const& j, bool null_is_inf = false);

json point_to_json(Point const& p, int dim);
Point point_from_json(json const& j, int dim);

json region_to_json(Region const& r);
Region region_from_json(json const& j);

//! Region JSON with a required "marked_point".
MarkedSet marked_set_from_json(json const& j,
                               int boundary_samples = MarkedSet::default_boundary_samples);

json similarity_to_json(Similarity const& h);
Similarity similarity_from_json(json const& j, int dim);

//! {kind, params}
json field_to_json(Field const& f);
Field field_from_json(json const& j, Region const& domain);

//! Member lookup that names the missing key in the error.
json const& require(json const& j, char const* key);

}  // namespace qns::io
