//---------------------------------------------------------------------------//
//! \file qns/fields.hpp
//! \brief Nonnegative fields on a region.
//---------------------------------------------------------------------------//
#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "qns/regions.hpp"

namespace qns {

enum class FieldKind { constant, indicator, harmonic, radial_bump, sum, composed };

char const* to_string(FieldKind kind);

//---------------------------------------------------------------------------//
/*!
 * Pointwise nonnegative function u on a domain Omega.
 *
 * Evaluation outside Omega is rejected. Values are checked for
 * nonnegativity at every evaluation.
 */
class Field {
  public:
    static Field constant(Region domain, double value);
    //! chi_X restricted to the domain.
    static Field indicator(Region domain, Region set);
    //! c + (x^2 - y^2) / s in the plane.
    static Field harmonic(Region domain, double c, double s);
    //! height * (1 - |x - center|^2 / rho^2)_+
    static Field radial_bump(Region domain, Point center, double height, double rho);
    //! Sum of w_i u_i with w_i >= 0; each term is evaluated on its own domain.
    static Field sum(Region domain, std::vector<std::pair<double, Field>> terms);
    //! u o h on the preimage h^{-1}(Omega(u)).
    static Field composed(Field const& u, Similarity const& h);

    FieldKind kind() const;
    Region const& domain() const { return domain_; }
    int dim() const { return domain_.dim(); }

    double evaluate(Point const& p) const;
    //! Evaluation without the domain check, for samples already known to lie
    //! in Omega.
    double evaluate_unchecked(Point const& p) const;

    //! True if any indicator occurs in the expression tree.
    bool contains_indicator() const;
    //! Value of a constant field (also for sums of constants).
    std::optional<double> constant_value() const;

    // Construction parameters, for serialization.
    double param_value() const;
    double param_c() const;
    double param_s() const;
    Point param_center() const;
    double param_height() const;
    double param_rho() const;
    Region const& indicator_set() const;
    std::vector<std::pair<double, Field>> const& terms() const;
    Field const& inner() const;
    Similarity const& similarity() const;

  private:
    struct Node;
    Field(Region domain, std::shared_ptr<Node const> node);

    Region domain_;
    std::shared_ptr<Node const> node_;
};

}  // namespace qns
