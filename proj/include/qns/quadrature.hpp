//---------------------------------------------------------------------------//
//! \file qns/quadrature.hpp
//! \brief Means of fields over balls and similarity images of marked sets.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <string>

#include "qns/fields.hpp"

namespace qns {

enum class QuadMethod { grid, mc, stratified };

char const* to_string(QuadMethod m);
QuadMethod quad_method_from_string(std::string const& s);

//---------------------------------------------------------------------------//
/*!
 * Quadrature controls.
 *
 * Sampling is split into fixed chunks of \c chunk_size samples, each seeded
 * from (seed, chunk index), and the stopping rule is applied to chunks in
 * index order. Results are therefore identical for any worker count.
 */
struct QuadratureSpec {
    static constexpr std::uint64_t chunk_size = 4096;

    QuadMethod method = QuadMethod::stratified;
    double target_rel_err = 1e-3;
    std::uint64_t max_samples = 10'000'000;
    std::uint64_t seed = 0;
    int workers = 1;

    //! Throws InvalidInput unless target in (0, 0.1], max_samples >= 1e3 and
    //! workers >= 1.
    void validate() const;
};

struct MeanEstimate {
    double mean = 0;
    double stderr_ = 0;
    std::uint64_t samples = 0;
    //! Exact to rounding (constant field or closed form).
    bool exact = false;
};

//! Mean of u over B; rejects balls whose closure leaves Omega(u), naming the
//! violating direction.
MeanEstimate mean_over_ball(Field const& u, Ball const& b, QuadratureSpec const& spec);

//! As mean_over_ball without the containment check.
MeanEstimate mean_over_ball_unchecked(Field const& u, Ball const& b, QuadratureSpec const& spec);

//! Mean of u over h(D): samples drawn in D by rejection from its bounding box
//! and mapped through h. Any sample of h(D) outside Omega(u) is an error.
MeanEstimate mean_over_image(Field const& u, MarkedSet const& d, Similarity const& h,
                             QuadratureSpec const& spec);

//! Uniform point in B(0, 1) from uniforms u0..u2 (dim 2 uses two).
Point unit_ball_point(int dim, double u0, double u1, double u2);

}  // namespace qns
