//---------------------------------------------------------------------------//
//! \file qns/counterexample.hpp
//! \brief Explicit planar chain-of-balls domains whose indicator field fails
//! the ball mean-value inequality for every K, yet satisfies it with
//! K = 1 / lens_constant() when radii avoid the gaps (a_m, b_m).
//!
//! Radii shrink like 16^{-m^2}, so absolute coordinates cannot resolve the
//! balls past m = 4 in double precision. Every certification therefore runs
//! in the local frame xi = (x - z_m) / b_m of ball m, which keeps ball m
//! and both neighbours with their bridges.
//---------------------------------------------------------------------------//
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qns/fields.hpp"
#include "qns/qns_engine.hpp"
#include "qns/quadrature.hpp"
#include "qns/radius_sets.hpp"

namespace qns {

enum class CounterexampleVariant {
    //! Chain 0 < b_{m+1} < a_m < 2 a_m < b_m / N0 < b_m, m from 1.
    gaps,
    //! b_m = m a_m, m from N0 + 1; needs only b_{m+1} < a_m < b_m / N0.
    f1
};
char const* to_string(CounterexampleVariant v);

//! a[i], b[i] belong to index m = first_index + i.
struct SequencePair {
    std::vector<double> a;
    std::vector<double> b;
    int N0 = 3;
    int first_index = 1;
    CounterexampleVariant variant = CounterexampleVariant::gaps;

    int size() const { return static_cast<int>(a.size()); }
    int index(std::size_t i) const { return first_index + static_cast<int>(i); }
    //! Throws ConstructionError naming the first violated inequality and m.
    void validate() const;
};

//! b_m = 16^{-m^2}, a_m = b_m / (4 N0 m), m = 1..M. Needs N0 >= 3 and
//! 3 <= M <= 15 (16^{-m^2} underflows past that).
SequencePair default_sequences(int N0, int M);

//! a_m = 16^{-m^2}, b_m = m a_m for m = N0+1 .. N0+M.
SequencePair f1_sequences(int N0, int M);

//! Ball m and its neighbours in xi = (x - z_m) / b_m coordinates.
struct LocalFrame {
    int m = 0;
    double scale = 0;     // b_m
    double a_local = 0;   // a_m / b_m
    double ball_local = 0;  // 1 / N0
    Region omega;
    Region x;
    Field u;
};

class CounterexampleDomain {
  public:
    //! Validates the sequences and the disjointness and bridging invariants.
    static CounterexampleDomain build(SequencePair s);

    SequencePair const& sequences() const { return seq_; }
    //! z_1 = 0 (z_{first} = 0 for the f1 variant), z_{m+1} = z_m + 2 b_m.
    std::vector<double> const& centers() const { return z_; }
    LocalFrame local_frame(std::size_t i) const;

    //! Absolute-coordinate descriptor of Omega and X plus the sequences.
    nlohmann::json to_json() const;

  private:
    explicit CounterexampleDomain(SequencePair s);

    SequencePair seq_;
    std::vector<double> z_;
};

//---------------------------------------------------------------------------//
struct NotQnsRow {
    int m = 0;
    double mean = 0;
    double stderr_ = 0;
    //! min(1, 4 N0^2 a_m^2 / b_m^2)
    double expected = 0;
    double exact_mean = 0;
    bool within = false;
    //! 1 / expected, a lower bound for any admissible K.
    double implied_K = 0;
    double measured_K = 0;
};

struct NotQnsReport {
    bool pass = false;
    bool increasing = false;
    std::vector<NotQnsRow> rows;
};

//! Mean of u over B(z_m, b_m / (2 N0)) per ball, sampled and closed-form.
NotQnsReport certify_not_qns(CounterexampleDomain const& c, QuadratureSpec const& spec);

//! RFC-4180 CSV with columns m,a_m,b_m,z_m,ratio,implied_K.
std::string implied_k_csv(CounterexampleDomain const& c, NotQnsReport const& r);

//! Throws InvalidInput naming the first gap (a_m, b_m) that meets A.
void require_avoids_gaps(CounterexampleDomain const& c, RadiusSet const& a);

//! The infinite complement of the default gaps: the union of [b_{m+1}, a_m]
//! with [b_1, inf).
RadiusSet default_gap_complement(int N0, Window w = {});

struct LocalProbe {
    int m = 0;
    Point center{};  // local frame
    double radius = 0;  // local frame
    double mean = 0;
    double ratio = 0;
};

struct RestrictedOptions {
    //! Centers: z_m plus rings at j/rings of a_m, j = 1..rings.
    int rings = 10;
    int angles = 24;
    //! Log-spaced radii over A n [max(floor a_m, b_{m+1}), a_m], plus a_m.
    int radii = 10;
    double radius_floor = 1e-3;
    //! Extremal probes re-measured by sampling.
    int cross_checks = 8;
    double sharpness = 2.50;
};

struct RestrictedReport {
    bool pass = false;
    double K = 0;
    std::size_t probes_total = 0;
    std::size_t probes_admissible = 0;
    std::size_t failures = 0;
    double ratio_max = 0;
    std::optional<LocalProbe> witness;
    bool sharp = false;
    //! Probes with r in A n [b_m, 4 b_m]; all must leave Omega.
    std::size_t dichotomy_probes = 0;
    std::size_t dichotomy_violations = 0;
    bool cross_check_pass = false;
    double cross_check_max_z = 0;
    Classification avoided_set;
};

//! Ratios u(x) / mean over admissible probes with x in X and r in A, using
//! closed-form means; passes when every ratio is at most K = 1 / lens_constant().
RestrictedReport certify_restricted_qns(CounterexampleDomain const& c, RadiusSet const& a,
                                        RestrictedOptions const& opt, QuadratureSpec const& spec);

//---------------------------------------------------------------------------//
struct F1Counterexample {
    CounterexampleDomain domain;
    ScaleFunction f1;
    double c = 1;
    MarkedSet d;
    //! Smallest N >= 1 with 2 / (N r_D) > 1, as the inequality is written.
    int n0_as_written = 1;
    //! Smallest N >= 1 with 2 / (N r_D) < 1.
    int n0_reversed = 1;
};

//! D must be a single ball; N0 is the configured value (>= 3).
F1Counterexample build_f1_counterexample(int N0, int M, double c, MarkedSet const& d);

struct F1ProbeOptions {
    int rings = 6;
    int angles = 16;
    int radii = 12;
    double radius_floor = 1e-3;
};

struct F1MeanReport {
    bool pass = false;
    //! c^2 / (pi min(r_D, 1)^2 lens_constant())
    double K = 0;
    std::size_t probes_total = 0;
    std::size_t probes_admissible = 0;
    double ratio_max = 0;
    std::optional<LocalProbe> witness;
    //! Sampled re-measurement of the witness.
    bool cross_check_pass = false;
    double cross_check_z = 0;
};

//! f1(k)^2 <= K int_{h(D)} u over h(y) = k (y - p_D) + x with x in X and
//! closure of h(D) inside Omega.
F1MeanReport certify_f1_mean(F1Counterexample const& f, F1ProbeOptions const& opt, QuadratureSpec const& spec);

}  // namespace qns
