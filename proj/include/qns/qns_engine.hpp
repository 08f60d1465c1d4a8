//---------------------------------------------------------------------------//
//! \file qns/qns_engine.hpp
//! \brief Mean-value inequality tests: K estimation over ball probes,
//! similarity-image tests, constant conversion, indicator density,
//! f-admissibility and phi-functionals.
//!
//! Every supremum over a finite probe grid is a lower bound for the true
//! constant. Pass verdicts allow three standard errors of slack.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qns/fields.hpp"
#include "qns/quadrature.hpp"
#include "qns/radius_sets.hpp"

namespace qns {

struct BallProbe {
    Point center{};
    double radius = 0;
};

//---------------------------------------------------------------------------//
/*!
 * Tensor grid of centers (inclusive endpoints) times log-spaced radii.
 *
 * Centers outside \c center_region (when set) are dropped; radii outside
 * \c radius_set (when set) are dropped. Explicit centers and radii are
 * appended to the generated ones.
 */
struct ProbeGrid {
    int dim = 2;
    Point lo{-1, -1, 0};
    Point hi{1, 1, 0};
    int centers_per_axis = 21;
    std::optional<Region> center_region;
    std::vector<Point> extra_centers;
    double r_min = 1e-2;
    double r_max = 1.0;
    int radii = 48;
    std::vector<double> extra_radii;
    std::optional<RadiusSet> radius_set;

    std::vector<Point> centers() const;
    std::vector<double> radius_list() const;
};

//! How ball means are obtained.
enum class MeanSource {
    sampled,
    //! Closed-form m(X n B) for indicator fields when available.
    exact_when_available
};

struct ProbeOutcome {
    std::size_t index = 0;
    BallProbe probe;
    double u = 0;
    double mean = 0;
    double stderr_ = 0;
    double ratio = 0;
    bool exact = false;
};

struct KEstimate {
    //! max(1, ratio_max); infinite when some u(x) > 0 has mean 0.
    double K_hat = 1;
    double ratio_max = 0;
    std::optional<ProbeOutcome> witness;
    std::size_t probes_total = 0;
    std::size_t probes_evaluated = 0;
    std::size_t skipped_containment = 0;
    std::size_t skipped_zero = 0;
    double stderr_max = 0;
};

KEstimate estimate_K(Field const& u, ProbeGrid const& grid, QuadratureSpec const& spec,
                     MeanSource source = MeanSource::sampled);

struct CheckReport {
    bool pass = true;
    double K = 1;
    KEstimate estimate;
    //! Probes with u(x) > K (mean + 3 stderr), in probe order.
    std::vector<ProbeOutcome> failures;
};

//! Pass iff every admissible probe has u(x) <= K (mean + 3 stderr).
CheckReport check_K(Field const& u, double K, ProbeGrid const& grid, QuadratureSpec const& spec,
                    MeanSource source = MeanSource::sampled);

//! All admissible probe outcomes in probe order (0/0 probes omitted).
std::vector<ProbeOutcome> evaluate_probes(Field const& u, ProbeGrid const& grid, QuadratureSpec const& spec,
                                          MeanSource source, KEstimate* stats = nullptr);

struct DensityResult {
    //! inf over probes of m(Gamma n B)/m(B).
    double inf_ratio = 1;
    std::optional<ProbeOutcome> witness;
    std::size_t probes_evaluated = 0;
    std::size_t skipped = 0;
    //! inf_ratio > tolerance; K = 1/inf_ratio is then finite.
    bool compatible = true;
    double K = 1;
};

//! Probes with center in Gamma and closed ball in Omega.
DensityResult indicator_density(Region const& gamma, Region const& omega, ProbeGrid const& grid,
                                 QuadratureSpec const& spec, double zero_tolerance = 1e-12);

//! C = K (R_D / r_D)^n
double thm22_C_from_K(double K, MarkedSet const& d);
//! K = C nu_n R_D^n / m_n(D)
double thm22_K_from_C(double C, MarkedSet const& d);

//---------------------------------------------------------------------------//
/*!
 * Scale function f on (0, inf), evaluated in log space as ln f(e^s) so that
 * arguments like 16^{-m^2} never underflow.
 */
struct ScaleFunction {
    std::string name;
    std::function<double(double)> log_f;
    //! Closed-form A_t = {k : f(k) >= t k} when known.
    std::function<std::optional<RadiusSet>(double t, Window w)> level_family;

    double operator()(double k) const;

    //! f(k) = c k
    static ScaleFunction linear(double c);
    //! f(k) = k (1.5 + sin(2 pi mu(k))), mu(k) = (k + 1/k)/2
    static ScaleFunction psi_example();
    //! f1(k) = k/m on (a_m, m a_m), c k elsewhere; a_m from the gap law with
    //! ratio multiplier 1.
    static ScaleFunction f1(double c, GapLaw law);
};

struct SimilarityGrid {
    Point lo{-1, -1, 0};
    Point hi{1, 1, 0};
    int centers_per_axis = 11;
    std::optional<Region> center_region;
    std::vector<Point> extra_centers;
    double k_min = 1e-2;
    double k_max = 1.0;
    int scales = 24;
    int rotations = 8;
    bool reflections = true;
};

struct SimilarityOutcome {
    std::size_t index = 0;
    Point center{};
    double scale = 0;
    std::size_t orthogonal_index = 0;
    double u = 0;
    double mean = 0;
    double stderr_ = 0;
    double ratio = 0;
};

struct GeneralizedEstimate {
    double K_hat = 1;
    double ratio_max = 0;
    //! No admissible similarity: the inequality holds vacuously.
    bool vacuous = false;
    std::optional<SimilarityOutcome> witness;
    std::size_t probes_total = 0;
    std::size_t probes_evaluated = 0;
    std::size_t inadmissible = 0;
    std::size_t skipped_zero = 0;
    double stderr_max = 0;
};

//! Orthogonal parts probed: rotations on a grid, optionally composed with a
//! reflection (planar); rotations about the coordinate axes in space.
std::vector<Matrix> orthogonal_probes(int dim, int rotations, bool reflections);

//! sup of u(x) m(h(D)) / int_{h(D)} u, or u(x) f(k)^n / int when f is given,
//! over h(y) = k T (y - p_D) + x.
GeneralizedEstimate generalized_test(Field const& u, MarkedSet const& d, ScaleFunction const* f,
                                     SimilarityGrid const& grid, QuadratureSpec const& spec);

struct LevelReport {
    double t = 0;
    bool nonempty = false;
    double eps_star_window = 0;
    std::size_t gaps = 0;
    //! From the closed-form level set when the scale function has one.
    std::optional<double> eps_star_asymptotic;
};

struct AdmissibilityReport {
    bool admissible = false;
    //! Verdict from closed-form level sets rather than the window scan.
    bool asymptotic = false;
    std::string verdict;
    double c_min = 0;
    double c = 0;
    std::optional<double> best_t;
    std::vector<LevelReport> levels;
    //! (window lower end, largest log-gap of A_t on [lo, hi]) for shrinking lo.
    std::vector<std::pair<double, double>> gap_growth;
    double gap_growth_t = 0;
    Window window;
};

AdmissibilityReport f_admissibility(ScaleFunction const& f, Window window, std::vector<double> const& t_grid,
                                    double eps_threshold = std::numeric_limits<double>::infinity(),
                                    int grid_points = 200'001);

//! Level set A_t = {k : f(k) >= t k} sampled on a log grid over the window.
RadiusSet sampled_level_set(ScaleFunction const& f, double t, Window window, int grid_points);

enum class PhiKind { boundary_H1, perimeter, isoperimetric_deficit };
char const* to_string(PhiKind k);
PhiKind phi_kind_from_string(std::string const& s);

//! phi(h) for a single disk or polygon D, computed on h(D).
double phi_functional(PhiKind kind, Region const& d, Similarity const& h);

}  // namespace qns
