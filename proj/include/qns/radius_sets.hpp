//---------------------------------------------------------------------------//
//! \file qns/radius_sets.hpp
//! \brief Radius sets A in (0, inf): gap constant, log eps-net, porosity and
//! favorability verdicts.
//!
//! Sets are handled in log space throughout so that families reaching
//! 16^{-m^2} stay representable.
//---------------------------------------------------------------------------//
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace qns {

//! Finite observation window [lo, hi] with 0 < lo < hi < inf.
struct Window {
    double lo = 1e-6;
    double hi = 1e6;

    void validate() const;
};

//! Closed interval of ln A; endpoints may be infinite.
struct LogPiece {
    double lo;
    double hi;
};

//! Closed-form limits: ln C (sup log gap), L0 and Linf (limsup of log gap
//! ratios ln(b/a) at 0 and at infinity).
struct Asymptotics {
    double ln_C;
    double L0;
    double Linf;
};

//! Gap law ln a_m = -m^2 ln 16 - ln(d m) (no second term when d = 0),
//! b_m = r m a_m, for m >= m0. The set is (0, inf) minus the open gaps.
struct GapLaw {
    double a_divisor = 0;
    double ratio_multiplier = 1;
    int m0 = 1;

    double ln_a(int m) const;
    double ln_b(int m) const;
};

class RadiusSet {
  public:
    enum class Form { list, intervals, family };

    static RadiusSet list(std::vector<double> elements, Window w);
    //! Closed intervals [lo, hi]; lo = 0 means open at 0, hi = inf unbounded.
    static RadiusSet intervals(std::vector<std::pair<double, double>> ivals, Window w);
    //! {c q^k : k in Z}, q > 1.
    static RadiusSet geometric(double c, double q, Window w);
    //! Union over k in Z of [beta^k, alpha beta^k], 0 < beta < 1 <= alpha.
    static RadiusSet blocks(double alpha, double beta, Window w);
    //! {e^{-m^p} : m >= 1}, p > 0.
    static RadiusSet super_geometric(double p, Window w);
    static RadiusSet full(Window w);
    static RadiusSet gap_sequence(GapLaw law, Window w);
    //! Set known only on its window (e.g. sampled level sets).
    static RadiusSet sampled(std::vector<LogPiece> pieces, Window w);

    //! alpha A^beta with window alpha [lo, hi]^beta.
    RadiusSet rescaled(double alpha, double beta) const;
    RadiusSet with_window(Window w) const;

    Form form() const;
    Window const& window() const { return window_; }
    //! Nothing is known about A outside the window.
    bool window_only() const;

    bool contains(double x) const;
    //! Sorted disjoint pieces of ln A intersected with [ln_lo, ln_hi].
    std::vector<LogPiece> pieces(double ln_lo, double ln_hi) const;
    //! ln sup(A n (0, x]); empty when A has no element <= x or when that is
    //! unknown.
    std::optional<double> predecessor_log(double ln_x) const;
    //! Closed-form limits, absent for window-only sets.
    std::optional<Asymptotics> asymptotics() const;

    nlohmann::json descriptor() const;

    struct Impl;

  private:
    RadiusSet(std::shared_ptr<Impl const> impl, Window w);

    std::shared_ptr<Impl const> impl_;
    Window window_;
};

//! Quantities computed from the part of A inside its window.
struct WindowEstimate {
    double gap_constant = 1;
    double eps_star = 0;
    double p0 = 0;
    double i0 = 0;
    double i_inf = 0;
    //! Gaps of A meeting the window.
    std::size_t gaps = 0;
    //! Largest clipped log-gap length.
    double max_log_gap = 0;
};

WindowEstimate window_estimate(RadiusSet const& a);

struct PorosityEstimate {
    double p0_window = 0;
    double i0_window = 0;
    double i_inf_window = 0;
    //! Asymptotic values from the gap law; empty means unknown.
    std::optional<double> p0;
    std::optional<double> i0;
    std::optional<double> i_inf;
};

//! Minimal C with [x/C, x] n A nonempty for every x (asymptotic when known,
//! window value otherwise).
double gap_constant(RadiusSet const& a);
//! Half the largest gap of ln A; ln A is an eps-net for every eps > eps*.
double log_eps_net(RadiusSet const& a);
PorosityEstimate porosity(RadiusSet const& a);

enum class Verdict { yes, no, window_limited };
char const* to_string(Verdict v);

struct Classification {
    Verdict favorable_all_open = Verdict::window_limited;
    Verdict favorable_bounded = Verdict::window_limited;
    double gap_constant = 1;
    double eps_star = 0;
    double p0 = 0;
    double i0 = 0;
    double i_inf = 0;
    //! Values above come from closed-form limits rather than the window.
    bool asymptotic = false;
    WindowEstimate window;
    std::vector<std::string> caveats;
};

//! Throws InternalError if the three all-open criteria disagree.
Classification classify(RadiusSet const& a);

RadiusSet radius_set_from_json(nlohmann::json const& j);
nlohmann::json classification_to_json(Classification const& c);

}  // namespace qns
