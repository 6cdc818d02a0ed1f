#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "meanly/report.hpp"
#include "meanly/weights.hpp"

namespace meanly {

// Finitely supported step function: values[i] on ]breakpoints[i],
// breakpoints[i+1]], zero elsewhere. Interval closure never matters below
// (everything is an L^p integral) but translations act exactly on the
// breakpoints, so no quadrature error enters through the test vectors.
struct StepFunction {
    std::vector<double> breakpoints;  // strictly increasing; values.size() + 1
    std::vector<double> values;       // may contain zeros (gaps)

    static StepFunction zero();
    static StepFunction indicator(double lo, double hi, double height = 1.0);
    static StepFunction pieces(std::vector<double> breakpoints,
                               std::vector<double> values);

    bool is_zero() const;
    double value_at(double x) const;
    double support_lo() const;  // of the nonzero part; 0 for the zero function
    double support_hi() const;
    StepFunction translated(double t) const;  // x -> f(x + t)
    StepFunction scaled(double a) const;
};

// Strictly positive weight on the line. StepFromProfile realizes
// v(x) = v(k) on ]k - 1, k] from a hill/valley anchor profile;
// PiecewiseExponential interpolates log-linearly between (x, log v(x))
// anchors and extends the edge values as constants.
struct WeightFunction {
    enum class Kind { Constant, PiecewiseExponential, StepFromProfile };

    Kind kind = Kind::Constant;
    double c = 1.0;
    std::vector<std::pair<double, double>> anchors;  // (x, log v(x))
    std::optional<AnchorProfile> profile;

    static WeightFunction constant(double c);
    static WeightFunction piecewise_exponential(
        std::vector<std::pair<double, double>> anchors);

    double log_value(double x) const;
    double value(double x) const;
};

WeightFunction discretized_profile_weight(const AnchorProfile& profile);

// Sampled stand-in for the admissibility inequality: max over a tau grid in
// [x_lo, x_hi] and a t grid in ]0, 1] of v(tau)/v(tau + t). Reported, not
// proved; a finite value on a generous window is the sanity signal.
double admissibility_surrogate(const WeightFunction& v, double x_lo,
                               double x_hi, int tau_grid = 256,
                               int t_grid = 16);

// Translation: T_t f(x) = f(x + t) on the weighted L^p of [domain_lo, inf[
// (domain_lo = -inf puts it on the whole line).
// MultiplicativeTranslation: T_t f(x) = ((x + t)/x)^gamma f(x + t) on
// L^p(1, inf); gamma = 1 is the drift family, gamma = (1 - eps)/p the
// mixing one.
struct SemigroupFamily {
    enum class Kind { Translation, MultiplicativeTranslation };

    Kind kind = Kind::Translation;
    double p = 1.0;
    WeightFunction v;    // Translation only
    double gamma = 1.0;  // MultiplicativeTranslation only
    double domain_lo = 0.0;

    static SemigroupFamily translation(WeightFunction v, double p = 1.0);
    static SemigroupFamily whole_line_translation(WeightFunction v,
                                                  double p = 1.0);
    static SemigroupFamily multiplicative_translation(double gamma,
                                                      double p = 1.0);
};

// Upper estimate of ||T_t||: exact (1 + t)^gamma for the multiplicative
// family and 1 for unweighted translation; sampled sup of
// (v(tau)/v(tau + t))^(1/p) otherwise.
double growth_bound(const SemigroupFamily& family, double t);

// ||T_t f||. Exact piecewise closed form for Translation; breakpoint-aware
// adaptive Simpson to relative tolerance tau for MultiplicativeTranslation.
double semigroup_norm(const SemigroupFamily& family, const StepFunction& f,
                      double t, double tau = 1e-8);

// (1/b) integral_0^b ||T_t f|| dt. Outer quadrature panels are split at
// every t where a shifted breakpoint crosses a weight kink or the domain
// edge, and the integral is clipped at the finite-extinction time.
double cesaro_integral(const SemigroupFamily& family, const StepFunction& f,
                       double b, double tau = 1e-8);

// Mixing-family bound: with gamma = (1 - eps)/p and f normalized to unit
// p-norm, (1/b) integral_0^b ||T_t f||^p dt <= 2 + 2/eps for every b in the
// grid; one entry per b with its margin.
CheckReport acb_integral_check(double eps, double p, const StepFunction& f,
                               const std::vector<double>& b_grid,
                               double tau = 1e-8);

// Discretization sandwich at step s, N = floor(b/s):
//   (1/C_s) (1/(N+1)) sum_{j=1}^N ||T_{js} f||
//     <= (1/b) integral_0^b ||T_t f|| dt
//     <= C_s (1/N) sum_{j=0}^N ||T_{js} f||
// with C_s = max of growth_bound over a t grid in [0, s]. Grid points with
// N = 0 are skipped with a notice.
CheckReport sandwich_check(const SemigroupFamily& family, const StepFunction& f,
                           double s, const std::vector<double>& b_grid,
                           double tau = 1e-8);

}  // namespace meanly
