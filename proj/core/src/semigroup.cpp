#include "meanly/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "meanly/bigindex.hpp"
#include "meanly/errors.hpp"

namespace meanly {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

void check_index_range(double x) {
    if (std::fabs(x) > 9e15)
        throw DomainError("discretized weight index out of range");
}

// ---------------------------------------------------------------------------
// adaptive Simpson over pre-split panels
// ---------------------------------------------------------------------------

struct QuadState {
    double worst = 0.0;  // largest panel error left unresolved at depth cap
};

template <typename F>
double simpson_recurse(const F& f, double a, double m, double b, double fa,
                       double fm, double fb, double whole, double tol,
                       int depth, QuadState& st) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (std::fabs(delta) <= 15.0 * tol || depth <= 0) {
        if (depth <= 0 && std::fabs(delta) > 15.0 * tol)
            st.worst = std::max(st.worst, std::fabs(delta) / 15.0);
        return left + right + delta / 15.0;
    }
    return simpson_recurse(f, a, lm, m, fa, flm, fm, left, 0.5 * tol,
                           depth - 1, st) +
           simpson_recurse(f, m, rm, b, fm, frm, fb, right, 0.5 * tol,
                           depth - 1, st);
}

// Integral over [cuts.front(), cuts.back()] with a panel per adjacent pair
// of cuts; tau is relative to the coarse-pass magnitude.
template <typename F>
double integrate(const F& f, std::vector<double> cuts, double tau) {
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    struct Panel {
        double a, b, fa, fm, fb, s;
    };
    std::vector<Panel> panels;
    double scale = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        if (!(b > a)) continue;
        double m = 0.5 * (a + b);
        double fa = f(a), fmid = f(m), fb = f(b);
        double s = (b - a) / 6.0 * (fa + 4.0 * fmid + fb);
        scale += std::fabs(s);
        panels.push_back({a, b, fa, fmid, fb, s});
    }
    if (panels.empty()) return 0.0;
    double tol =
        tau * std::max(scale, 1e-300) / static_cast<double>(panels.size());
    QuadState st;
    double total = 0.0;
    for (const Panel& pl : panels)
        total += simpson_recurse(f, pl.a, 0.5 * (pl.a + pl.b), pl.b, pl.fa,
                                 pl.fm, pl.fb, pl.s, tol, 48, st);
    if (st.worst > 0.0) {
        double achieved =
            st.worst * static_cast<double>(panels.size()) / std::max(scale, 1e-300);
        throw QuadratureError(
            "adaptive Simpson stalled below the requested tolerance (achieved ~" +
                fmt(achieved) + " relative)",
            achieved);
    }
    return total;
}

// integral of the weight over [lo, hi], exact per kind
double weight_integral(const WeightFunction& v, double lo, double hi) {
    switch (v.kind) {
        case WeightFunction::Kind::Constant:
            return v.c * (hi - lo);
        case WeightFunction::Kind::PiecewiseExponential: {
            std::vector<double> cuts{lo, hi};
            for (const auto& a : v.anchors)
                if (a.first > lo && a.first < hi) cuts.push_back(a.first);
            std::sort(cuts.begin(), cuts.end());
            double total = 0.0;
            for (size_t i = 0; i + 1 < cuts.size(); ++i) {
                double a = cuts[i], b = cuts[i + 1];
                if (!(b > a)) continue;
                double la = v.log_value(a), lb = v.log_value(b);
                double d = lb - la;
                total += std::fabs(d) > 1e-12
                             ? (b - a) * std::exp(la) * std::expm1(d) / d
                             : (b - a) * std::exp(0.5 * (la + lb));
            }
            return total;
        }
        case WeightFunction::Kind::StepFromProfile: {
            check_index_range(lo);
            check_index_range(hi);
            double total = 0.0;
            for (int64_t k = static_cast<int64_t>(std::floor(lo)) + 1;
                 static_cast<double>(k) - 1.0 < hi; ++k) {
                double a = std::max(lo, static_cast<double>(k) - 1.0);
                double b = std::min(hi, static_cast<double>(k));
                if (b > a)
                    total += (b - a) * std::exp(v.profile->log_value(BigIndex(k)));
            }
            return total;
        }
    }
    return 0.0;
}

// ||T_t f||^p: exact for Translation, quadrature for the multiplicative kind
double norm_power(const SemigroupFamily& fam, const StepFunction& f, double t,
                  double tau) {
    double acc = 0.0;
    for (size_t i = 0; i < f.values.size(); ++i) {
        double val = f.values[i];
        if (val == 0.0) continue;
        double a = std::max(f.breakpoints[i] - t, fam.domain_lo);
        double hi = f.breakpoints[i + 1] - t;
        if (!(hi > a)) continue;
        double amp = std::pow(std::fabs(val), fam.p);
        if (fam.kind == SemigroupFamily::Kind::Translation) {
            acc += amp * weight_integral(fam.v, a, hi);
        } else {
            double gp = fam.gamma * fam.p;
            auto g = [t, gp](double x) { return std::pow((x + t) / x, gp); };
            acc += amp * integrate(g, {a, hi}, tau);
        }
    }
    return acc;
}

// norms vanish for all t past this (inf on the whole line)
double extinction_time(const SemigroupFamily& fam, const StepFunction& f) {
    if (f.is_zero()) return 0.0;
    if (!std::isfinite(fam.domain_lo)) return kInf;
    return f.support_hi() - fam.domain_lo;
}

// t values where a shifted breakpoint crosses a weight kink or the domain
// edge; the outer integrand is smooth between them
std::vector<double> outer_cuts(const SemigroupFamily& fam,
                               const StepFunction& f, double upper) {
    std::vector<double> cuts{0.0, upper};
    auto add = [&](double t) {
        if (t > 0.0 && t < upper) cuts.push_back(t);
    };
    for (double beta : f.breakpoints) {
        if (fam.kind == SemigroupFamily::Kind::MultiplicativeTranslation) {
            add(beta - 1.0);
            continue;
        }
        if (std::isfinite(fam.domain_lo)) add(beta - fam.domain_lo);
        switch (fam.v.kind) {
            case WeightFunction::Kind::Constant:
                break;
            case WeightFunction::Kind::PiecewiseExponential:
                for (const auto& an : fam.v.anchors) add(beta - an.first);
                break;
            case WeightFunction::Kind::StepFromProfile: {
                check_index_range(beta);
                int64_t k0 = static_cast<int64_t>(std::ceil(beta - upper));
                int64_t k1 = static_cast<int64_t>(std::floor(beta));
                for (int64_t k = k0; k <= k1; ++k)
                    add(beta - static_cast<double>(k));
                break;
            }
        }
    }
    return cuts;
}

double mean_integral(const SemigroupFamily& fam, const StepFunction& f,
                     double b, double tau, bool pth_power) {
    if (!(b > 0.0)) throw DomainError("cesaro horizon must be positive");
    if (fam.p < 1.0) throw DomainError("semigroup families need p >= 1");
    if (!(tau > 0.0)) throw DomainError("quadrature tolerance must be positive");
    if (f.is_zero()) return 0.0;
    double upper = std::min(b, extinction_time(fam, f));
    if (!(upper > 0.0)) return 0.0;
    double inner_tau = 0.1 * tau;
    auto g = [&](double t) {
        double pw = norm_power(fam, f, t, inner_tau);
        if (pth_power) return pw;
        return pw <= 0.0 ? 0.0 : std::pow(pw, 1.0 / fam.p);
    };
    return integrate(g, outer_cuts(fam, f, upper), tau) / b;
}

}  // namespace

// ---------------------------------------------------------------------------
// StepFunction
// ---------------------------------------------------------------------------

StepFunction StepFunction::zero() { return {}; }

StepFunction StepFunction::indicator(double lo, double hi, double height) {
    return pieces({lo, hi}, {height});
}

StepFunction StepFunction::pieces(std::vector<double> breakpoints,
                                  std::vector<double> values) {
    if (breakpoints.empty() && values.empty()) return {};
    if (breakpoints.size() != values.size() + 1)
        throw DomainError("step function needs one more breakpoint than values");
    for (double b : breakpoints)
        if (!std::isfinite(b))
            throw DomainError("step breakpoints must be finite");
    for (size_t i = 0; i + 1 < breakpoints.size(); ++i)
        if (!(breakpoints[i] < breakpoints[i + 1]))
            throw DomainError("step breakpoints must be strictly increasing");
    for (double v : values)
        if (!std::isfinite(v)) throw DomainError("step values must be finite");
    StepFunction f;
    f.breakpoints = std::move(breakpoints);
    f.values = std::move(values);
    return f;
}

bool StepFunction::is_zero() const {
    for (double v : values)
        if (v != 0.0) return false;
    return true;
}

double StepFunction::value_at(double x) const {
    for (size_t i = 0; i < values.size(); ++i)
        if (breakpoints[i] < x && x <= breakpoints[i + 1]) return values[i];
    return 0.0;
}

double StepFunction::support_lo() const {
    for (size_t i = 0; i < values.size(); ++i)
        if (values[i] != 0.0) return breakpoints[i];
    return 0.0;
}

double StepFunction::support_hi() const {
    for (size_t i = values.size(); i-- > 0;)
        if (values[i] != 0.0) return breakpoints[i + 1];
    return 0.0;
}

StepFunction StepFunction::translated(double t) const {
    StepFunction g = *this;
    for (double& b : g.breakpoints) b -= t;
    return g;
}

StepFunction StepFunction::scaled(double a) const {
    if (!std::isfinite(a)) throw DomainError("step scale must be finite");
    StepFunction g = *this;
    for (double& v : g.values) v *= a;
    return g;
}

// ---------------------------------------------------------------------------
// WeightFunction
// ---------------------------------------------------------------------------

WeightFunction WeightFunction::constant(double c) {
    if (!(c > 0.0) || !std::isfinite(c))
        throw DomainError("weight must be strictly positive and finite");
    WeightFunction w;
    w.kind = Kind::Constant;
    w.c = c;
    return w;
}

WeightFunction WeightFunction::piecewise_exponential(
    std::vector<std::pair<double, double>> anchors) {
    if (anchors.empty())
        throw DomainError("piecewise-exponential weight needs anchors");
    for (const auto& a : anchors)
        if (!std::isfinite(a.first) || !std::isfinite(a.second))
            throw DomainError("weight anchors must be finite");
    for (size_t i = 0; i + 1 < anchors.size(); ++i)
        if (!(anchors[i].first < anchors[i + 1].first))
            throw DomainError("weight anchors must be strictly increasing in x");
    WeightFunction w;
    w.kind = Kind::PiecewiseExponential;
    w.anchors = std::move(anchors);
    return w;
}

double WeightFunction::log_value(double x) const {
    switch (kind) {
        case Kind::Constant:
            return std::log(c);
        case Kind::PiecewiseExponential: {
            if (x <= anchors.front().first) return anchors.front().second;
            if (x >= anchors.back().first) return anchors.back().second;
            auto it = std::lower_bound(
                anchors.begin(), anchors.end(), x,
                [](const std::pair<double, double>& a, double v) {
                    return a.first < v;
                });
            const auto& hi = *it;
            const auto& lo = *(it - 1);
            return lo.second + (x - lo.first) * (hi.second - lo.second) /
                                   (hi.first - lo.first);
        }
        case Kind::StepFromProfile: {
            check_index_range(x);
            int64_t k = static_cast<int64_t>(std::ceil(x));
            return profile->log_value(BigIndex(k));
        }
    }
    return 0.0;
}

double WeightFunction::value(double x) const { return std::exp(log_value(x)); }

WeightFunction discretized_profile_weight(const AnchorProfile& profile) {
    WeightFunction w;
    w.kind = WeightFunction::Kind::StepFromProfile;
    w.profile = profile;
    return w;
}

double admissibility_surrogate(const WeightFunction& v, double x_lo,
                               double x_hi, int tau_grid, int t_grid) {
    if (!(x_hi > x_lo))
        throw DomainError("surrogate window must have positive length");
    if (tau_grid < 1 || t_grid < 1)
        throw DomainError("surrogate grids must be positive");
    double best = 0.0;
    for (int i = 0; i <= tau_grid; ++i) {
        double tau = x_lo + (x_hi - x_lo) * i / tau_grid;
        double lv = v.log_value(tau);
        for (int j = 1; j <= t_grid; ++j) {
            double t = static_cast<double>(j) / t_grid;
            best = std::max(best, std::exp(lv - v.log_value(tau + t)));
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// SemigroupFamily
// ---------------------------------------------------------------------------

SemigroupFamily SemigroupFamily::translation(WeightFunction v, double p) {
    if (p < 1.0) throw DomainError("semigroup families need p >= 1");
    SemigroupFamily f;
    f.kind = Kind::Translation;
    f.p = p;
    f.v = std::move(v);
    f.domain_lo = 0.0;
    return f;
}

SemigroupFamily SemigroupFamily::whole_line_translation(WeightFunction v,
                                                        double p) {
    SemigroupFamily f = translation(std::move(v), p);
    f.domain_lo = -kInf;
    return f;
}

SemigroupFamily SemigroupFamily::multiplicative_translation(double gamma,
                                                            double p) {
    if (p < 1.0) throw DomainError("semigroup families need p >= 1");
    if (!std::isfinite(gamma))
        throw DomainError("multiplicative exponent must be finite");
    SemigroupFamily f;
    f.kind = Kind::MultiplicativeTranslation;
    f.p = p;
    f.gamma = gamma;
    f.domain_lo = 1.0;
    return f;
}

double growth_bound(const SemigroupFamily& family, double t) {
    if (t < 0.0) throw DomainError("growth bound needs t >= 0");
    if (family.kind == SemigroupFamily::Kind::MultiplicativeTranslation) {
        // sup over x > 1 of ((x + t)/x)^gamma: at the domain edge for
        // gamma >= 0, approached at infinity (value 1) for gamma < 0
        return family.gamma >= 0.0 ? std::pow(1.0 + t, family.gamma) : 1.0;
    }
    if (family.v.kind == WeightFunction::Kind::Constant)
        return 1.0;  // translation only ever loses mass against a flat weight
    double lo, hi;
    if (family.v.kind == WeightFunction::Kind::PiecewiseExponential) {
        lo = family.v.anchors.front().first - 1.0;
        hi = family.v.anchors.back().first + 1.0;
    } else {
        // profiles span astronomically far; the sampled near field is the
        // honest part of this surrogate (clipped to the anchored range)
        const auto& pa = family.v.profile->anchors;
        double plo = static_cast<double>(big_to_i64_saturating(pa.front().index));
        double phi = static_cast<double>(big_to_i64_saturating(pa.back().index));
        lo = std::max(-4096.0, plo);
        hi = std::min(4096.0, phi - t - 1.0);
    }
    if (std::isfinite(family.domain_lo)) lo = std::max(lo, family.domain_lo);
    if (!(hi > lo)) hi = lo + 1.0;
    double best = 0.0;
    for (int i = 0; i <= 256; ++i) {
        double x = lo + (hi - lo) * i / 256.0;
        best = std::max(best, std::exp((family.v.log_value(x) -
                                        family.v.log_value(x + t)) /
                                       family.p));
    }
    return best;
}

double semigroup_norm(const SemigroupFamily& family, const StepFunction& f,
                      double t, double tau) {
    if (t < 0.0) throw DomainError("semigroup time must be >= 0");
    if (family.p < 1.0) throw DomainError("semigroup families need p >= 1");
    if (!(tau > 0.0)) throw DomainError("quadrature tolerance must be positive");
    double pw = norm_power(family, f, t, tau);
    return pw <= 0.0 ? 0.0 : std::pow(pw, 1.0 / family.p);
}

double cesaro_integral(const SemigroupFamily& family, const StepFunction& f,
                       double b, double tau) {
    return mean_integral(family, f, b, tau, false);
}

CheckReport acb_integral_check(double eps, double p, const StepFunction& f,
                               const std::vector<double>& b_grid, double tau) {
    if (!(eps > 0.0)) throw DomainError("acb check needs eps > 0");
    SemigroupFamily fam =
        SemigroupFamily::multiplicative_translation((1.0 - eps) / p, p);
    if (f.is_zero()) throw DomainError("cannot normalize the zero function");
    double n0 = semigroup_norm(fam, f, 0.0, tau);
    StepFunction unit = f.scaled(1.0 / n0);
    double bound = 2.0 + 2.0 / eps;

    CheckReport rep;
    rep.title = "absolutely Cesaro bounded semigroup integrals";
    rep.set_config("eps", fmt(eps));
    rep.set_config("p", fmt(p));
    rep.set_config("gamma", fmt(fam.gamma));
    rep.set_config("tau", fmt(tau));
    for (double b : b_grid) {
        double val = mean_integral(fam, unit, b, tau, true);
        rep.add("b=" + fmt(b), val <= bound * (1.0 + 1e-9), val, bound,
                bound - val, "(1/b) int_0^b ||T_t f||^p dt <= 2 + 2/eps");
    }
    return rep;
}

CheckReport sandwich_check(const SemigroupFamily& family, const StepFunction& f,
                           double s, const std::vector<double>& b_grid,
                           double tau) {
    if (!(s > 0.0)) throw DomainError("sandwich step must be positive");
    double cs = 0.0;
    for (int i = 0; i <= 32; ++i)
        cs = std::max(cs, growth_bound(family, s * i / 32.0));

    CheckReport rep;
    rep.title = "discretization sandwich";
    rep.set_config("s", fmt(s));
    rep.set_config("C_s", fmt(cs));
    rep.set_config("p", fmt(family.p));
    rep.set_config("tau", fmt(tau));
    for (double b : b_grid) {
        int64_t n = static_cast<int64_t>(std::floor(b / s + 1e-9));
        if (n < 1) {
            rep.notice("b = " + fmt(b) + " skipped: floor(b/s) = 0");
            continue;
        }
        double sum1 = 0.0;
        for (int64_t j = 1; j <= n; ++j)
            sum1 += semigroup_norm(family, f, s * static_cast<double>(j), tau);
        double sum0 = sum1 + semigroup_norm(family, f, 0.0, tau);
        double lower = sum1 / (cs * static_cast<double>(n + 1));
        double mid = cesaro_integral(family, f, b, tau);
        double upper = cs * sum0 / static_cast<double>(n);
        double slack =
            4.0 * tau *
            std::max({1.0, std::fabs(lower), std::fabs(mid), std::fabs(upper)});
        rep.add("b=" + fmt(b) + "_lower", lower <= mid + slack, lower, mid,
                mid - lower, "(1/C_s)(1/(N+1)) sum_1^N <= (1/b) int_0^b");
        rep.add("b=" + fmt(b) + "_upper", mid <= upper + slack, mid, upper,
                upper - mid, "(1/b) int_0^b <= C_s (1/N) sum_0^N");
    }
    return rep;
}

}  // namespace meanly
