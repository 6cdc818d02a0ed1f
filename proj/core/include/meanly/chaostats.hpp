#pragma once

#include <functional>
#include <string>
#include <vector>

#include "meanly/bigindex.hpp"
#include "meanly/cesaro.hpp"
#include "meanly/logreal.hpp"
#include "meanly/shiftops.hpp"
#include "meanly/sparsevec.hpp"

namespace meanly {

// Finite-horizon density window: low/high are the min/max of
// card(A cap [1,n])/n over n in [tail_start, horizon]. Finite surrogates for
// the lower/upper densities; no limit claim is attached.
struct DensityEstimate {
    BigIndex horizon;
    BigIndex tail_start;
    double low = 0.0;
    double high = 0.0;
};

// exact counting of a membership predicate over [1, horizon]
DensityEstimate density_estimate(
    const std::function<bool(const BigIndex&)>& member, const BigIndex& horizon,
    const BigIndex& tail_start, int64_t loop_budget = kDefaultLoopBudget);

// Distribution of small differences along an orbit pair: for each delta the
// density window of {j : ||T^j x - T^j y|| < delta}. F is the lower estimate,
// F* the upper one; F <= F* and both nondecreasing in delta by construction.
struct DistributionalProfile {
    std::vector<double> delta_grid;          // strictly increasing, positive
    std::vector<DensityEstimate> estimates;  // one window per delta

    double F(size_t i) const { return estimates.at(i).low; }
    double Fstar(size_t i) const { return estimates.at(i).high; }
};

DistributionalProfile distributional_profile(
    const ShiftOperator& op, const SparseVec& x, const SparseVec& y,
    std::vector<double> delta_grid, const BigIndex& horizon,
    const BigIndex& tail_start, int64_t loop_budget = kDefaultLoopBudget);

// 10^-6, 10^-5, ..., 10^2
std::vector<double> default_delta_grid();

enum class FlagStatus { Supported, Unsupported };

struct ClassifyParams {
    // per-j window: Li-Yorke scan and the distributional profile walk every
    // j in [1, horizon], so it must sit inside the loop budget
    BigIndex horizon;
    BigIndex tail_start = 0;         // 0 -> horizon/10, floored at 1
    std::vector<double> delta_grid;  // empty -> default_delta_grid()
    double eta = 1e-3;               // smallness threshold
    double lambda = 1e3;             // largeness threshold
    double margin = 0.5;             // density margin c
    Schedule schedule;               // Cesaro horizons; empty -> geometric to horizon
    // supplementary (N, log A_N) evidence from evaluators that reach horizons
    // no materialized series can cover (e.g. the streaming hill/valley path)
    std::vector<TbilcamiMeanPoint> extra_cesaro_points;
    int64_t loop_budget = kDefaultLoopBudget;
};

// Everything the classifier asserts is "at this horizon with these
// thresholds"; flags are evidence statements, not asymptotic claims.
struct PairVerdict {
    struct MeanPoint {
        BigIndex N;
        LogReal value;
    };

    FlagStatus ly = FlagStatus::Unsupported;
    FlagStatus mean_ly = FlagStatus::Unsupported;
    FlagStatus dc1 = FlagStatus::Unsupported;
    FlagStatus dc2 = FlagStatus::Unsupported;
    FlagStatus dc2half = FlagStatus::Unsupported;
    FlagStatus dc3 = FlagStatus::Unsupported;

    std::string pair;        // operator and vectors, for the record
    ClassifyParams params;   // echoed verbatim
    MeanPoint dip;           // smallest Cesaro mean seen (schedule + extras)
    MeanPoint peak;          // largest
    LogReal orbit_min;       // per-j extremes over [1, horizon]
    LogReal orbit_max;
    DistributionalProfile profile;
};

// Classification works on the difference orbit: T^j x - T^j y = T^j (x - y),
// so the pair verdict is exactly the verdict of (x - y, 0).
PairVerdict classify_pair(const ShiftOperator& op, const SparseVec& x,
                          const SparseVec& y, const ClassifyParams& params);

std::string verdict_to_json(const PairVerdict& v, int indent = 2);

}  // namespace meanly
