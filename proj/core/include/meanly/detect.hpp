#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "meanly/bigindex.hpp"
#include "meanly/cesaro.hpp"
#include "meanly/logreal.hpp"
#include "meanly/report.hpp"
#include "meanly/shiftops.hpp"
#include "meanly/sparsevec.hpp"

namespace meanly {

// Candidate stream for witness searches: i-th candidate (0-based), nullopt
// once exhausted. Searches walk candidates in stream order, so the stream
// order is part of the reproducible search semantics.
using CandidateGen = std::function<std::optional<SparseVec>(size_t)>;

// e_first, e_{first+1}, ...
CandidateGen basis_candidates(const BigIndex& first = 1);
// e_{n(n+1)}, n = 1, 2, ... (last index of each pair-block's run of twos)
CandidateGen pair_block_candidates();

// Strict comparisons with a relative dead band: values within rel of the
// bound count as *not* strictly beyond it. Search loops accept a condition
// only on a clear margin, so boundary hits that exact arithmetic would
// reject (e.g. a Cesaro mean landing exactly on 1/m) stay rejected under
// floating-point noise and the eval counts are reproducible.
bool strictly_below(LogReal a, LogReal b, double rel = 1e-12);
bool strictly_above(LogReal a, LogReal b, double rel = 1e-12);

// ||T|| upper bound used when no growth constant is supplied: operator_norm
// at n = 1. Propagates the capability error for kinds without norm support.
double default_growth_bound(const ShiftOperator& op);

// ---- absolute Cesaro boundedness probe ----

// Per-sample record: sup over the schedule of A_N(x)/||x||. The sample is
// normalized before any orbit work, which makes the ratio independent of
// the input scale (bitwise so for single-entry samples).
struct AcbSample {
    std::string vector;   // describe() of the original sample
    LogReal norm;         // ||x|| before normalization
    LogReal sup_ratio;    // max over schedule of A_N(x)/||x||
    BigIndex arg_n;       // schedule point attaining it
};

struct AcbReport {
    std::vector<AcbSample> samples;
    LogReal max_ratio;
    size_t arg_sample = 0;
    double c0 = 1.0;
    bool violated = false;  // max_ratio > c0
    std::string verdict;    // never certifies boundedness; finite evidence cannot
};

AcbReport acb_probe(const ShiftOperator& op, const std::vector<SparseVec>& samples,
                    const Schedule& schedule, double c0 = 1.0,
                    int64_t loop_budget = kDefaultLoopBudget);

// ---- absolutely-mean-irregular candidate probe ----

struct AmiParams {
    double eta = 0.6;      // dip threshold
    double lambda = 1.5;   // peak threshold for the irregular flag
    double lambda0 = 0.0;  // peak threshold for the semi flag; 0 -> 10 * eta
    // supplementary (N, log A_N) evidence from evaluators that reach horizons
    // no materialized series can cover (streamed hill/valley levels)
    std::vector<TbilcamiMeanPoint> extra_dips;
    std::vector<TbilcamiMeanPoint> extra_peaks;
    int64_t loop_budget = kDefaultLoopBudget;
};

// Flags are finite-horizon candidate statements, not asymptotic claims:
// min over the dip evidence under eta plus max over the peak evidence over
// the relevant threshold.
struct AmiReport {
    LogReal norm;  // ||x||, for reading the thresholds in scale
    LogReal dip_min;
    BigIndex dip_arg;
    LogReal peak_max;
    BigIndex peak_arg;
    double eta = 0.6;
    double lambda = 1.5;
    double lambda0 = 6.0;
    bool irregular_candidate = false;       // dip_min < eta and peak_max > lambda
    bool semi_irregular_candidate = false;  // dip_min < eta and peak_max > lambda0
    CesaroTrace dip_trace;
    CesaroTrace peak_trace;
};

AmiReport ami_probe(const ShiftOperator& op, const SparseVec& x,
                    const Schedule& dips, const Schedule& peaks,
                    const AmiParams& params = {});

// ---- mean Li-Yorke Cesaro condition witnesses ----

struct MlyccWitness {
    int k = 0;
    bool found = false;
    std::string note;  // failure reason when not found
    SparseVec y;
    BigIndex n;    // horizon with A_n(y) > k ||y||
    LogReal mean;  // A_n(y)
};

struct MlyccReport {
    std::vector<MlyccWitness> witnesses;  // one per k = 1..k_max
    int64_t evals = 0;
    bool budget_exhausted = false;
};

// For each k the first candidate (stream order) and smallest horizon with
// A_N(y) > k ||y||. Evaluations are counted once per probed horizon; a
// candidate is abandoned once its orbit is dead and the mean has fallen
// below the target, since dead-orbit means only decay.
MlyccReport mlycc_witness_search(const ShiftOperator& op, const CandidateGen& x0,
                                 int k_max, int64_t budget);

// ---- irregular-vector construction ----

// Staged witness data: stage m holds a normalized x_m and horizon N_m with
// A_{N_m}(x_m) above m(2C)^m while every previously chosen stage has fallen
// below 1/m at the same horizon. The r_j selection spaces stages so far
// apart (r_{j+1} >= 1 + r_j + N_{r_j + 1}) that at desk scale only r = (1)
// survives; x_beta carries coefficient (2C)^{-r_j} per selected stage.
struct Certificate {
    struct Stage {
        int m = 0;
        SparseVec x;
        BigIndex n;     // N_m, strictly increasing across stages
        LogReal lower;  // A_{N_m}(x_m), the certified lower bound
        LogReal bound;  // m (2C)^m it was required to exceed
        bool peak_ok = false;
        bool cross_ok = false;
    };

    double c = 0.0;  // growth constant C
    std::vector<Stage> stages;
    std::vector<int> r;  // selected stage indices, minimal admissible values
    SparseVec x_beta;
    bool complete = false;
    std::optional<int> failed_stage;
    std::string failure_note;
    int64_t evals = 0;
};

// Candidate-major search in stream order, horizons ascending and strictly
// increasing across stages. growth_c defaults to default_growth_bound(op);
// candidates must be normalized (the stage inequalities assume it).
Certificate construct_irregular_vector(const ShiftOperator& op, int stages,
                                       const CandidateGen& x0, int64_t budget,
                                       std::optional<double> growth_c = std::nullopt);

/// Recomputed-from-scratch checks on the assembled x_beta, one entry per
// inequality: peak A_{N_{r_k}}(x_beta) >= r_k - 1 - tol ("stage_<r>_peak")
// and, when stage r_k + 1 exists, dip A_{N_{r_k + 1}}(x_beta) <=
// 1/(r_k + 1) + tol ("stage_<r>_dip"), with tol = 1e-6 relative. A truncated
// selection is reported as a notice carrying the log coefficient the first
// omitted r would have contributed.
CheckReport verify_certificate(const ShiftOperator& op, const Certificate& cert,
                               int64_t loop_budget = kDefaultLoopBudget);

std::string certificate_to_json(const Certificate& cert, int indent = 2);

// ---- operator norm growth ----

struct NormGrowthReport {
    BigIndex horizon;
    LogReal max_ratio;  // max over n <= horizon of ||T^n|| / n
    BigIndex arg_n;
    LogReal last_ratio;  // value at the horizon, the tail diagnostic
};

NormGrowthReport norm_growth_probe(const ShiftOperator& op, const BigIndex& horizon,
                                   int64_t loop_budget = kDefaultLoopBudget);

}  // namespace meanly
