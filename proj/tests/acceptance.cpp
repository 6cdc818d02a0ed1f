// Acceptance gate: one line per criterion, each with its wall-clock budget.
// Exit 0 only when every criterion passes inside its budget.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "meanly/bigindex.hpp"
#include "meanly/cesaro.hpp"
#include "meanly/chaostats.hpp"
#include "meanly/detect.hpp"
#include "meanly/logreal.hpp"
#include "meanly/semigroup.hpp"
#include "meanly/shiftops.hpp"
#include "meanly/sparsevec.hpp"
#include "meanly/weights.hpp"

namespace {

using namespace meanly;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

bool log_rel_close(LogReal a, LogReal b, double rel) {
    if (a.sign == 0 && b.sign == 0) return true;
    if (a.sign != b.sign) return false;
    return std::fabs(std::expm1(a.logmag - b.logmag)) <= rel;
}

// 1. ||T^n e_{n+1}|| = n + 1 for the harmonic backward shift, n <= 1e4
Outcome criterion_1() {
    ShiftOperator op = ShiftOperator::unilateral_backward(WeightModel::harmonic());
    double worst = 0.0;
    for (int64_t n = 1; n <= 10000; ++n) {
        LogReal got = orbit_norm(op, SparseVec::basis(BigIndex(n + 1)), BigIndex(n));
        double dev = std::fabs(
            std::expm1(got.logmag - std::log(static_cast<double>(n + 1))));
        worst = std::max(worst, dev);
    }
    return {worst <= 1e-9, "max rel dev " + sci(worst)};
}

// 2. block shift: prefix-product sup = 1 over n <= 1e6; ||B^m x_*|| >= 1
Outcome criterion_2() {
    WeightModel w = WeightModel::block_halves_twos();
    long double cum = 0.0L;
    double sup_log = -std::numeric_limits<double>::infinity();
    for (int64_t j = 1; j <= 1000000; ++j) {
        cum += static_cast<long double>(log_weight(w, BigIndex(j)).logmag);
        sup_log = std::max(sup_log, static_cast<double>(cum));
    }
    double sup_dev = std::fabs(std::expm1(sup_log));

    ShiftOperator op = ShiftOperator::unilateral_backward(w);
    SparseVec x_star = special_block_vector(2000);
    LogReal floor = LogReal::one();
    for (int64_t m = 1; m <= 1000; ++m) {
        LogReal v = orbit_norm(op, x_star, BigIndex(m));
        if (cmp_abs(v, floor) < 0) floor = v;
    }
    bool pass = sup_dev <= 1e-9 && floor.logmag >= std::log1p(-1e-9);
    return {pass, "prefix sup dev " + sci(sup_dev) + ", min ||B^m x*|| = " +
                      sci(floor.to_real())};
}

// 3. profile inequality suite for k = 1..8
Outcome criterion_3() {
    AnchorProfile prof = build_tbilcami(ProfileVariant::Original, 9);
    bool all = true;
    double min_margin = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 8; ++k) {
        CheckReport rep = verify_tbilcami(prof, k);
        for (const CheckEntry& e : rep.entries) {
            all = all && e.passed && e.margin > 0.0;
            min_margin = std::min(min_margin, e.margin);
        }
    }
    return {all, "min log-margin " + sci(min_margin)};
}

// 4. dip means under (2k)^{2/3}/(k+1) + 0.2; backends agree at k = 1, 2
Outcome criterion_4() {
    std::ostringstream seen;
    for (int k : {1, 2, 3, 10, 100}) {
        TbilcamiMeanPoint p = tbilcami_dip_mean(k, ProfileVariant::Original);
        double val = std::exp(p.log_mean);
        double cap = std::pow(2.0 * k, 2.0 / 3.0) / (k + 1) + 0.2;
        if (k <= 3) seen << (k > 1 ? ", " : "") << sci(val);
        if (!(val <= cap))
            return {false, "k=" + std::to_string(k) + ": " + sci(val) + " > cap " +
                               sci(cap)};
    }
    for (int k : {1, 2}) {
        TbilcamiMeanPoint p = tbilcami_dip_mean(k, ProfileVariant::Original);
        AnchorProfile prof = build_tbilcami(ProfileVariant::Original, k + 1);
        ShiftOperator op = ShiftOperator::bilateral_forward(prof);
        OrbitNormSeries series = orbit_norm_series(op, SparseVec::basis(0), p.N);
        LogReal loop = cesaro_mean(series, p.N, CesaroBackend::Loop);
        if (!log_rel_close(loop, LogReal::from_log(p.log_mean), 1e-9))
            return {false, "backend mismatch at k=" + std::to_string(k)};
    }
    return {true, "dips {" + seen.str() + "} under caps; backends agree"};
}

// 5. hill means strictly increase and the k = 1e4 one lands in [1.5, 2.1]
Outcome criterion_5() {
    std::vector<double> vals;
    for (int k : {10, 100, 10000})
        vals.push_back(std::exp(tbilcami_hill_mean(k, ProfileVariant::Original).log_mean));
    bool rising = vals[0] < vals[1] && vals[1] < vals[2];
    bool banded = vals[2] >= 1.5 && vals[2] <= 2.1;
    bool gapped = vals[2] > vals[0] + 0.5;
    return {rising && banded && gapped,
            "A(m_k) = {" + sci(vals[0]) + ", " + sci(vals[1]) + ", " + sci(vals[2]) +
                "}"};
}

// 6. midpoint weight decay in closed form
Outcome criterion_6() {
    std::vector<double> fwd, bwd;
    for (int k : {1000, 10000, 100000, 1000000}) {
        fwd.push_back(std::exp(tbilcami_midpoint_logv_forward(k)));
        bwd.push_back(std::exp(tbilcami_midpoint_logv_backward(k)));
    }
    bool ok = fwd.back() < 0.51 && bwd.back() < 0.51;
    for (size_t i = 1; i < fwd.size(); ++i)
        ok = ok && fwd[i] < fwd[i - 1] && bwd[i] < bwd[i - 1];
    return {ok, "v_{j_k}, v_{-j_k} at k=1e6: " + sci(fwd.back()) + ", " +
                    sci(bwd.back())};
}

// 7. flattened variant: hills capped at 1.2 through k = 100, dips < 0.6 by k = 3
Outcome criterion_7() {
    for (int k : {10, 100}) {
        double hill = std::exp(tbilcami_hill_mean(k, ProfileVariant::Flattened).log_mean);
        if (!(hill <= 1.2))
            return {false, "hill k=" + std::to_string(k) + ": " + sci(hill)};
    }
    std::vector<double> dips;
    for (int k : {1, 2, 3})
        dips.push_back(std::exp(tbilcami_dip_mean(k, ProfileVariant::Flattened).log_mean));
    bool falling = dips[0] > dips[1] && dips[1] > dips[2];
    return {falling && dips[2] < 0.6, "dip at k=3: " + sci(dips[2])};
}

// 8. staged certificate on the block shift with C = 2
Outcome criterion_8() {
    ShiftOperator op =
        ShiftOperator::unilateral_backward(WeightModel::block_halves_twos());
    Certificate cert =
        construct_irregular_vector(op, 2, pair_block_candidates(), 1000000, 2.0);
    if (!cert.complete || cert.stages.empty())
        return {false, "construction incomplete: " + cert.failure_note};
    if (cert.evals > 1000000)
        return {false, "evaluation budget exceeded"};
    CheckReport rep = verify_certificate(op, cert);
    bool peak = false, dip = false;
    for (const CheckEntry& e : rep.entries) {
        if (e.name == "stage_1_peak") peak = e.passed;
        if (e.name == "stage_1_dip") dip = e.passed;
    }
    return {peak && dip && rep.all_passed(),
            "stages " + std::to_string(cert.stages.size()) + ", evals " +
                std::to_string(cert.evals)};
}

// 9. MLYCC witnesses k <= 5 for the harmonic shift, re-verified by loop
Outcome criterion_9() {
    ShiftOperator op = ShiftOperator::unilateral_backward(WeightModel::harmonic());
    MlyccReport rep = mlycc_witness_search(op, basis_candidates(), 5, 10000000);
    for (const MlyccWitness& w : rep.witnesses) {
        if (!w.found) return {false, "no witness for k=" + std::to_string(w.k)};
        OrbitNormSeries series = orbit_norm_series(op, w.y, w.n);
        LogReal loop = cesaro_mean(series, w.n, CesaroBackend::Loop);
        LogReal target = log_mul(LogReal::from_real(w.k), vector_norm(op, w.y));
        if (!(cmp(loop, target) > 0))
            return {false, "loop re-check failed at k=" + std::to_string(w.k)};
    }
    return {true, "witnesses found and loop-verified for k = 1..5"};
}

// 10. (1/b) int_0^b ||T_t f||^p dt <= 6 for eps = 1/2, p in {1, 2}
Outcome criterion_10() {
    StepFunction f = StepFunction::indicator(1.0, 2.0);
    double max_lhs = 0.0;
    for (double p : {1.0, 2.0}) {
        CheckReport rep = acb_integral_check(0.5, p, f, {1, 10, 100, 1000}, 1e-6);
        if (!rep.all_passed()) return {false, "violation at p=" + sci(p)};
        for (const CheckEntry& e : rep.entries) max_lhs = std::max(max_lhs, e.lhs);
    }
    return {true, "max integral " + sci(max_lhs) + " <= 6"};
}

// 11. discretization sandwich for both corollary families at s = 1
Outcome criterion_11() {
    CheckReport plain = sandwich_check(
        SemigroupFamily::translation(WeightFunction::constant(1.0)),
        StepFunction::indicator(0.0, 1.0), 1.0, {2.5, 5, 50});
    CheckReport drift = sandwich_check(
        SemigroupFamily::multiplicative_translation(1.0, 1.0),
        StepFunction::indicator(1.0, 2.0), 1.0, {2.5, 5, 50});
    return {plain.all_passed() && drift.all_passed(),
            "both families, b in {2.5, 5, 50}"};
}

// 12. property suites, 1000 cases each
int64_t suite_log_laws(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> mag(-40.0, 40.0);
    std::uniform_int_distribution<int> coin(0, 1);
    int64_t failures = 0;
    for (int i = 0; i < 1000; ++i) {
        LogReal a = LogReal::from_log(mag(rng), coin(rng) ? 1 : -1);
        LogReal b = LogReal::from_log(mag(rng), coin(rng) ? 1 : -1);
        LogReal c = LogReal::from_log(mag(rng), coin(rng) ? 1 : -1);
        bool ok = log_mul(a, b) == log_mul(b, a);
        ok = ok && log_rel_close(log_mul(log_mul(a, b), c),
                                 log_mul(a, log_mul(b, c)), 1e-12);
        ok = ok && log_add(a, b) == log_add(b, a);
        ok = ok && log_sub(a, a).is_zero();
        ok = ok && log_rel_close(log_pow(a.abs(), 2.0), log_mul(a, a).abs(), 1e-12);
        // double-domain consistency away from cancellation
        LogReal s = log_add(a, b);
        double real_sum = a.to_real() + b.to_real();
        if (std::fabs(real_sum) >
            1e-3 * std::max(std::fabs(a.to_real()), std::fabs(b.to_real())))
            ok = ok && std::fabs(s.to_real() - real_sum) <=
                           1e-9 * std::fabs(real_sum);
        if (!ok) ++failures;
    }
    return failures;
}

int64_t suite_cesaro(std::mt19937_64& rng) {
    std::vector<WeightModel> models = {WeightModel::harmonic(),
                                       WeightModel::block_halves_twos(),
                                       WeightModel::constant(1.25)};
    std::uniform_int_distribution<int> idx(1, 40);
    std::uniform_int_distribution<int64_t> horizon(2, 400);
    std::uniform_real_distribution<double> scale(0.125, 8.0);
    std::uniform_int_distribution<int> coin(0, 1);
    int64_t failures = 0;
    for (int i = 0; i < 1000; ++i) {
        ShiftOperator op = ShiftOperator::unilateral_backward(models[i % 3]);
        SparseVec x = SparseVec::basis(BigIndex(idx(rng)) + 1);
        BigIndex n(horizon(rng));
        double s = scale(rng) * (coin(rng) ? 1.0 : -1.0);
        OrbitNormSeries series = orbit_norm_series(op, x, n);
        OrbitNormSeries scaled =
            orbit_norm_series(op, x.scaled(LogReal::from_real(s)), n);
        LogReal base = cesaro_mean(series, n);
        bool ok = log_rel_close(cesaro_mean(scaled, n),
                                log_mul(LogReal::from_real(std::fabs(s)), base),
                                1e-10);
        BigIndex k = 1 + BigIndex(horizon(rng)) % (n - 1);
        LogReal whole = orbit_partial_sum(series, 0, n);
        LogReal split = log_add(orbit_partial_sum(series, 0, k),
                                orbit_partial_sum(series, k, n));
        ok = ok && log_rel_close(whole, split, 1e-10);
        ok = ok && log_rel_close(base, cesaro_mean(series, n, CesaroBackend::Loop),
                                 1e-9);
        if (!ok) ++failures;
    }
    return failures;
}

int64_t suite_profile_monotone(std::mt19937_64& rng) {
    std::vector<WeightModel> models = {WeightModel::harmonic(),
                                       WeightModel::block_halves_twos(),
                                       WeightModel::constant(0.8)};
    std::uniform_int_distribution<int> idx(1, 30);
    std::uniform_int_distribution<int64_t> horizon(40, 160);
    std::uniform_real_distribution<double> logdelta(-6.0, 1.0);
    int64_t failures = 0;
    for (int i = 0; i < 1000; ++i) {
        ShiftOperator op = ShiftOperator::unilateral_backward(models[i % 3]);
        SparseVec x = SparseVec::basis(BigIndex(idx(rng)));
        SparseVec y = (i % 2) ? SparseVec::basis(BigIndex(idx(rng)))
                              : SparseVec::zero();
        std::vector<double> grid;
        for (int g = 0; g < 4; ++g) grid.push_back(std::pow(10.0, logdelta(rng)));
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
        BigIndex h(horizon(rng));
        DistributionalProfile prof =
            distributional_profile(op, x, y, grid, h, h / 10 + 1);
        bool ok = true;
        for (size_t d = 0; d < prof.delta_grid.size(); ++d) {
            ok = ok && prof.F(d) <= prof.Fstar(d) + 1e-15;
            if (d > 0)
                ok = ok && prof.F(d) >= prof.F(d - 1) &&
                     prof.Fstar(d) >= prof.Fstar(d - 1);
        }
        if (!ok) ++failures;
    }
    return failures;
}

int64_t suite_density_complement(std::mt19937_64& rng) {
    std::uniform_int_distribution<int64_t> horizon(50, 400);
    int64_t failures = 0;
    for (int i = 0; i < 1000; ++i) {
        uint64_t salt = rng();
        auto member = [salt](const BigIndex& n) {
            uint64_t v = static_cast<uint64_t>(big_to_i64_saturating(n));
            v = (v * 2654435761ULL) ^ salt;
            v ^= v >> 13;
            return (v & 1) == 1;
        };
        auto complement = [&member](const BigIndex& n) { return !member(n); };
        BigIndex h(horizon(rng));
        BigIndex tail = 1 + h / 4;
        DensityEstimate a = density_estimate(member, h, tail);
        DensityEstimate b = density_estimate(complement, h, tail);
        bool ok = std::fabs(a.low - (1.0 - b.high)) <= 1e-12 &&
                  std::fabs(a.high - (1.0 - b.low)) <= 1e-12;
        if (!ok) ++failures;
    }
    return failures;
}

int64_t suite_classify_linearity(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> low(1, 18), high(25, 40);
    std::uniform_int_distribution<int64_t> horizon(60, 120);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    int64_t failures = 0;
    for (int i = 0; i < 1000; ++i) {
        ShiftOperator op =
            (i % 2) ? ShiftOperator::unilateral_backward(WeightModel::harmonic())
                    : ShiftOperator::unilateral_backward(
                          WeightModel::block_halves_twos());
        SparseVec x = SparseVec::from_reals({{BigIndex(low(rng)), coeff(rng)}});
        SparseVec y = (i % 3) ? SparseVec::basis(BigIndex(low(rng)))
                              : SparseVec::zero();
        // z lives on disjoint indices, so (x + z) - (y + z) cancels exactly
        SparseVec z = SparseVec::from_reals({{BigIndex(high(rng)), coeff(rng)}});
        ClassifyParams params;
        params.horizon = BigIndex(horizon(rng));
        params.eta = 0.5;
        params.lambda = 1.5;
        PairVerdict v1 = classify_pair(op, x, y, params);
        PairVerdict v2 = classify_pair(op, add(x, z), add(y, z), params);
        bool ok = v1.ly == v2.ly && v1.mean_ly == v2.mean_ly && v1.dc1 == v2.dc1 &&
                  v1.dc2 == v2.dc2 && v1.dc2half == v2.dc2half && v1.dc3 == v2.dc3;
        ok = ok && v1.dip.value == v2.dip.value && v1.peak.value == v2.peak.value;
        ok = ok && v1.orbit_min == v2.orbit_min && v1.orbit_max == v2.orbit_max;
        if (!ok) ++failures;
    }
    return failures;
}

Outcome criterion_12() {
    std::mt19937_64 rng(20260813ULL);
    int64_t failures = 0;
    failures += suite_log_laws(rng);
    failures += suite_cesaro(rng);
    failures += suite_profile_monotone(rng);
    failures += suite_density_complement(rng);
    failures += suite_classify_linearity(rng);
    return {failures == 0,
            "5 suites x 1000 cases, " + std::to_string(failures) + " failures"};
}

}  // namespace

int main() {
    struct Row {
        int id;
        const char* name;
        double budget_s;
        Outcome (*run)();
    };
    const std::vector<Row> rows = {
        {1, "harmonic shift norm law", 2.0, criterion_1},
        {2, "block shift prefix sup and orbit floor", 10.0, criterion_2},
        {3, "hill/valley profile inequality suite", 1.0, criterion_3},
        {4, "Cesaro dip means under the level cap", 30.0, criterion_4},
        {5, "Cesaro hill means rising into [1.5, 2.1]", 5.0, criterion_5},
        {6, "midpoint weight decay", 0.1, criterion_6},
        {7, "flattened profile: capped hills, falling dips", 30.0, criterion_7},
        {8, "irregular-vector certificate on the block shift", 60.0, criterion_8},
        {9, "mean Li-Yorke witnesses, loop re-verified", 5.0, criterion_9},
        {10, "semigroup integral bound 2 + 2/eps", 10.0, criterion_10},
        {11, "discretization sandwich, both families", 10.0, criterion_11},
        {12, "property suites", 300.0, criterion_12},
    };

    int passed = 0;
    for (const Row& row : rows) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome oc;
        try {
            oc = row.run();
        } catch (const std::exception& e) {
            oc = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        bool in_budget = secs < row.budget_s;
        bool pass = oc.pass && in_budget;
        if (pass) ++passed;
        std::printf("criterion %2d: %s  %7.3f s  %s -- %s%s\n", row.id,
                    pass ? "PASS" : "FAIL", secs, row.name, oc.detail.c_str(),
                    in_budget ? "" : " [over time budget]");
    }
    std::printf("acceptance: %d/12 criteria passed\n", passed);
    return passed == 12 ? 0 : 1;
}
