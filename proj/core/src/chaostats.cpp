#include "meanly/chaostats.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

#include "meanly/errors.hpp"

namespace meanly {

namespace {

int64_t checked_window(const BigIndex& horizon, const BigIndex& tail_start,
                       int64_t loop_budget) {
    if (horizon < 1) throw DomainError("horizon must be >= 1");
    if (tail_start < 1 || tail_start > horizon)
        throw DomainError("need 1 <= tail_start <= horizon");
    if (horizon > loop_budget)
        throw BudgetError("per-index window exceeds the loop budget");
    return horizon.convert_to<int64_t>();
}

void check_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw DomainError("delta grid must be nonempty");
    for (size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0)) throw DomainError("delta grid must be positive");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw DomainError("delta grid must be strictly increasing");
    }
}

// density window of {j : log_norms[j-1] < ln delta} for each grid delta
DistributionalProfile profile_from_log_norms(const std::vector<double>& log_norms,
                                             std::vector<double> grid,
                                             const BigIndex& horizon,
                                             const BigIndex& tail_start) {
    DistributionalProfile prof;
    prof.delta_grid = std::move(grid);
    prof.estimates.reserve(prof.delta_grid.size());
    int64_t tail = tail_start.convert_to<int64_t>();
    for (double delta : prof.delta_grid) {
        double ln_delta = std::log(delta);
        DensityEstimate est;
        est.horizon = horizon;
        est.tail_start = tail_start;
        int64_t count = 0;
        bool seen = false;
        for (int64_t n = 1; n <= static_cast<int64_t>(log_norms.size()); ++n) {
            if (log_norms[n - 1] < ln_delta) ++count;
            if (n < tail) continue;
            double r = static_cast<double>(count) / static_cast<double>(n);
            if (!seen || r < est.low) est.low = r;
            if (!seen || r > est.high) est.high = r;
            seen = true;
        }
        prof.estimates.push_back(est);
    }
    return prof;
}

std::vector<double> difference_log_norms(const ShiftOperator& op,
                                         const SparseVec& d, int64_t n) {
    std::vector<double> out;
    out.reserve(static_cast<size_t>(n));
    for (int64_t j = 1; j <= n; ++j) {
        LogReal v = orbit_norm(op, d, BigIndex(j));
        out.push_back(v.is_zero() ? -std::numeric_limits<double>::infinity()
                                  : v.logmag);
    }
    return out;
}

const char* flag_str(FlagStatus s) {
    return s == FlagStatus::Supported ? "supported" : "unsupported";
}

nlohmann::ordered_json mean_point_json(const PairVerdict::MeanPoint& p) {
    nlohmann::ordered_json j;
    j["N"] = big_to_string(p.N);
    j["mean"] = p.value.to_real();
    if (p.value.is_zero())
        j["log10_mean"] = nullptr;
    else
        j["log10_mean"] = p.value.logmag / std::log(10.0);
    return j;
}

}  // namespace

DensityEstimate density_estimate(
    const std::function<bool(const BigIndex&)>& member, const BigIndex& horizon,
    const BigIndex& tail_start, int64_t loop_budget) {
    int64_t n_hi = checked_window(horizon, tail_start, loop_budget);
    int64_t tail = tail_start.convert_to<int64_t>();
    DensityEstimate est;
    est.horizon = horizon;
    est.tail_start = tail_start;
    int64_t count = 0;
    bool seen = false;
    for (int64_t n = 1; n <= n_hi; ++n) {
        if (member(BigIndex(n))) ++count;
        if (n < tail) continue;
        double r = static_cast<double>(count) / static_cast<double>(n);
        if (!seen || r < est.low) est.low = r;
        if (!seen || r > est.high) est.high = r;
        seen = true;
    }
    return est;
}

DistributionalProfile distributional_profile(
    const ShiftOperator& op, const SparseVec& x, const SparseVec& y,
    std::vector<double> delta_grid, const BigIndex& horizon,
    const BigIndex& tail_start, int64_t loop_budget) {
    check_grid(delta_grid);
    int64_t n = checked_window(horizon, tail_start, loop_budget);
    SparseVec d = sub(x, y);
    return profile_from_log_norms(difference_log_norms(op, d, n),
                                  std::move(delta_grid), horizon, tail_start);
}

std::vector<double> default_delta_grid() {
    std::vector<double> g;
    for (int e = -6; e <= 2; ++e) g.push_back(std::pow(10.0, e));
    return g;
}

PairVerdict classify_pair(const ShiftOperator& op, const SparseVec& x,
                          const SparseVec& y, const ClassifyParams& params) {
    ClassifyParams p = params;
    if (p.tail_start == 0) {
        p.tail_start = p.horizon / 10;
        if (p.tail_start < 1) p.tail_start = 1;
    }
    if (p.delta_grid.empty()) p.delta_grid = default_delta_grid();
    check_grid(p.delta_grid);
    if (p.schedule.points.empty())
        p.schedule = Schedule::geometric(1, p.horizon, 2.0);
    int64_t n = checked_window(p.horizon, p.tail_start, p.loop_budget);

    PairVerdict v;
    v.params = p;
    SparseVec d = sub(x, y);
    v.pair = op.describe() + " : " + x.describe() + " vs " + y.describe();

    // per-j scan: Li-Yorke extremes and the small-difference profile share it
    std::vector<double> log_norms = difference_log_norms(op, d, n);
    bool first = true;
    for (double g : log_norms) {
        LogReal r = g == -std::numeric_limits<double>::infinity()
                        ? LogReal::zero()
                        : LogReal::from_log(g);
        if (first || cmp(r, v.orbit_min) < 0) v.orbit_min = r;
        if (first || cmp(r, v.orbit_max) > 0) v.orbit_max = r;
        first = false;
    }
    v.profile = profile_from_log_norms(log_norms, p.delta_grid, p.horizon,
                                       p.tail_start);

    // Cesaro extremes over the schedule, then any injected far-horizon points
    BigIndex series_horizon = p.schedule.points.back();
    if (series_horizon < p.horizon) series_horizon = p.horizon;
    OrbitNormSeries series = orbit_norm_series(op, d, series_horizon);
    CesaroTrace trace =
        cesaro_trace(series, p.schedule, CesaroBackend::Auto, p.loop_budget);
    v.dip = {trace.schedule[trace.argmin], trace.min_value};
    v.peak = {trace.schedule[trace.argmax], trace.max_value};
    for (const TbilcamiMeanPoint& extra : p.extra_cesaro_points) {
        LogReal val = LogReal::from_log(extra.log_mean);
        if (cmp(val, v.dip.value) < 0) v.dip = {extra.N, val};
        if (cmp(val, v.peak.value) > 0) v.peak = {extra.N, val};
    }

    // threshold tests are strict; ties stay unsupported
    LogReal eta = LogReal::from_real(p.eta);
    LogReal lambda = LogReal::from_real(p.lambda);
    v.ly = cmp(v.orbit_min, eta) < 0 && cmp(v.orbit_max, lambda) > 0
               ? FlagStatus::Supported
               : FlagStatus::Unsupported;
    v.mean_ly = cmp(v.dip.value, eta) < 0 && cmp(v.peak.value, lambda) > 0
                    ? FlagStatus::Supported
                    : FlagStatus::Unsupported;

    // distributional flags; each weaker notion inherits the stronger one so
    // the chain DC1 => DC2 => DC2.5 => DC3 holds by construction
    const double c = p.margin;
    bool all_fstar_high = true, any_f_small = false, any_f_below = false,
         any_split = false, adjacent_gap = false;
    size_t m = v.profile.delta_grid.size();
    for (size_t i = 0; i < m; ++i) {
        double F = v.profile.F(i), Fs = v.profile.Fstar(i);
        all_fstar_high = all_fstar_high && Fs > 1.0 - c;
        any_f_small = any_f_small || F < c;
        any_f_below = any_f_below || F < 1.0 - c;
        any_split = any_split || (F < c && c < Fs);
        if (i + 1 < m)
            adjacent_gap = adjacent_gap ||
                           (F < Fs - c && v.profile.F(i + 1) <
                                              v.profile.Fstar(i + 1) - c);
    }
    bool dc1 = all_fstar_high && any_f_small;
    bool dc2 = dc1 || (all_fstar_high && any_f_below);
    bool dc2half = dc2 || any_split;
    bool dc3 = dc2half || adjacent_gap;
    v.dc1 = dc1 ? FlagStatus::Supported : FlagStatus::Unsupported;
    v.dc2 = dc2 ? FlagStatus::Supported : FlagStatus::Unsupported;
    v.dc2half = dc2half ? FlagStatus::Supported : FlagStatus::Unsupported;
    v.dc3 = dc3 ? FlagStatus::Supported : FlagStatus::Unsupported;
    return v;
}

std::string verdict_to_json(const PairVerdict& v, int indent) {
    nlohmann::ordered_json j;
    j["pair"] = v.pair;

    nlohmann::ordered_json params;
    params["horizon"] = big_to_string(v.params.horizon);
    params["tail_start"] = big_to_string(v.params.tail_start);
    params["eta"] = v.params.eta;
    params["lambda"] = v.params.lambda;
    params["margin"] = v.params.margin;
    params["delta_grid"] = v.params.delta_grid;
    nlohmann::ordered_json sched = nlohmann::ordered_json::array();
    for (const BigIndex& p : v.params.schedule.points)
        sched.push_back(big_to_string(p));
    params["schedule"] = sched;
    params["extra_cesaro_points"] = v.params.extra_cesaro_points.size();
    j["params"] = params;

    nlohmann::ordered_json flags;
    flags["LY"] = flag_str(v.ly);
    flags["meanLY"] = flag_str(v.mean_ly);
    flags["DC1"] = flag_str(v.dc1);
    flags["DC2"] = flag_str(v.dc2);
    flags["DC2half"] = flag_str(v.dc2half);
    flags["DC3"] = flag_str(v.dc3);
    j["flags"] = flags;

    nlohmann::ordered_json ev;
    ev["dip"] = mean_point_json(v.dip);
    ev["peak"] = mean_point_json(v.peak);
    ev["orbit_min"] = v.orbit_min.to_real();
    ev["orbit_max"] = v.orbit_max.to_real();
    nlohmann::ordered_json prof = nlohmann::ordered_json::array();
    for (size_t i = 0; i < v.profile.delta_grid.size(); ++i) {
        nlohmann::ordered_json row;
        row["delta"] = v.profile.delta_grid[i];
        row["F"] = v.profile.F(i);
        row["Fstar"] = v.profile.Fstar(i);
        prof.push_back(row);
    }
    ev["profile"] = prof;
    j["evidence"] = ev;
    return j.dump(indent);
}

}  // namespace meanly
