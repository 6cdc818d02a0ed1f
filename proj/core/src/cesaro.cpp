#include "meanly/cesaro.hpp"

#include <algorithm>
#include <cmath>

#include "meanly/errors.hpp"

namespace meanly {

namespace {

// ln |e^d - 1|, stable across the full double range including denormal d
double ln_abs_expm1(double d) {
    if (d >= 0.5) return d + std::log1p(-std::exp(-d));
    if (d <= -0.5) return std::log1p(-std::exp(d));
    return std::log(std::fabs(std::expm1(d)));
}

constexpr double kLn2 = 0.6931471805599453;

}  // namespace

LogReal segment_sum_endpoints(double log_first, double log_last,
                              const BigIndex& count) {
    if (count < 0) throw DomainError("segment count must be >= 0");
    if (count == 0) return LogReal::zero();
    if (count == 1) return LogReal::from_log(log_first);
    double delta = log_last - log_first;
    if (delta == 0.0) return LogReal::from_log(log_first + ln_big(count));
    // per-step ratio u = delta/(count-1); total exponent D = u*count. The
    // ratio count/(count-1) never overflows, so D is safe to form directly.
    double D = delta * big_ratio(count, count - 1);
    if (std::fabs(D) < 1e-30)  // numerically a constant segment
        return LogReal::from_log(log_first + ln_big(count));
    double ln_u = std::log(std::fabs(delta)) - ln_big(count - 1);
    // expm1(u) ~ u once |u| < 1e-30; below that exp(ln_u) may be denormal or
    // zero, so substitute ln|u| for ln|expm1(u)| instead of exponentiating
    double ln_den = ln_u > -69.0
                        ? ln_abs_expm1(std::copysign(std::exp(ln_u), delta))
                        : ln_u;
    return LogReal::from_log(log_first + ln_abs_expm1(D) - ln_den);
}

LogReal geometric_segment_sum(double log_a, double log_q,
                              const BigIndex& count) {
    if (count < 0) throw DomainError("segment count must be >= 0");
    if (count == 0) return LogReal::zero();
    if (count == 1) return LogReal::from_log(log_a);
    if (log_q == 0.0) return LogReal::from_log(log_a + ln_big(count));
    // D = log_q * count, formed in the log domain because count may exceed
    // the double range; an overflowing D means the sum's own log overflows,
    // which propagates as an honest infinity
    double lnD = std::log(std::fabs(log_q)) + ln_big(count);
    double D = std::copysign(std::exp(lnD), log_q);
    if (std::fabs(D) < 1e-30) return LogReal::from_log(log_a + ln_big(count));
    return LogReal::from_log(log_a + ln_abs_expm1(D) - ln_abs_expm1(log_q));
}

// ---------------------------------------------------------------------------
// schedules
// ---------------------------------------------------------------------------

namespace {

Schedule make_schedule(Schedule::Kind kind, std::vector<BigIndex> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    for (const BigIndex& n : pts)
        if (n < 1) throw DomainError("schedule points must be >= 1");
    Schedule s;
    s.kind = kind;
    s.points = std::move(pts);
    return s;
}

}  // namespace

Schedule Schedule::geometric(const BigIndex& n_min, const BigIndex& n_max,
                             double factor) {
    if (n_min < 1 || n_max < n_min)
        throw DomainError("geometric schedule needs 1 <= n_min <= n_max");
    if (!(factor > 1.0)) throw DomainError("geometric factor must be > 1");
    // fixed-point multiplier keeps the grid exact and deterministic
    const int64_t scale = int64_t(1) << 32;
    BigIndex fnum = static_cast<int64_t>(std::llround(factor * scale));
    std::vector<BigIndex> pts;
    BigIndex n = n_min;
    while (n < n_max) {
        pts.push_back(n);
        BigIndex next = (n * fnum) >> 32;
        n = next > n ? next : BigIndex(n + 1);
    }
    pts.push_back(n_max);  // the limit point always participates
    return make_schedule(Kind::GeometricGrid, std::move(pts));
}

Schedule Schedule::tbilcami_dips(const AnchorProfile& profile,
                                 const std::vector<int>& ks) {
    std::vector<BigIndex> pts;
    pts.reserve(ks.size());
    for (int k : ks) {
        if (k < 1) throw DomainError("dip level must be >= 1");
        pts.push_back(2 * BigIndex(k) *
                      profile.anchor(AnchorRole::Valley, k).index);
    }
    return make_schedule(Kind::TbilcamiDips, std::move(pts));
}

Schedule Schedule::tbilcami_hills(const AnchorProfile& profile,
                                  const std::vector<int>& ks) {
    std::vector<BigIndex> pts;
    pts.reserve(ks.size());
    for (int k : ks) {
        if (k < 1) throw DomainError("hill level must be >= 1");
        pts.push_back(profile.anchor(AnchorRole::Hill, k).index);
    }
    return make_schedule(Kind::TbilcamiHills, std::move(pts));
}

Schedule Schedule::explicit_points(std::vector<BigIndex> ns) {
    return make_schedule(Kind::Explicit, std::move(ns));
}

// ---------------------------------------------------------------------------
// Cesaro means
// ---------------------------------------------------------------------------

namespace {

LogReal partial_sum_segments(const OrbitNormSeries& series, const BigIndex& K,
                             const BigIndex& N) {
    LogSum acc;
    for (const auto& strand : series.strands()) {
        for (const auto& seg : strand.segments) {
            if (seg.j_end <= K) continue;
            if (seg.j_start > N) break;  // segments are ordered
            BigIndex lo = seg.j_start > K ? seg.j_start : BigIndex(K + 1);
            BigIndex hi = seg.j_end < N ? seg.j_end : N;
            if (lo > hi) continue;
            acc.add(segment_sum_endpoints(seg.log_at(lo), seg.log_at(hi),
                                          hi - lo + 1));
        }
    }
    return acc.value();
}

LogReal partial_sum_loop(const OrbitNormSeries& series, const BigIndex& K,
                         const BigIndex& N, int64_t loop_budget) {
    BigIndex hi = N;
    // a dead orbit contributes nothing past its death
    if (series.first_zero() && *series.first_zero() - 1 < hi)
        hi = *series.first_zero() - 1;
    if (hi <= K) return LogReal::zero();
    if (hi - K > loop_budget)
        throw BudgetError("loop backend window exceeds the term budget");
    LogSum acc;
    for (BigIndex j = K + 1; j <= hi; ++j) acc.add(series.point(j));
    return acc.value();
}

}  // namespace

LogReal orbit_partial_sum(const OrbitNormSeries& series, const BigIndex& K,
                          const BigIndex& N, CesaroBackend backend,
                          int64_t loop_budget) {
    if (K < 0 || N < K) throw DomainError("need 0 <= K <= N");
    if (N > series.horizon()) throw DomainError("window beyond series horizon");
    if (N == K) return LogReal::zero();
    switch (backend) {
        case CesaroBackend::Segment:
            return partial_sum_segments(series, K, N);  // throws if loop-only
        case CesaroBackend::Loop:
            return partial_sum_loop(series, K, N, loop_budget);
        case CesaroBackend::Auto:
            return series.exact() ? partial_sum_segments(series, K, N)
                                  : partial_sum_loop(series, K, N, loop_budget);
    }
    throw DomainError("unknown backend");
}

LogReal cesaro_mean(const OrbitNormSeries& series, const BigIndex& N,
                    CesaroBackend backend, int64_t loop_budget) {
    if (N < 1) throw DomainError("Cesaro horizon must be >= 1");
    LogReal total = orbit_partial_sum(series, 0, N, backend, loop_budget);
    if (total.is_zero()) return total;
    return LogReal::from_log(total.logmag - ln_big(N));
}

CesaroTrace cesaro_trace(const OrbitNormSeries& series, const Schedule& schedule,
                         CesaroBackend backend, int64_t loop_budget) {
    if (schedule.points.empty()) throw DomainError("empty schedule");
    CesaroTrace tr;
    tr.schedule = schedule.points;
    tr.values.reserve(schedule.points.size());
    tr.backends.reserve(schedule.points.size());
    for (size_t i = 0; i < schedule.points.size(); ++i) {
        CesaroBackend used = backend == CesaroBackend::Auto
                                 ? (series.exact() ? CesaroBackend::Segment
                                                   : CesaroBackend::Loop)
                                 : backend;
        LogReal v = cesaro_mean(series, schedule.points[i], used, loop_budget);
        tr.values.push_back(v);
        tr.backends.push_back(used);
        if (i == 0 || cmp(v, tr.min_value) < 0) {
            tr.min_value = v;
            tr.argmin = i;
        }
        if (i == 0 || cmp(v, tr.max_value) > 0) {
            tr.max_value = v;
            tr.argmax = i;
        }
    }
    return tr;
}

double density_bound_from_cesaro(LogReal a_n, double delta) {
    if (!(delta > 0.0)) throw DomainError("delta must be positive");
    if (a_n.is_zero()) return 0.0;
    if (a_n.sign < 0) throw DomainError("Cesaro mean of norms cannot be negative");
    double lr = a_n.logmag - std::log(delta);
    return lr >= 0.0 ? 1.0 : std::exp(lr);
}

// ---------------------------------------------------------------------------
// streaming hill/valley evaluation at astronomical levels
// ---------------------------------------------------------------------------

namespace {

double stream_valley_logv(int k) { return -std::log(2.0 * k) / 3.0; }

double stream_hill_logv(int k, ProfileVariant variant) {
    if (variant == ProfileVariant::Flattened) return 0.0;
    return std::log(k + 2.0) / 4.0;
}

// sum of v_j for j in (a, min(b, N)] with log v linear from (a, lva) to
// (b, lvb); endpoints are reconstructed stably from the segment ratio
LogReal stream_seg_sum(const BigIndex& a, double lva, const BigIndex& b,
                       double lvb, const BigIndex& N) {
    if (N <= a) return LogReal::zero();
    BigIndex hi = b < N ? b : N;
    BigIndex cnt = hi - a;
    BigIndex span = b - a;
    double delta = lvb - lva;
    if (delta == 0.0) return LogReal::from_log(lva + ln_big(cnt));
    // first term log = lva + u, last = lva + cnt*u, u = delta/span
    double ln_u = std::log(std::fabs(delta)) - ln_big(span);
    double first = lva + std::copysign(std::exp(ln_u), delta);
    double last = lva + delta * big_ratio(cnt, span);
    return segment_sum_endpoints(first, last, cnt);
}

// A_N(e_0) with N at the level-k_stop hill (N = m_k) or dip (N = 2 k n_k)
TbilcamiMeanPoint stream_cesaro(int k_stop, bool hill, ProfileVariant variant) {
    if (k_stop < 1) throw DomainError("level must be >= 1");

    // pass 1: the horizon, via the bare index recurrence
    BigIndex n = 4, m = 1;
    for (int k = 1; k <= k_stop; ++k) {
        BigIndex f = 16 * BigIndex(k) * k * k + 1;
        m = f * n;
        if (k < k_stop) n = f * m;
    }
    BigIndex N = hill ? m : BigIndex(2 * k_stop * n);

    // pass 2: stream segment sums, holding one live anchor pair
    LogSum acc;
    double lv_prev = stream_hill_logv(0, variant);
    acc.add_log(lv_prev);  // j = 1 (the level-0 hill)
    BigIndex prev = 1;
    BigIndex n_k = 4;
    for (int k = 1; k <= k_stop && prev < N; ++k) {
        BigIndex f = 16 * BigIndex(k) * k * k + 1;
        BigIndex m_k = f * n_k;
        double lv_n = stream_valley_logv(k);
        acc.add(stream_seg_sum(prev, lv_prev, n_k, lv_n, N));
        prev = n_k;
        lv_prev = lv_n;
        if (prev >= N) break;
        double lv_m = stream_hill_logv(k, variant);
        acc.add(stream_seg_sum(prev, lv_prev, m_k, lv_m, N));
        prev = m_k;
        lv_prev = lv_m;
        n_k = f * m_k;
    }
    TbilcamiMeanPoint out;
    out.N = N;
    out.log_mean = acc.value().logmag - ln_big(N);
    return out;
}

}  // namespace

TbilcamiMeanPoint tbilcami_dip_mean(int k, ProfileVariant variant) {
    return stream_cesaro(k, /*hill=*/false, variant);
}

TbilcamiMeanPoint tbilcami_hill_mean(int k, ProfileVariant variant) {
    return stream_cesaro(k, /*hill=*/true, variant);
}

}  // namespace meanly
