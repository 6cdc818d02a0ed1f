#include "meanly/weights.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

#include "meanly/errors.hpp"

namespace meanly {

namespace {
constexpr double kLn2 = 0.6931471805599453;
}

// ---------------------------------------------------------------------------
// AnchorProfile
// ---------------------------------------------------------------------------

double AnchorProfile::log_value(const BigIndex& j) const {
    if (anchors.empty()) throw DomainError("profile has no anchors");
    if (j < anchors.front().index || j > anchors.back().index)
        throw DomainError("index outside profile anchors; refusing to extrapolate");
    // first anchor with index >= j
    auto it = std::lower_bound(
        anchors.begin(), anchors.end(), j,
        [](const Anchor& a, const BigIndex& v) { return a.index < v; });
    if (it->index == j) return it->logv;
    const Anchor& hi = *it;
    const Anchor& lo = *(it - 1);
    // log v is affine in the index between anchors
    double frac = big_ratio(j - lo.index, hi.index - lo.index);
    return lo.logv + frac * (hi.logv - lo.logv);
}

const AnchorProfile::Anchor& AnchorProfile::anchor(AnchorRole role,
                                                   int level) const {
    for (const Anchor& a : anchors)
        if (a.role == role && a.level == level) return a;
    throw DomainError("profile anchor not present: level " +
                      std::to_string(level));
}

const BigIndex& AnchorProfile::min_index() const {
    if (anchors.empty()) throw DomainError("profile has no anchors");
    return anchors.front().index;
}

const BigIndex& AnchorProfile::max_index() const {
    if (anchors.empty()) throw DomainError("profile has no anchors");
    return anchors.back().index;
}

std::string AnchorProfile::to_json(int indent) const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const Anchor& a : anchors) {
        nlohmann::ordered_json e;
        e["index"] = big_to_string(a.index);
        e["logv"] = a.logv;
        e["role"] = a.role == AnchorRole::Valley ? "valley" : "hill";
        e["level"] = a.level;
        arr.push_back(e);
    }
    return arr.dump(indent);
}

// ---------------------------------------------------------------------------
// hill/valley anchor construction
// ---------------------------------------------------------------------------

namespace {

// v_{n_k} for signed k
double valley_logv(int k) {
    if (k == 0) return 0.0;
    if (k > 0) return -std::log(2.0 * k) / 3.0;
    return -std::log(2.0 * (-k) + 1.0) / 3.0;
}

// v_{m_k} for signed k
double hill_logv(int k, ProfileVariant variant) {
    if (variant == ProfileVariant::Flattened) return 0.0;
    if (k == 0) return kLn2 / 4.0;
    if (k > 0) return std::log(k + 2.0) / 4.0;
    return std::log(-k + 1.0) / 4.0;
}

}  // namespace

AnchorProfile build_tbilcami(ProfileVariant variant, int k_max) {
    if (k_max < 1) throw DomainError("build_tbilcami: k_max must be >= 1");

    // exact positive-side recurrence
    std::vector<BigIndex> n(k_max + 2), m(k_max + 1);
    n[1] = 4;
    m[0] = 1;
    for (int k = 1; k <= k_max; ++k) {
        BigIndex f = 16 * BigIndex(k) * k * k + 1;
        m[k] = f * n[k];
        n[k + 1] = f * m[k];
    }

    AnchorProfile p;
    p.variant = variant;
    p.k_max = k_max;
    p.anchors.reserve(4 * k_max + 2);
    for (int k = k_max; k >= 1; --k) {
        p.anchors.push_back({-m[k], valley_logv(-k), AnchorRole::Valley, -k});
        p.anchors.push_back({-n[k], hill_logv(-k, variant), AnchorRole::Hill, -k});
    }
    p.anchors.push_back({BigIndex(-1), valley_logv(0), AnchorRole::Valley, 0});
    p.anchors.push_back({BigIndex(1), hill_logv(0, variant), AnchorRole::Hill, 0});
    for (int k = 1; k <= k_max; ++k) {
        p.anchors.push_back({n[k], valley_logv(k), AnchorRole::Valley, k});
        p.anchors.push_back({m[k], hill_logv(k, variant), AnchorRole::Hill, k});
    }
    return p;
}

double tbilcami_midpoint_logv_forward(int k) {
    if (k < 1) throw DomainError("midpoint defined for k >= 1");
    return -std::log(2.0 * k) / 6.0 + std::log(k + 2.0) / 8.0;
}

double tbilcami_midpoint_logv_backward(int k) {
    if (k < 1) throw DomainError("midpoint defined for k >= 1");
    return -std::log(2.0 * k + 1.0) / 6.0 + std::log(k + 1.0) / 8.0;
}

// ---------------------------------------------------------------------------
// verify_tbilcami
// ---------------------------------------------------------------------------

CheckReport verify_tbilcami(const AnchorProfile& profile, int k, double M) {
    if (k < 1) throw DomainError("verify_tbilcami: k must be >= 1");
    if (profile.k_max < k + 1)
        throw DomainError("verify_tbilcami: profile needs anchors through level " +
                          std::to_string(k + 1));

    const BigIndex& n_k = profile.anchor(AnchorRole::Valley, k).index;
    const BigIndex& m_k = profile.anchor(AnchorRole::Hill, k).index;
    const BigIndex& m_neg_k = profile.anchor(AnchorRole::Hill, -k).index;
    const BigIndex& m_km1 = profile.anchor(AnchorRole::Hill, k - 1).index;

    // per-segment slope (lv_hi - lv_lo)/(hi - lo), kept in the log domain:
    // spans grow like exp(Theta(k^3 log k)) and would underflow double for
    // large k, while the slope is only ever compared and multiplied by exact
    // window lengths, never exponentiated per step
    struct Seg {
        const AnchorProfile::Anchor* lo;
        const AnchorProfile::Anchor* hi;
        LogReal slope;
    };
    std::vector<Seg> segs;
    segs.reserve(profile.anchors.size());
    for (size_t i = 0; i + 1 < profile.anchors.size(); ++i) {
        const auto& lo = profile.anchors[i];
        const auto& hi = profile.anchors[i + 1];
        LogReal s = log_mul(LogReal::from_real(hi.logv - lo.logv),
                            LogReal::from_log(-ln_big(hi.index - lo.index)));
        segs.push_back({&lo, &hi, s});
    }

    CheckReport rep;
    rep.title = "hill/valley profile admissibility, level " + std::to_string(k);
    rep.set_config("variant", profile.variant == ProfileVariant::Original
                                  ? "original"
                                  : "flattened");
    rep.set_config("k", std::to_string(k));
    rep.set_config("M", std::to_string(M));

    // forward: S_k = sup slope over segments outside ]m_{-k}, m_{k-1}];
    // S_k^{k(n_k - m_{-k})} <= min{M, v_{n_{-(k-1)}}/v_{n_k}} with
    // n_k - m_{-k} = 2 n_k and the value ratio (2k/(2k-1))^{1/3}
    bool have = false;
    LogReal S_k;
    for (const Seg& s : segs)
        if (s.hi->index <= m_neg_k || s.lo->index >= m_km1) {
            if (!have || cmp(s.slope, S_k) > 0) S_k = s.slope;
            have = true;
        }
    double lhs_f =
        log_mul(S_k, LogReal::from_log(std::log(2.0 * k) + ln_big(n_k)))
            .to_real();
    double rhs_f = std::min(std::log(M),
                            std::log((2.0 * k) / (2.0 * k - 1.0)) / 3.0);
    rep.add("forward_slope", lhs_f <= rhs_f, lhs_f, rhs_f, rhs_f - lhs_f,
            "S_k^{k(n_k - m_{-k})} <= min{M, v_{n_{-(k-1)}}/v_{n_k}}");

    // backward: s_k = inf slope over segments outside ]m_{-k}, m_k];
    // s_k^{k(n_{-k} - m_k)} <= min{M, ((2k+1)/2k)^{1/3}} with
    // n_{-k} - m_k = -2 m_k
    have = false;
    LogReal s_k;
    for (const Seg& s : segs)
        if (s.hi->index <= m_neg_k || s.lo->index >= m_k) {
            if (!have || cmp(s.slope, s_k) < 0) s_k = s.slope;
            have = true;
        }
    double lhs_b =
        log_mul(s_k.negated(),
                LogReal::from_log(std::log(2.0 * k) + ln_big(m_k)))
            .to_real();
    double rhs_b = std::min(std::log(M),
                            std::log((2.0 * k + 1.0) / (2.0 * k)) / 3.0);
    rep.add("backward_slope", lhs_b <= rhs_b, lhs_b, rhs_b, rhs_b - lhs_b,
            "s_k^{k(n_{-k} - m_k)} <= min{M, v_{n_{-k}}/v_{n_{k+1}}}");

    // envelopes: M v_{m_{-k}} >= v_j on [m_{-k}, m_{k-1}] and
    // M v_{m_k} >= v_j on [m_{-k}, m_k]. v is piecewise monotone between
    // anchors (log-affine), so the sup over each window is attained at an
    // anchor; checking anchors inside the window suffices.
    double peak_f = -std::numeric_limits<double>::infinity();
    double peak_b = -std::numeric_limits<double>::infinity();
    for (const auto& a : profile.anchors) {
        if (a.index >= m_neg_k && a.index <= m_km1)
            peak_f = std::max(peak_f, a.logv);
        if (a.index >= m_neg_k && a.index <= m_k)
            peak_b = std::max(peak_b, a.logv);
    }
    double lv_m_neg_k = profile.anchor(AnchorRole::Hill, -k).logv;
    double lv_m_k = profile.anchor(AnchorRole::Hill, k).logv;
    double lhs_env_f = peak_f;
    double rhs_env_f = std::log(M) + lv_m_neg_k;
    rep.add("envelope_forward", lhs_env_f <= rhs_env_f, lhs_env_f, rhs_env_f,
            rhs_env_f - lhs_env_f, "M v_{m_{-k}} >= v_j on [m_{-k}, m_{k-1}]");
    double lhs_env_b = peak_b;
    double rhs_env_b = std::log(M) + lv_m_k;
    rep.add("envelope_backward", lhs_env_b <= rhs_env_b, lhs_env_b, rhs_env_b,
            rhs_env_b - lhs_env_b, "M v_{m_k} >= v_j on [m_{-k}, m_k]");

    return rep;
}

// ---------------------------------------------------------------------------
// WeightModel
// ---------------------------------------------------------------------------

WeightModel WeightModel::explicit_list(std::vector<double> w) {
    for (double x : w)
        if (!(x > 0.0))
            throw DomainError("explicit weights must be strictly positive");
    WeightModel m;
    m.kind = Kind::ExplicitList;
    m.values = std::move(w);
    return m;
}

WeightModel WeightModel::constant(double c) {
    if (!(c > 0.0)) throw DomainError("constant weight must be strictly positive");
    WeightModel m;
    m.kind = Kind::Constant;
    m.c = c;
    return m;
}

std::string WeightModel::describe() const {
    switch (kind) {
        case Kind::ExplicitList:
            return "explicit[" + std::to_string(values.size()) + "]";
        case Kind::BlockHalvesTwos:
            return "block-halves-twos";
        case Kind::Harmonic:
            return "harmonic";
        case Kind::Constant:
            return "constant(" + std::to_string(c) + ")";
    }
    return "?";
}

BigIndex block_of(const BigIndex& j) {
    if (j < 1) throw DomainError("block_of: index must be >= 1");
    // block n spans (n-1)n+1 .. n(n+1); with s = isqrt(j) the block is s
    // when j <= s(s+1), else s+1
    BigIndex s = big_isqrt(j);
    return j <= s * (s + 1) ? s : s + 1;
}

namespace {

// offset of j within its pair-block as a machine integer (offsets are at most
// 2 sqrt(j), far inside int64 for any reachable index)
int64_t block_offset(const BigIndex& j, const BigIndex& n) {
    BigIndex off = j - (n - 1) * n;
    if (!fits_i64(off)) throw DomainError("block offset exceeds machine range");
    return off.convert_to<int64_t>();
}

}  // namespace

LogReal log_weight(const WeightModel& model, const BigIndex& j) {
    switch (model.kind) {
        case WeightModel::Kind::ExplicitList: {
            if (j < 1 || j > BigIndex(static_cast<int64_t>(model.values.size())))
                throw DomainError("explicit weight index out of range");
            return LogReal::from_real(model.values[j.convert_to<size_t>() - 1]);
        }
        case WeightModel::Kind::BlockHalvesTwos: {
            BigIndex n = block_of(j);
            int64_t off = block_offset(j, n);
            bool first_half = BigIndex(off) <= n;
            return LogReal::from_log(first_half ? -kLn2 : kLn2);
        }
        case WeightModel::Kind::Harmonic: {
            if (j < 2) throw DomainError("harmonic weight defined for j >= 2");
            double dj = big_ratio(j, 1);
            return LogReal::from_log(std::log(dj) - std::log(dj - 1.0));
        }
        case WeightModel::Kind::Constant:
            return LogReal::from_real(model.c);
    }
    throw DomainError("unknown weight model");
}

double cum_log(const WeightModel& model, const BigIndex& j) {
    if (j < 0) throw DomainError("cum_log: index must be >= 0");
    if (j == 0) return 0.0;
    switch (model.kind) {
        case WeightModel::Kind::ExplicitList: {
            if (j > BigIndex(static_cast<int64_t>(model.values.size())))
                throw DomainError("explicit weight index out of range");
            double acc = 0.0;
            size_t hi = j.convert_to<size_t>();
            for (size_t i = 0; i < hi; ++i) acc += std::log(model.values[i]);
            return acc;
        }
        case WeightModel::Kind::BlockHalvesTwos: {
            // complete blocks cancel (n halves, n twos); inside block n the
            // prefix is -(offset) ln 2 through the first half, then climbs
            // back to 0 at the block end n(n+1)
            BigIndex n = block_of(j);
            int64_t off = block_offset(j, n);
            if (BigIndex(off) <= n) return -static_cast<double>(off) * kLn2;
            BigIndex back = j - n * (n + 1);  // <= 0
            return static_cast<double>(back.convert_to<int64_t>()) * kLn2;
        }
        case WeightModel::Kind::Harmonic:
            // telescoping: prod_{i=2}^{j} i/(i-1) = j, with w_1 := 1
            return ln_big(j);
        case WeightModel::Kind::Constant:
            if (model.c == 1.0) return 0.0;
            return big_ratio(j, 1) * std::log(model.c);
    }
    throw DomainError("unknown weight model");
}

}  // namespace meanly
