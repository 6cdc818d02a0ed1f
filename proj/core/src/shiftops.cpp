#include "meanly/shiftops.hpp"

#include <algorithm>
#include <cmath>

#include "meanly/errors.hpp"

namespace meanly {

namespace {
constexpr double kLn2 = 0.6931471805599453;
}

// ---------------------------------------------------------------------------
// factories
// ---------------------------------------------------------------------------

ShiftOperator ShiftOperator::unilateral_backward(WeightModel w, double p) {
    if (p < 1.0) throw DomainError("norm exponent p must be >= 1");
    ShiftOperator op;
    op.kind = Kind::UnilateralBackward;
    op.weights = std::move(w);
    op.p = p;
    return op;
}

ShiftOperator ShiftOperator::unilateral_forward(WeightModel w, double p) {
    if (p < 1.0) throw DomainError("norm exponent p must be >= 1");
    ShiftOperator op;
    op.kind = Kind::UnilateralForward;
    op.weights = std::move(w);
    op.p = p;
    return op;
}

ShiftOperator ShiftOperator::bilateral_forward(AnchorProfile v, double p) {
    if (p < 1.0) throw DomainError("norm exponent p must be >= 1");
    ShiftOperator op;
    op.kind = Kind::BilateralForward;
    op.profile = std::move(v);
    op.p = p;
    return op;
}

ShiftOperator ShiftOperator::bilateral_backward(AnchorProfile v, double p) {
    if (p < 1.0) throw DomainError("norm exponent p must be >= 1");
    ShiftOperator op;
    op.kind = Kind::BilateralBackward;
    op.profile = std::move(v);
    op.p = p;
    return op;
}

ShiftOperator ShiftOperator::direct_sum_with_identity(ShiftOperator inner_op) {
    if (inner_op.bilateral() || inner_op.kind == Kind::DirectSumWithIdentity)
        throw CapabilityError(
            "direct sum wraps unilateral shifts only (sign-split coordinates "
            "collide otherwise)");
    ShiftOperator op;
    op.kind = Kind::DirectSumWithIdentity;
    op.p = inner_op.p;
    op.inner = std::make_shared<const ShiftOperator>(std::move(inner_op));
    return op;
}

ShiftOperator ShiftOperator::identity() {
    return unilateral_forward(WeightModel::constant(1.0));
}

std::string ShiftOperator::describe() const {
    switch (kind) {
        case Kind::UnilateralBackward:
            return "backward[" + weights.describe() + "]";
        case Kind::UnilateralForward:
            return "forward[" + weights.describe() + "]";
        case Kind::BilateralForward:
            return "bilateral-forward[kmax=" + std::to_string(profile.k_max) +
                   (profile.variant == ProfileVariant::Flattened ? ",flat" : "") +
                   "]";
        case Kind::BilateralBackward:
            return "bilateral-backward[kmax=" + std::to_string(profile.k_max) +
                   (profile.variant == ProfileVariant::Flattened ? ",flat" : "") +
                   "]";
        case Kind::DirectSumWithIdentity:
            return inner->describe() + "+identity";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// apply
// ---------------------------------------------------------------------------

SparseVec apply(const ShiftOperator& op, const SparseVec& x) {
    std::vector<SparseVec::Entry> out;
    out.reserve(x.entries.size());
    switch (op.kind) {
        case ShiftOperator::Kind::UnilateralBackward:
            for (const auto& e : x.entries) {
                if (e.index < 1) throw DomainError("unilateral index must be >= 1");
                if (e.index == 1) continue;  // position 1 drops out
                out.push_back(
                    {e.index - 1, log_mul(e.coeff, log_weight(op.weights, e.index))});
            }
            break;
        case ShiftOperator::Kind::UnilateralForward:
            for (const auto& e : x.entries) {
                if (e.index < 1) throw DomainError("unilateral index must be >= 1");
                out.push_back(
                    {e.index + 1, log_mul(e.coeff, log_weight(op.weights, e.index))});
            }
            break;
        case ShiftOperator::Kind::BilateralForward:
            for (const auto& e : x.entries) out.push_back({e.index + 1, e.coeff});
            break;
        case ShiftOperator::Kind::BilateralBackward:
            for (const auto& e : x.entries) out.push_back({e.index - 1, e.coeff});
            break;
        case ShiftOperator::Kind::DirectSumWithIdentity: {
            SparseVec pos;
            for (const auto& e : x.entries) {
                if (e.index == 0)
                    throw DomainError("direct-sum coordinates are nonzero indices");
                if (e.index < 0)
                    out.push_back(e);  // identity summand
                else
                    pos.entries.push_back(e);
            }
            SparseVec moved = apply(*op.inner, pos);
            for (const auto& e : moved.entries) out.push_back(e);
            break;
        }
    }
    return SparseVec::from_entries(std::move(out));
}

// ---------------------------------------------------------------------------
// orbit_norm
// ---------------------------------------------------------------------------

namespace {

// log |coefficient| of the strand (s, c) after j steps of a unilateral shift,
// or nullopt when annihilated
std::optional<double> unilateral_strand_log(const ShiftOperator& op,
                                            const BigIndex& s, LogReal c,
                                            const BigIndex& j) {
    if (s < 1) throw DomainError("unilateral index must be >= 1");
    if (op.kind == ShiftOperator::Kind::UnilateralBackward) {
        if (s <= j) return std::nullopt;  // fell off the left end
        return c.logmag + cum_log(op.weights, s) - cum_log(op.weights, s - j);
    }
    // forward: window product w_s ... w_{s+j-1}
    if (op.weights.kind == WeightModel::Kind::Harmonic && s == 1 && j > 0)
        throw DomainError("harmonic forward shift undefined at index 1");
    return c.logmag + cum_log(op.weights, s + j - 1) - cum_log(op.weights, s - 1);
}

}  // namespace

LogReal orbit_norm(const ShiftOperator& op, const SparseVec& x,
                   const BigIndex& j) {
    if (j < 0) throw DomainError("orbit time must be >= 0");
    LogSum acc;  // of p-th powers
    const double p = op.p;
    switch (op.kind) {
        case ShiftOperator::Kind::UnilateralBackward:
        case ShiftOperator::Kind::UnilateralForward:
            for (const auto& e : x.entries) {
                auto g = unilateral_strand_log(op, e.index, e.coeff, j);
                if (g) acc.add_log(p * *g);
            }
            break;
        case ShiftOperator::Kind::BilateralForward:
            for (const auto& e : x.entries)
                acc.add_log(p * e.coeff.logmag + op.profile.log_value(e.index + j));
            break;
        case ShiftOperator::Kind::BilateralBackward:
            for (const auto& e : x.entries)
                acc.add_log(p * e.coeff.logmag + op.profile.log_value(e.index - j));
            break;
        case ShiftOperator::Kind::DirectSumWithIdentity: {
            SparseVec pos;
            for (const auto& e : x.entries) {
                if (e.index == 0)
                    throw DomainError("direct-sum coordinates are nonzero indices");
                if (e.index < 0)
                    acc.add_log(p * e.coeff.logmag);  // identity summand
                else
                    pos.entries.push_back(e);
            }
            if (!pos.entries.empty()) {
                LogReal r = orbit_norm(*op.inner, pos, j);
                if (!r.is_zero()) acc.add_log(p * r.logmag);
            }
            break;
        }
    }
    LogReal total = acc.value();
    if (total.is_zero()) return total;
    return LogReal::from_log(total.logmag / p);
}

LogReal vector_norm(const ShiftOperator& op, const SparseVec& x) {
    return orbit_norm(op, x, 0);
}

// ---------------------------------------------------------------------------
// operator_norm
// ---------------------------------------------------------------------------

LogReal operator_norm(const ShiftOperator& op, const BigIndex& n) {
    if (n < 0) throw DomainError("operator power must be >= 0");
    if (n == 0) return LogReal::one();
    bool backward = op.kind == ShiftOperator::Kind::UnilateralBackward;
    bool forward = op.kind == ShiftOperator::Kind::UnilateralForward;
    if (!backward && !forward)
        throw CapabilityError(
            "operator_norm: closed form available for unilateral shifts only");
    switch (op.weights.kind) {
        case WeightModel::Kind::Harmonic:
            // sup_k prod_{i=k-n+1}^{k} i/(i-1) = sup_k k/(k-n) = n+1 at k=n+1
            if (forward)
                throw CapabilityError(
                    "harmonic forward windows are unbounded toward index 1");
            return LogReal::from_log(ln_big(n + 1));
        case WeightModel::Kind::BlockHalvesTwos:
            // pair-block n contains a run of n consecutive 2s, so the best
            // window of length n is exactly 2^n
            return LogReal::from_log(big_ratio(n, 1) * kLn2);
        case WeightModel::Kind::Constant:
            return LogReal::from_log(big_ratio(n, 1) * std::log(op.weights.c));
        case WeightModel::Kind::ExplicitList: {
            const auto& w = op.weights.values;
            const BigIndex len(static_cast<int64_t>(w.size()));
            // valid windows [k-n+1, k]: within [2, len] backward (w_1 is never
            // consumed: B annihilates e_1), within [1, len] forward
            if (backward ? (n > len - 1) : (n > len))
                throw DomainError("window longer than the explicit weight list");
            size_t nn = n.convert_to<size_t>();
            // prefix logs L(0..len)
            std::vector<double> L(w.size() + 1, 0.0);
            for (size_t i = 0; i < w.size(); ++i) L[i + 1] = L[i] + std::log(w[i]);
            double best = -std::numeric_limits<double>::infinity();
            for (size_t k = nn + (backward ? 1 : 0); k <= w.size(); ++k)
                best = std::max(best, L[k] - L[k - nn]);
            return LogReal::from_log(best);
        }
    }
    throw CapabilityError("operator_norm: unsupported weight model");
}

// ---------------------------------------------------------------------------
// orbit norm series
// ---------------------------------------------------------------------------

double OrbitNormSeries::Segment::log_at(const BigIndex& j) const {
    if (j < j_start || j > j_end) throw DomainError("index outside segment");
    if (j == j_start) return log_start;
    if (j == j_end) return log_end;
    double frac = big_ratio(j - j_start, j_end - j_start);
    return log_start + frac * (log_end - log_start);
}

LogReal OrbitNormSeries::point(const BigIndex& j) const {
    return orbit_norm(op_, x_, j);
}

const std::vector<OrbitNormSeries::Strand>& OrbitNormSeries::strands() const {
    if (!exact_)
        throw CapabilityError("series is loop-mode only; no exact segments");
    return strands_;
}

namespace {

using Strand = OrbitNormSeries::Strand;
using Segment = OrbitNormSeries::Segment;

// constant-weight regions of BlockHalvesTwos in index space: within pair-block
// n the half-open runs ((n-1)n, n^2] (weight 1/2) and (n^2, n(n+1)] (weight 2)
BigIndex block_region_floor(const BigIndex& i) {
    BigIndex n = block_of(i);
    return i <= n * n ? BigIndex((n - 1) * n) : BigIndex(n * n);
}

BigIndex block_region_ceil(const BigIndex& i) {
    BigIndex n = block_of(i);
    return i <= n * n ? BigIndex(n * n) : BigIndex(n * (n + 1));
}

// strand of a unilateral shift; nullopt when no exact decomposition exists
std::optional<Strand> build_unilateral_strand(const ShiftOperator& op,
                                              const BigIndex& s, LogReal c,
                                              const BigIndex& horizon,
                                              size_t budget) {
    const WeightModel& w = op.weights;
    bool backward = op.kind == ShiftOperator::Kind::UnilateralBackward;
    Strand st;
    auto g = [&](const BigIndex& j) {
        auto v = unilateral_strand_log(op, s, c, j);
        return *v;
    };

    if (backward) st.first_zero = s;
    BigIndex alive_end = backward ? BigIndex(s - 1) : horizon;
    if (alive_end > horizon) alive_end = horizon;
    if (alive_end < 1) return st;  // dead from the start (e_1 backward)

    switch (w.kind) {
        case WeightModel::Kind::Constant: {
            st.segments.push_back({1, alive_end, g(1), g(alive_end)});
            return st;
        }
        case WeightModel::Kind::BlockHalvesTwos: {
            if (backward) {
                // the step j -> j+1 consumes w_{s-j}; a run [j1, j2] is affine
                // while every consumed index stays in one half-block region
                // (floor, ceil], i.e. s - j2 + 1 > floor, so j2 = s - floor
                BigIndex j_start = 1;
                while (j_start <= alive_end) {
                    if (st.segments.size() > budget) return std::nullopt;
                    BigIndex i = s - j_start;  // first weight the run consumes
                    BigIndex floor = block_region_floor(i);
                    BigIndex j_end = s - floor;
                    if (j_end > alive_end) j_end = alive_end;
                    st.segments.push_back({j_start, j_end, g(j_start), g(j_end)});
                    j_start = j_end + 1;
                }
            } else {
                // the step j -> j+1 consumes w_{s+j}: run ends at j2 with
                // s + j2 - 1 = ceil. Two regions per pair-block bound the
                // segment count up front (the walk itself must not start when
                // the horizon spans astronomically many blocks).
                BigIndex nblocks = block_of(s + horizon) - block_of(s) + 1;
                if (2 * nblocks > BigIndex(static_cast<int64_t>(budget)))
                    return std::nullopt;
                BigIndex j_start = 1;
                while (j_start <= horizon) {
                    BigIndex i = s + j_start;
                    BigIndex ceil = block_region_ceil(i);
                    BigIndex j_end = ceil - s + 1;
                    if (j_end > horizon) j_end = horizon;
                    st.segments.push_back({j_start, j_end, g(j_start), g(j_end)});
                    j_start = j_end + 1;
                }
            }
            return st;
        }
        case WeightModel::Kind::Harmonic:
        case WeightModel::Kind::ExplicitList:
            return std::nullopt;  // not piecewise log-linear / loop-only
    }
    return std::nullopt;
}

// strand of a bilateral shift over the anchor profile
Strand build_bilateral_strand(const ShiftOperator& op, const BigIndex& s,
                              LogReal c, const BigIndex& horizon) {
    const AnchorProfile& prof = op.profile;
    bool fwd = op.kind == ShiftOperator::Kind::BilateralForward;
    BigIndex last = fwd ? BigIndex(s + horizon) : BigIndex(s - horizon);
    if (fwd ? (last > prof.max_index()) : (last < prof.min_index()))
        throw DomainError("horizon beyond profile anchors");

    auto g = [&](const BigIndex& j) {
        BigIndex idx = fwd ? BigIndex(s + j) : BigIndex(s - j);
        return c.logmag + prof.log_value(idx) / op.p;
    };

    Strand st;
    const auto& A = prof.anchors;
    BigIndex j_start = 1;
    while (j_start <= horizon) {
        BigIndex idx = fwd ? BigIndex(s + j_start) : BigIndex(s - j_start);
        // anchor interval containing idx, biased so a run may end exactly on
        // an anchor and restart after it
        auto it = std::lower_bound(
            A.begin(), A.end(), idx,
            [](const AnchorProfile::Anchor& a, const BigIndex& v) {
                return a.index < v;
            });
        BigIndex j_end;
        if (fwd) {
            const BigIndex& stop = it->index;  // next anchor at or above idx
            j_end = stop - s;
        } else {
            // next anchor at or below idx
            const BigIndex& stop = (it != A.end() && it->index == idx)
                                       ? it->index
                                       : (it - 1)->index;
            j_end = s - stop;
        }
        if (j_end > horizon) j_end = horizon;
        st.segments.push_back({j_start, j_end, g(j_start), g(j_end)});
        j_start = j_end + 1;
    }
    return st;
}

}  // namespace

OrbitNormSeries orbit_norm_series(const ShiftOperator& op, const SparseVec& x,
                                  const BigIndex& horizon,
                                  size_t segment_budget) {
    if (horizon < 1) throw DomainError("series horizon must be >= 1");
    OrbitNormSeries ser;
    ser.op_ = op;
    ser.x_ = x;
    ser.horizon_ = horizon;

    bool all_exact = true;
    bool all_die = true;
    BigIndex last_death = 0;

    // collect strands per support entry (sign-split for the direct sum)
    std::vector<std::pair<SparseVec, Strand>> built;  // single-entry vec + strand
    for (const auto& e : x.entries) {
        SparseVec single;
        single.entries.push_back(e);
        std::optional<Strand> st;
        bool dies_backward = false;  // death known even without segments
        switch (op.kind) {
            case ShiftOperator::Kind::UnilateralBackward:
            case ShiftOperator::Kind::UnilateralForward:
                dies_backward =
                    op.kind == ShiftOperator::Kind::UnilateralBackward;
                st = build_unilateral_strand(op, e.index, e.coeff, horizon,
                                             segment_budget);
                break;
            case ShiftOperator::Kind::BilateralForward:
            case ShiftOperator::Kind::BilateralBackward:
                st = build_bilateral_strand(op, e.index, e.coeff, horizon);
                break;
            case ShiftOperator::Kind::DirectSumWithIdentity: {
                if (e.index == 0)
                    throw DomainError("direct-sum coordinates are nonzero indices");
                if (e.index < 0) {
                    Strand ident;  // identity summand: constant contribution
                    ident.segments.push_back(
                        {1, horizon, e.coeff.logmag, e.coeff.logmag});
                    st = std::move(ident);
                } else {
                    dies_backward = op.inner->kind ==
                                    ShiftOperator::Kind::UnilateralBackward;
                    st = build_unilateral_strand(*op.inner, e.index, e.coeff,
                                                 horizon, segment_budget);
                }
                break;
            }
        }
        if (!st) {
            // no exact decomposition for this strand; death is still known
            all_exact = false;
            if (dies_backward) {
                if (e.index > last_death) last_death = e.index;
            } else {
                all_die = false;
            }
            continue;
        }
        if (st->first_zero) {
            if (*st->first_zero > last_death) last_death = *st->first_zero;
        } else {
            all_die = false;
        }
        built.emplace_back(std::move(single), std::move(*st));
    }

    if (!x.entries.empty() && all_die) ser.first_zero_ = last_death;
    if (x.entries.empty()) ser.first_zero_ = 1;

    // exactness: every strand decomposed, and strand contributions combine
    // linearly (p = 1) or there is at most one strand
    size_t total_segments = 0;
    for (auto& [vec, st] : built) total_segments += st.segments.size();
    ser.exact_ = all_exact && built.size() == x.entries.size() &&
                 (op.p == 1.0 || built.size() <= 1) &&
                 total_segments <= segment_budget;

    if (ser.exact_) {
        // verify each segment's affine claim at its endpoints
        for (auto& [vec, st] : built) {
            for (const Segment& seg : st.segments) {
                for (const BigIndex* jp : {&seg.j_start, &seg.j_end}) {
                    double claimed =
                        *jp == seg.j_start ? seg.log_start : seg.log_end;
                    LogReal actual = orbit_norm(op, vec, *jp);
                    double diff = std::fabs(claimed - actual.logmag);
                    double scale = std::max(1.0, std::fabs(actual.logmag));
                    if (actual.is_zero() || diff > 1e-12 * scale)
                        throw Error("orbit series segment failed endpoint audit");
                }
            }
            ser.strands_.push_back(std::move(st));
        }
    }
    return ser;
}

}  // namespace meanly
