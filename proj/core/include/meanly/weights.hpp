#pragma once

#include <string>
#include <vector>

#include "meanly/bigindex.hpp"
#include "meanly/logreal.hpp"
#include "meanly/report.hpp"

namespace meanly {

enum class AnchorRole { Valley, Hill };
enum class ProfileVariant { Original, Flattened };

// A bilateral weight sequence v described by its hill/valley anchors, with
// piecewise log-linear interpolation between consecutive anchors (constant
// per-step ratio v_j / v_{j-1} on each block).
struct AnchorProfile {
    struct Anchor {
        BigIndex index;
        double logv;
        AnchorRole role;
        int level;  // signed k; valleys are n_k, hills are m_k
    };

    std::vector<Anchor> anchors;  // strictly increasing index
    ProfileVariant variant = ProfileVariant::Original;
    int k_max = 0;

    // log v_j by interpolation; throws DomainError outside [min_index, max_index]
    double log_value(const BigIndex& j) const;

    // anchor lookup by role/level; throws DomainError when absent
    const Anchor& anchor(AnchorRole role, int level) const;

    const BigIndex& min_index() const;
    const BigIndex& max_index() const;

    // JSON array of {"index": decimal string, "logv": float}; indices exceed
    // 64-bit range so they serialize as strings
    std::string to_json(int indent = 2) const;
};

// Anchor system of the bilateral hill/valley construction:
//   n_1 = 4, m_k = (16k^3+1) n_k, n_{k+1} = (16k^3+1) m_k,
//   n_{-k} = -m_k, m_{-k} = -n_k, n_0 = -1, m_0 = 1,
//   v_{n_k} = (2k)^{-1/3}, v_{n_{-k}} = (2k+1)^{-1/3}, v_{n_0} = 1,
//   v_{m_k} = (k+2)^{1/4}, v_{m_{-k}} = (k+1)^{1/4}, v_{m_0} = 2^{1/4}
// The flattened variant keeps all indices and valley values and sets every
// hill value to 1.
AnchorProfile build_tbilcami(ProfileVariant variant, int k_max);

// v at the segment midpoints j_k = (m_k + n_k)/2 = (8k^3+1) n_k and -j_k:
//   log v_{j_k}  = -(1/6) ln(2k) + (1/8) ln(k+2)
//   log v_{-j_k} = -(1/6) ln(2k+1) + (1/8) ln(k+1)
// Both tend to -inf like -(1/24) ln k, which is the hypercyclicity input.
double tbilcami_midpoint_logv_forward(int k);
double tbilcami_midpoint_logv_backward(int k);

// Level-k admissibility checks for the profile (forward/backward slope bounds
// and the two M-envelope conditions), each entry carrying lhs/rhs/margin in
// the log domain. Requires anchors through level k+1.
CheckReport verify_tbilcami(const AnchorProfile& profile, int k, double M = 2.0);

// Unilateral (or explicitly-listed) weight sequences for the shift operators.
struct WeightModel {
    enum class Kind { ExplicitList, BlockHalvesTwos, Harmonic, Constant };

    Kind kind = Kind::Constant;
    std::vector<double> values;  // ExplicitList, 1-based: values[j-1] = w_j
    double c = 1.0;              // Constant

    static WeightModel explicit_list(std::vector<double> w);
    static WeightModel block_halves_twos() { return {Kind::BlockHalvesTwos, {}, 0.0}; }
    static WeightModel harmonic() { return {Kind::Harmonic, {}, 0.0}; }
    static WeightModel constant(double c);

    std::string describe() const;
};

// log w_j; throws DomainError outside the model's index domain (Harmonic
// starts at j = 2: the backward shift annihilates e_1 without reading w_1)
LogReal log_weight(const WeightModel& model, const BigIndex& j);

// L(j) = sum_{i<=j} log w_i with the convention w_1 = 1 for Harmonic, so that
// window products are exp(L(k+n) - L(k)). Closed form (no loop) for
// BlockHalvesTwos (block geometry) and Harmonic (L(j) = ln j); L(0) = 0.
double cum_log(const WeightModel& model, const BigIndex& j);

// pair-block containing index j >= 1: block n spans (n-1)n+1 .. n(n+1)
BigIndex block_of(const BigIndex& j);

}  // namespace meanly
