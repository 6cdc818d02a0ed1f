#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "meanly/bigindex.hpp"
#include "meanly/logreal.hpp"
#include "meanly/sparsevec.hpp"
#include "meanly/weights.hpp"

namespace meanly {

// Weighted shift operators with closed-form orbit norms. Unilateral spaces
// are 1-based unweighted l^p; bilateral spaces are Z-indexed l^p(v) with the
// weight profile in the norm, ||x|| = (sum_j |x_j|^p v_j)^{1/p}.
struct ShiftOperator {
    enum class Kind {
        UnilateralBackward,    // B_w(x_1,x_2,...) = (w_2 x_2, w_3 x_3, ...)
        UnilateralForward,     // F_w e_j = w_j e_{j+1}
        BilateralForward,      // T e_j = e_{j+1} on l^p(v, Z)
        BilateralBackward,     // T^{-1} e_j = e_{j-1}
        DirectSumWithIdentity  // inner (+) I; positive indices live in the
                               // inner summand, negative in the identity one
    };

    Kind kind = Kind::UnilateralForward;
    WeightModel weights;    // unilateral kinds
    AnchorProfile profile;  // bilateral kinds
    double p = 1.0;
    std::shared_ptr<const ShiftOperator> inner;  // DirectSumWithIdentity

    static ShiftOperator unilateral_backward(WeightModel w, double p = 1.0);
    static ShiftOperator unilateral_forward(WeightModel w, double p = 1.0);
    static ShiftOperator bilateral_forward(AnchorProfile v, double p = 1.0);
    static ShiftOperator bilateral_backward(AnchorProfile v, double p = 1.0);
    static ShiftOperator direct_sum_with_identity(ShiftOperator inner_op);
    // isometric identity stand-in: forward shift with unit weights (every
    // check that consumes it depends only on norms)
    static ShiftOperator identity();

    bool bilateral() const {
        return kind == Kind::BilateralForward || kind == Kind::BilateralBackward;
    }
    std::string describe() const;
};

// one application; exact index shifts, coefficients picking up weights
SparseVec apply(const ShiftOperator& op, const SparseVec& x);

// ||x|| in the operator's norm
LogReal vector_norm(const ShiftOperator& op, const SparseVec& x);

// ||T^j x|| without iterating applications: cumulative-log windows for
// unilateral weights, profile queries for bilateral ones; j = 0 gives ||x||
LogReal orbit_norm(const ShiftOperator& op, const SparseVec& x,
                   const BigIndex& j);

// ||T^n|| = sup over admissible windows of the weight product; closed form
// for Harmonic (n+1), BlockHalvesTwos (2^n) and Constant(c) (c^n); explicit
// lists are scanned; other kinds raise a capability error
LogReal operator_norm(const ShiftOperator& op, const BigIndex& n);

// j -> ||T^j x|| on [1, horizon], decomposed per support entry ("strand")
// into maximal runs where the log-norm contribution is affine in j. Exact
// mode requires piecewise log-linear weights and either a single strand or
// p = 1 (where strand contributions add); otherwise the series falls back to
// loop evaluation and carries no segments.
class OrbitNormSeries {
  public:
    struct Segment {
        BigIndex j_start;  // inclusive
        BigIndex j_end;    // inclusive
        double log_start;  // log of the strand contribution at j_start
        double log_end;    // ... at j_end

        double log_at(const BigIndex& j) const;  // affine interpolation
    };
    struct Strand {
        std::vector<Segment> segments;      // contiguous, starting at j = 1
        std::optional<BigIndex> first_zero; // contribution vanishes from here on
    };

    // ||T^j x||, any backend (delegates to orbit_norm; O(support) per query)
    LogReal point(const BigIndex& j) const;

    bool exact() const { return exact_; }
    const std::vector<Strand>& strands() const;
    const BigIndex& horizon() const { return horizon_; }
    double p() const { return op_.p; }
    const ShiftOperator& op() const { return op_; }
    const SparseVec& vec() const { return x_; }

    // first j with T^j x = 0, when the whole orbit eventually dies
    std::optional<BigIndex> first_zero() const { return first_zero_; }

  private:
    friend OrbitNormSeries orbit_norm_series(const ShiftOperator&,
                                             const SparseVec&, const BigIndex&,
                                             size_t);
    ShiftOperator op_;
    SparseVec x_;
    std::vector<Strand> strands_;
    BigIndex horizon_;
    bool exact_ = false;
    std::optional<BigIndex> first_zero_;
};

// Build the series; every segment's affine claim is verified at both
// endpoints against orbit_norm (relative 1e-12) before it is returned.
// Exceeding segment_budget degrades to the loop-mode series.
OrbitNormSeries orbit_norm_series(const ShiftOperator& op, const SparseVec& x,
                                  const BigIndex& horizon,
                                  size_t segment_budget = 65536);

}  // namespace meanly
