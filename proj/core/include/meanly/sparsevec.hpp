#pragma once

#include <string>
#include <utility>
#include <vector>

#include "meanly/bigindex.hpp"
#include "meanly/logreal.hpp"

namespace meanly {

// Finitely supported vector over N- or Z-indexed sequence space, coefficients
// kept in the log domain (certificate vectors carry factors like (2C)^{-r}
// that underflow native doubles long before the constructions get interesting).
struct SparseVec {
    struct Entry {
        BigIndex index;
        LogReal coeff;
    };

    std::vector<Entry> entries;  // strictly increasing index, no zero coeffs

    static SparseVec zero() { return {}; }
    static SparseVec basis(const BigIndex& k) {
        SparseVec v;
        v.entries.push_back({k, LogReal::one()});
        return v;
    }
    // sorts, merges duplicate indices, drops zeros
    static SparseVec from_entries(std::vector<Entry> raw);
    static SparseVec from_reals(
        const std::vector<std::pair<BigIndex, double>>& raw);

    bool is_zero() const { return entries.empty(); }
    size_t support_size() const { return entries.size(); }
    // zero when the index is not in the support
    LogReal coeff_at(const BigIndex& j) const;
    const BigIndex& min_support() const;
    const BigIndex& max_support() const;

    SparseVec scaled(LogReal s) const;
    std::string describe() const;
};

SparseVec add(const SparseVec& a, const SparseVec& b);
SparseVec sub(const SparseVec& a, const SparseVec& b);

// x with x_{n(n+1)} = 2^{-n} for n = 1..n_max: one coefficient at the last
// position of each pair-block's run of 2s
SparseVec special_block_vector(int n_max);

}  // namespace meanly
