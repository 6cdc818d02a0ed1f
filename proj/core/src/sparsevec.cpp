#include "meanly/sparsevec.hpp"

#include <algorithm>

#include "meanly/errors.hpp"

namespace meanly {

SparseVec SparseVec::from_entries(std::vector<Entry> raw) {
    std::sort(raw.begin(), raw.end(),
              [](const Entry& a, const Entry& b) { return a.index < b.index; });
    SparseVec v;
    v.entries.reserve(raw.size());
    for (Entry& e : raw) {
        if (!v.entries.empty() && v.entries.back().index == e.index) {
            v.entries.back().coeff = log_add(v.entries.back().coeff, e.coeff);
            if (v.entries.back().coeff.is_zero()) v.entries.pop_back();
        } else if (!e.coeff.is_zero()) {
            v.entries.push_back(std::move(e));
        }
    }
    return v;
}

SparseVec SparseVec::from_reals(
    const std::vector<std::pair<BigIndex, double>>& raw) {
    std::vector<Entry> es;
    es.reserve(raw.size());
    for (const auto& [idx, val] : raw) es.push_back({idx, LogReal::from_real(val)});
    return from_entries(std::move(es));
}

LogReal SparseVec::coeff_at(const BigIndex& j) const {
    auto it = std::lower_bound(
        entries.begin(), entries.end(), j,
        [](const Entry& e, const BigIndex& v) { return e.index < v; });
    if (it != entries.end() && it->index == j) return it->coeff;
    return LogReal::zero();
}

const BigIndex& SparseVec::min_support() const {
    if (entries.empty()) throw DomainError("zero vector has no support");
    return entries.front().index;
}

const BigIndex& SparseVec::max_support() const {
    if (entries.empty()) throw DomainError("zero vector has no support");
    return entries.back().index;
}

SparseVec SparseVec::scaled(LogReal s) const {
    if (s.is_zero()) return zero();
    SparseVec v;
    v.entries.reserve(entries.size());
    for (const Entry& e : entries) v.entries.push_back({e.index, log_mul(e.coeff, s)});
    return v;
}

std::string SparseVec::describe() const {
    if (entries.empty()) return "0";
    if (entries.size() == 1 && entries.front().coeff == LogReal::one())
        return "e_" + big_to_string(entries.front().index);
    std::string s = "sum(";
    bool first = true;
    for (const Entry& e : entries) {
        if (!first) s += ", ";
        first = false;
        s += big_to_string(e.index) + ":" + to_string(e.coeff);
    }
    return s + ")";
}

SparseVec add(const SparseVec& a, const SparseVec& b) {
    SparseVec out;
    out.entries.reserve(a.entries.size() + b.entries.size());
    size_t i = 0, j = 0;
    while (i < a.entries.size() || j < b.entries.size()) {
        bool take_a = j >= b.entries.size() ||
                      (i < a.entries.size() &&
                       a.entries[i].index < b.entries[j].index);
        bool take_b = i >= a.entries.size() ||
                      (j < b.entries.size() &&
                       b.entries[j].index < a.entries[i].index);
        if (take_a) {
            out.entries.push_back(a.entries[i++]);
        } else if (take_b) {
            out.entries.push_back(b.entries[j++]);
        } else {
            LogReal c = log_add(a.entries[i].coeff, b.entries[j].coeff);
            if (!c.is_zero()) out.entries.push_back({a.entries[i].index, c});
            ++i;
            ++j;
        }
    }
    return out;
}

SparseVec sub(const SparseVec& a, const SparseVec& b) {
    return add(a, b.scaled(LogReal::from_real(-1.0)));
}

SparseVec special_block_vector(int n_max) {
    if (n_max < 1) throw DomainError("special_block_vector: n_max must be >= 1");
    SparseVec v;
    v.entries.reserve(static_cast<size_t>(n_max));
    constexpr double kLn2 = 0.6931471805599453;
    for (int n = 1; n <= n_max; ++n) {
        v.entries.push_back(
            {BigIndex(n) * (n + 1), LogReal::from_log(-n * kLn2)});
    }
    return v;
}

}  // namespace meanly
