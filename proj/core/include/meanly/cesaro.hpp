#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "meanly/bigindex.hpp"
#include "meanly/logreal.hpp"
#include "meanly/shiftops.hpp"
#include "meanly/weights.hpp"

namespace meanly {

enum class CesaroBackend { Loop, Segment, Auto };

inline constexpr int64_t kDefaultLoopBudget = 100'000'000;

// log of sum_{l=0}^{count-1} exp(log_a + l*log_q); the q = 1 branch is
// count * a, and tiny |log_q| routes through expm1 so nothing is lost when
// the per-step ratio is indistinguishable from 1
LogReal geometric_segment_sum(double log_a, double log_q, const BigIndex& count);

// the same sum parameterized by first- and last-term logs (cancellation-safe
// "delta domain" form used by the orbit segment machinery)
LogReal segment_sum_endpoints(double log_first, double log_last,
                              const BigIndex& count);

// Evaluation horizons. Points are strictly increasing.
struct Schedule {
    enum class Kind { GeometricGrid, TbilcamiDips, TbilcamiHills, Explicit };

    Kind kind = Kind::Explicit;
    std::vector<BigIndex> points;

    // n_min, n_min*factor, ... capped by and always including n_max
    static Schedule geometric(const BigIndex& n_min, const BigIndex& n_max,
                              double factor);
    // dip horizons N = k (n_k - m_{-k}) = 2 k n_k
    static Schedule tbilcami_dips(const AnchorProfile& profile,
                                  const std::vector<int>& ks);
    // hill horizons N = m_k
    static Schedule tbilcami_hills(const AnchorProfile& profile,
                                   const std::vector<int>& ks);
    static Schedule explicit_points(std::vector<BigIndex> ns);
};

struct CesaroTrace {
    std::vector<BigIndex> schedule;
    std::vector<LogReal> values;
    std::vector<CesaroBackend> backends;  // Loop or Segment per point
    size_t argmin = 0;
    size_t argmax = 0;
    LogReal min_value;
    LogReal max_value;
};

// sum_{j=K+1}^{N} ||T^j x|| (the split used by Chasles-style identities)
LogReal orbit_partial_sum(const OrbitNormSeries& series, const BigIndex& K,
                          const BigIndex& N,
                          CesaroBackend backend = CesaroBackend::Auto,
                          int64_t loop_budget = kDefaultLoopBudget);

// A_N(x) = (1/N) sum_{j=1}^N ||T^j x||
LogReal cesaro_mean(const OrbitNormSeries& series, const BigIndex& N,
                    CesaroBackend backend = CesaroBackend::Auto,
                    int64_t loop_budget = kDefaultLoopBudget);

CesaroTrace cesaro_trace(const OrbitNormSeries& series, const Schedule& schedule,
                         CesaroBackend backend = CesaroBackend::Auto,
                         int64_t loop_budget = kDefaultLoopBudget);

// Markov bound: card{j <= N : ||T^j x|| >= delta}/N <= min(1, A_N/delta)
double density_bound_from_cesaro(LogReal a_n, double delta);

// A_N(e_0) for the bilateral hill/valley shift at dip (N = 2k n_k) and hill
// (N = m_k) horizons, walking the anchor recurrence with one live exact
// integer instead of materializing a profile. Usable at levels like k = 10^4
// where m_k has ~2.4e5 digits and a stored profile would not fit in memory.
struct TbilcamiMeanPoint {
    BigIndex N;
    double log_mean;  // log A_N(e_0)
};
TbilcamiMeanPoint tbilcami_dip_mean(int k, ProfileVariant variant);
TbilcamiMeanPoint tbilcami_hill_mean(int k, ProfileVariant variant);

}  // namespace meanly
