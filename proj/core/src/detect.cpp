#include "meanly/detect.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "meanly/errors.hpp"

namespace meanly {

namespace {

// Lazy orbit prefix sums in the log domain: prefix[j] = sum_{i<=j} ||T^i x||.
// Once a zero norm shows up the orbit is dead for good (||T^j x|| = 0 forces
// T^j x = 0), so the prefix stops growing and means past that point decay
// like total/n.
struct OrbitCache {
    const ShiftOperator* op = nullptr;
    SparseVec x;
    std::vector<LogReal> prefix{LogReal::zero()};
    std::optional<int64_t> death;  // first j with T^j x = 0

    LogReal numerator(int64_t n) {
        while (!death && static_cast<int64_t>(prefix.size()) - 1 < n) {
            int64_t j = static_cast<int64_t>(prefix.size());
            LogReal v = orbit_norm(*op, x, BigIndex(j));
            if (v.is_zero()) {
                death = j;
                break;
            }
            prefix.push_back(log_add(prefix.back(), v));
        }
        size_t top = prefix.size() - 1;
        size_t idx = n < static_cast<int64_t>(top) ? static_cast<size_t>(n) : top;
        return prefix[idx];
    }

    LogReal mean(int64_t n) {
        return log_div(numerator(n),
                       LogReal::from_log(std::log(static_cast<double>(n))));
    }

    bool past_death(int64_t n) const { return death && n > *death; }
};

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

nlohmann::ordered_json vec_json(const SparseVec& v) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const SparseVec::Entry& e : v.entries) {
        nlohmann::ordered_json row;
        row["index"] = big_to_string(e.index);
        row["sign"] = static_cast<int>(e.coeff.sign);
        row["log_coeff"] = e.coeff.logmag;
        arr.push_back(row);
    }
    return arr;
}

}  // namespace

CandidateGen basis_candidates(const BigIndex& first) {
    return [first](size_t i) -> std::optional<SparseVec> {
        return SparseVec::basis(first + BigIndex(static_cast<int64_t>(i)));
    };
}

CandidateGen pair_block_candidates() {
    return [](size_t i) -> std::optional<SparseVec> {
        BigIndex n = BigIndex(static_cast<int64_t>(i)) + 1;
        return SparseVec::basis(n * (n + 1));
    };
}

bool strictly_below(LogReal a, LogReal b, double rel) {
    if (b.sign <= 0) return cmp(a, b) < 0;
    if (a.sign <= 0) return true;
    return a.logmag < b.logmag + std::log1p(-rel);
}

bool strictly_above(LogReal a, LogReal b, double rel) {
    if (b.sign <= 0) return cmp(a, b) > 0;
    if (a.sign <= 0) return false;
    return a.logmag > b.logmag + std::log1p(rel);
}

double default_growth_bound(const ShiftOperator& op) {
    return operator_norm(op, BigIndex(1)).to_real();
}

AcbReport acb_probe(const ShiftOperator& op, const std::vector<SparseVec>& samples,
                    const Schedule& schedule, double c0, int64_t loop_budget) {
    if (samples.empty()) throw DomainError("acb probe needs at least one sample");
    if (schedule.points.empty()) throw DomainError("schedule must be nonempty");
    AcbReport rep;
    rep.c0 = c0;
    const BigIndex& horizon = schedule.points.back();
    for (const SparseVec& x : samples) {
        if (x.is_zero()) throw DomainError("acb samples must be nonzero");
        AcbSample s;
        s.vector = x.describe();
        s.norm = vector_norm(op, x);
        // normalize before any orbit work so the reported ratio cannot
        // depend on the sample's scale
        SparseVec unit = x.scaled(log_div(LogReal::one(), s.norm));
        LogReal unit_norm = vector_norm(op, unit);
        OrbitNormSeries series = orbit_norm_series(op, unit, horizon);
        CesaroTrace tr = cesaro_trace(series, schedule, CesaroBackend::Auto,
                                      loop_budget);
        s.sup_ratio = log_div(tr.max_value, unit_norm);
        s.arg_n = tr.schedule[tr.argmax];
        rep.samples.push_back(std::move(s));
    }
    rep.arg_sample = 0;
    rep.max_ratio = rep.samples.front().sup_ratio;
    for (size_t i = 1; i < rep.samples.size(); ++i) {
        if (cmp(rep.samples[i].sup_ratio, rep.max_ratio) > 0) {
            rep.max_ratio = rep.samples[i].sup_ratio;
            rep.arg_sample = i;
        }
    }
    rep.violated = cmp(rep.max_ratio, LogReal::from_real(c0)) > 0;
    rep.verdict = rep.violated ? "ACB violated beyond C0"
                               : "no ACB violation found at this horizon";
    return rep;
}

AmiReport ami_probe(const ShiftOperator& op, const SparseVec& x,
                    const Schedule& dips, const Schedule& peaks,
                    const AmiParams& params) {
    if (x.is_zero()) throw DomainError("probe vector must be nonzero");
    if (dips.points.empty() && params.extra_dips.empty())
        throw DomainError("no dip evidence requested");
    if (peaks.points.empty() && params.extra_peaks.empty())
        throw DomainError("no peak evidence requested");

    AmiReport rep;
    rep.eta = params.eta;
    rep.lambda = params.lambda;
    rep.lambda0 = params.lambda0 > 0.0 ? params.lambda0 : 10.0 * params.eta;
    rep.norm = vector_norm(op, x);

    if (!dips.points.empty() || !peaks.points.empty()) {
        BigIndex horizon = 0;
        if (!dips.points.empty()) horizon = dips.points.back();
        if (!peaks.points.empty() && peaks.points.back() > horizon)
            horizon = peaks.points.back();
        OrbitNormSeries series = orbit_norm_series(op, x, horizon);
        if (!dips.points.empty())
            rep.dip_trace = cesaro_trace(series, dips, CesaroBackend::Auto,
                                         params.loop_budget);
        if (!peaks.points.empty())
            rep.peak_trace = cesaro_trace(series, peaks, CesaroBackend::Auto,
                                          params.loop_budget);
    }

    bool have_dip = !rep.dip_trace.schedule.empty();
    if (have_dip) {
        rep.dip_min = rep.dip_trace.min_value;
        rep.dip_arg = rep.dip_trace.schedule[rep.dip_trace.argmin];
    }
    for (const TbilcamiMeanPoint& p : params.extra_dips) {
        LogReal v = LogReal::from_log(p.log_mean);
        if (!have_dip || cmp(v, rep.dip_min) < 0) {
            rep.dip_min = v;
            rep.dip_arg = p.N;
            have_dip = true;
        }
    }
    bool have_peak = !rep.peak_trace.schedule.empty();
    if (have_peak) {
        rep.peak_max = rep.peak_trace.max_value;
        rep.peak_arg = rep.peak_trace.schedule[rep.peak_trace.argmax];
    }
    for (const TbilcamiMeanPoint& p : params.extra_peaks) {
        LogReal v = LogReal::from_log(p.log_mean);
        if (!have_peak || cmp(v, rep.peak_max) > 0) {
            rep.peak_max = v;
            rep.peak_arg = p.N;
            have_peak = true;
        }
    }

    bool dips_low = cmp(rep.dip_min, LogReal::from_real(rep.eta)) < 0;
    rep.irregular_candidate =
        dips_low && cmp(rep.peak_max, LogReal::from_real(rep.lambda)) > 0;
    rep.semi_irregular_candidate =
        dips_low && cmp(rep.peak_max, LogReal::from_real(rep.lambda0)) > 0;
    return rep;
}

MlyccReport mlycc_witness_search(const ShiftOperator& op, const CandidateGen& x0,
                                 int k_max, int64_t budget) {
    if (k_max < 0) throw DomainError("k_max must be nonnegative");
    if (budget < 1) throw DomainError("budget must be positive");
    MlyccReport rep;
    int64_t evals = 0;
    for (int k = 1; k <= k_max; ++k) {
        MlyccWitness w;
        w.k = k;
        size_t idx = 0;
        while (!w.found && evals < budget) {
            std::optional<SparseVec> cand = x0(idx++);
            if (!cand) {
                w.note = "candidates exhausted";
                break;
            }
            if (cand->is_zero())
                throw DomainError("witness candidates must be nonzero");
            LogReal target = log_mul(LogReal::from_real(static_cast<double>(k)),
                                     vector_norm(op, *cand));
            OrbitCache cache{&op, *cand};
            int64_t n = 0;
            while (true) {
                ++n;
                ++evals;
                if (evals > budget) break;
                LogReal a = cache.mean(n);
                if (strictly_above(a, target)) {
                    w.found = true;
                    w.y = *cand;
                    w.n = BigIndex(n);
                    w.mean = a;
                    break;
                }
                if (cache.past_death(n)) break;
            }
        }
        if (!w.found && w.note.empty()) {
            w.note = "budget exhausted";
            rep.budget_exhausted = true;
        }
        rep.witnesses.push_back(std::move(w));
    }
    rep.evals = evals;
    return rep;
}

Certificate construct_irregular_vector(const ShiftOperator& op, int stages,
                                       const CandidateGen& x0, int64_t budget,
                                       std::optional<double> growth_c) {
    if (stages < 0) throw DomainError("stage count must be nonnegative");
    if (budget < 1) throw DomainError("budget must be positive");
    Certificate cert;
    cert.c = growth_c ? *growth_c : default_growth_bound(op);
    if (!(cert.c > 0.0)) throw DomainError("growth constant must be positive");
    cert.complete = true;
    double ln2c = std::log(2.0 * cert.c);

    std::vector<OrbitCache> chosen;
    int64_t evals = 0;
    int64_t last_n = 0;
    for (int m = 1; m <= stages; ++m) {
        LogReal bound =
            LogReal::from_log(std::log(static_cast<double>(m)) + m * ln2c);
        LogReal inv_m = LogReal::from_log(-std::log(static_cast<double>(m)));
        Certificate::Stage st;
        st.m = m;
        st.bound = bound;
        bool found = false;
        size_t idx = 0;
        while (!found && evals < budget) {
            std::optional<SparseVec> cand = x0(idx++);
            if (!cand) {
                cert.failure_note = "candidates exhausted";
                break;
            }
            LogReal norm = vector_norm(op, *cand);
            if (norm.sign != 1 || std::abs(norm.logmag) > 1e-9)
                throw DomainError("construction candidates must be normalized");
            OrbitCache cache{&op, *cand};
            int64_t n = last_n;
            while (true) {
                ++n;
                ++evals;
                if (evals > budget) {
                    cert.failure_note = "budget exhausted";
                    break;
                }
                LogReal a = cache.mean(n);
                bool peak = strictly_above(a, bound);
                if (peak) {
                    bool cross = true;
                    for (OrbitCache& ch : chosen) {
                        if (!strictly_below(ch.mean(n), inv_m)) {
                            cross = false;
                            break;
                        }
                    }
                    if (cross) {
                        found = true;
                        st.x = *cand;
                        st.n = BigIndex(n);
                        st.lower = a;
                        st.peak_ok = true;
                        st.cross_ok = true;
                        chosen.push_back(std::move(cache));
                        last_n = n;
                        break;
                    }
                }
                if (cache.past_death(n) && !peak) break;
            }
        }
        if (!found) {
            cert.complete = false;
            cert.failed_stage = m;
            if (cert.failure_note.empty()) cert.failure_note = "budget exhausted";
            break;
        }
        cert.stages.push_back(std::move(st));
    }
    cert.evals = evals;

    if (!cert.stages.empty()) {
        cert.r.push_back(1);
        while (true) {
            int src = cert.r.back() + 1;  // stage whose horizon sets the spacing
            if (src > static_cast<int>(cert.stages.size())) break;
            BigIndex min_next =
                BigIndex(1) + cert.r.back() + cert.stages[src - 1].n;
            if (min_next > BigIndex(static_cast<int64_t>(cert.stages.size())))
                break;
            cert.r.push_back(static_cast<int>(min_next.convert_to<int64_t>()));
        }
        SparseVec acc = SparseVec::zero();
        for (int rj : cert.r) {
            LogReal coeff = LogReal::from_log(-static_cast<double>(rj) * ln2c);
            acc = add(acc, cert.stages[rj - 1].x.scaled(coeff));
        }
        cert.x_beta = acc;
    }
    return cert;
}

CheckReport verify_certificate(const ShiftOperator& op, const Certificate& cert,
                               int64_t loop_budget) {
    constexpr double tol = 1e-6;
    CheckReport rep;
    rep.title = "irregular vector certificate checks";
    rep.set_config("C", format_double(cert.c));
    rep.set_config("stages", std::to_string(cert.stages.size()));
    rep.set_config("tol", format_double(tol));
    {
        std::string rs;
        for (int rj : cert.r) {
            if (!rs.empty()) rs += ",";
            rs += std::to_string(rj);
        }
        rep.set_config("r", rs);
    }
    if (cert.r.empty() || cert.x_beta.is_zero()) {
        rep.notice("empty certificate: vacuous pass");
        return rep;
    }

    BigIndex horizon = cert.stages.front().n;
    for (const Certificate::Stage& st : cert.stages)
        if (st.n > horizon) horizon = st.n;
    OrbitNormSeries series = orbit_norm_series(op, cert.x_beta, horizon);

    for (int rj : cert.r) {
        const Certificate::Stage& peak_stage = cert.stages.at(rj - 1);
        double peak_lhs = (static_cast<double>(rj) - 1.0) * (1.0 - tol);
        LogReal peak_value =
            cesaro_mean(series, peak_stage.n, CesaroBackend::Auto, loop_budget);
        bool peak_ok = cmp(peak_value, LogReal::from_real(peak_lhs)) >= 0;
        double pv = peak_value.to_real();
        rep.add("stage_" + std::to_string(rj) + "_peak", peak_ok, peak_lhs, pv,
                pv - peak_lhs,
                "A_N(x_beta) >= r - 1 at N = " + big_to_string(peak_stage.n));
        if (rj < static_cast<int>(cert.stages.size())) {
            const Certificate::Stage& dip_stage = cert.stages.at(rj);
            double dip_rhs = (1.0 / (static_cast<double>(rj) + 1.0)) * (1.0 + tol);
            LogReal dip_value =
                cesaro_mean(series, dip_stage.n, CesaroBackend::Auto, loop_budget);
            bool dip_ok = cmp(dip_value, LogReal::from_real(dip_rhs)) <= 0;
            double dv = dip_value.to_real();
            rep.add("stage_" + std::to_string(rj) + "_dip", dip_ok, dv, dip_rhs,
                    dip_rhs - dv,
                    "A_N(x_beta) <= 1/(r + 1) at N = " +
                        big_to_string(dip_stage.n));
        }
    }

    // coefficient the next selection would have carried, had enough stages
    // been on record to admit one
    if (cert.r.back() < static_cast<int>(cert.stages.size())) {
        BigIndex r_next =
            BigIndex(1) + cert.r.back() + cert.stages[cert.r.back()].n;
        double log_coeff = -r_next.convert_to<double>() * std::log(2.0 * cert.c);
        rep.notice("truncated selection: next admissible r = " +
                   big_to_string(r_next) + " would carry log coefficient " +
                   format_double(log_coeff));
    }
    return rep;
}

std::string certificate_to_json(const Certificate& cert, int indent) {
    nlohmann::ordered_json j;
    j["growth_constant"] = cert.c;
    j["complete"] = cert.complete;
    if (cert.failed_stage)
        j["failed_stage"] = *cert.failed_stage;
    else
        j["failed_stage"] = nullptr;
    j["failure_note"] = cert.failure_note;
    j["evals"] = cert.evals;
    nlohmann::ordered_json stages = nlohmann::ordered_json::array();
    for (const Certificate::Stage& st : cert.stages) {
        nlohmann::ordered_json s;
        s["m"] = st.m;
        s["x"] = vec_json(st.x);
        s["N"] = big_to_string(st.n);
        s["log_lower"] = st.lower.logmag;
        s["log_bound"] = st.bound.logmag;
        s["log_margin"] = st.lower.logmag - st.bound.logmag;
        s["peak_ok"] = st.peak_ok;
        s["cross_ok"] = st.cross_ok;
        stages.push_back(s);
    }
    j["stages"] = stages;
    j["r"] = cert.r;
    j["x_beta"] = vec_json(cert.x_beta);
    return j.dump(indent);
}


NormGrowthReport norm_growth_probe(const ShiftOperator& op,
                                   const BigIndex& horizon, int64_t loop_budget) {
    if (horizon < 1) throw DomainError("horizon must be >= 1");
    if (!fits_i64(horizon) || horizon.convert_to<int64_t>() > loop_budget)
        throw BudgetError("norm-growth horizon exceeds the loop budget");
    int64_t h = horizon.convert_to<int64_t>();
    NormGrowthReport rep;
    rep.horizon = horizon;
    for (int64_t n = 1; n <= h; ++n) {
        LogReal ratio =
            log_div(operator_norm(op, BigIndex(n)),
                    LogReal::from_log(std::log(static_cast<double>(n))));
        if (n == 1 || cmp(ratio, rep.max_ratio) > 0) {
            rep.max_ratio = ratio;
            rep.arg_n = BigIndex(n);
        }
        if (n == h) rep.last_ratio = ratio;
    }
    return rep;
}

}  // namespace meanly
