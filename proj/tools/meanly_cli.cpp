// meanly: command-line front end for the shift/semigroup laboratory.
//
// Exit codes: 0 all checks passed (or pure data emission), 1 a check failed,
// 2 usage error (bad literal, bad flag, unknown gallery entry), 3 capability
// or budget error (the request is well-formed but this build cannot honor it).

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "meanly/bigindex.hpp"
#include "meanly/cesaro.hpp"
#include "meanly/chaostats.hpp"
#include "meanly/detect.hpp"
#include "meanly/errors.hpp"
#include "meanly/gallery.hpp"
#include "meanly/literals.hpp"
#include "meanly/logreal.hpp"
#include "meanly/report.hpp"
#include "meanly/semigroup.hpp"
#include "meanly/shiftops.hpp"
#include "meanly/sparsevec.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace meanly;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCapability = 3;

std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

// JSON has no inf/nan; dead-orbit log values surface as null
json jnum(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

double log10_of(LogReal v) {
    if (v.is_zero()) return -std::numeric_limits<double>::infinity();
    return v.logmag / std::log(10.0);
}

// Config files are JSON: {"<subcommand>": {"<flag>": value, ...}}, flag names
// without dashes, arrays for repeatable flags. Command-line values win.
class JsonConfig : public CLI::Config {
  public:
    std::string to_config(const CLI::App* app, bool, bool, std::string) const override {
        return dump_app(app).dump(2) + "\n";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        json doc;
        try {
            doc = json::parse(input);
        } catch (const json::parse_error& e) {
            throw CLI::FileError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!doc.is_object()) throw CLI::FileError("config root must be an object");
        std::vector<CLI::ConfigItem> out;
        walk(doc, {}, out);
        return out;
    }

  private:
    static json dump_app(const CLI::App* app) {
        json obj = json::object();
        for (const CLI::Option* opt : app->get_options()) {
            if (!opt->get_configurable() || opt->count() == 0) continue;
            const std::vector<std::string>& res = opt->results();
            std::string key = opt->get_single_name();
            if (res.size() == 1)
                obj[key] = res.front();
            else
                obj[key] = res;
        }
        for (const CLI::App* sub : app->get_subcommands({}))
            if (sub->parsed()) obj[sub->get_name()] = dump_app(sub);
        return obj;
    }

    static std::string scalar(const json& v) {
        return v.is_string() ? v.get<std::string>() : v.dump();
    }

    static void walk(const json& node, std::vector<std::string> parents,
                     std::vector<CLI::ConfigItem>& out) {
        for (auto it = node.begin(); it != node.end(); ++it) {
            if (it.value().is_object()) {
                std::vector<std::string> deeper = parents;
                deeper.push_back(it.key());
                walk(it.value(), std::move(deeper), out);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = it.key();
            if (it.value().is_array())
                for (const json& v : it.value()) item.inputs.push_back(scalar(v));
            else
                item.inputs.push_back(scalar(it.value()));
            out.push_back(std::move(item));
        }
    }
};

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    size_t start = 0;
    while (start <= s.size()) {
        size_t pos = s.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

double parse_double_arg(const std::string& flag, const std::string& s) {
    try {
        size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DomainError(flag + ": not a number: \"" + s + "\"");
    }
}

std::vector<double> parse_double_list(const std::string& flag,
                                      const std::string& s) {
    std::vector<double> out;
    for (const std::string& piece : split_list(s))
        out.push_back(parse_double_arg(flag, piece));
    return out;
}

BigIndex parse_big_arg(const std::string& flag, const std::string& s) {
    if (s.empty()) throw DomainError(flag + ": empty integer");
    try {
        return big_from_string(s);
    } catch (const DomainError&) {
        throw DomainError(flag + ": not an integer: \"" + s + "\"");
    }
}

const AnchorProfile* profile_of(const ShiftOperator& op) {
    return op.bilateral() ? &op.profile : nullptr;
}

void emit_report(const CheckReport& rep, const std::string& out) {
    if (out == "json") {
        std::cout << report_to_json(rep) << "\n";
        return;
    }
    std::cout << "name,passed,lhs,rhs,margin,note\n";
    for (const CheckEntry& e : rep.entries)
        std::cout << csv_quote(e.name) << "," << (e.passed ? "true" : "false")
                  << "," << num(e.lhs) << "," << num(e.rhs) << ","
                  << num(e.margin) << "," << csv_quote(e.note) << "\n";
}

// ---- orbit ----

struct OrbitArgs {
    std::string op, vec, horizon = "1000", schedule, out = "csv";
};

int run_orbit(const OrbitArgs& a) {
    ShiftOperator op = parse_operator_literal(a.op);
    SparseVec x = parse_vector_literal(a.vec);
    BigIndex horizon = parse_big_arg("--horizon", a.horizon);
    if (horizon < 1) throw DomainError("--horizon: must be >= 1");

    Schedule sched;
    if (!a.schedule.empty()) {
        sched = parse_schedule_literal(a.schedule, profile_of(op));
    } else if (horizon <= 10000) {
        std::vector<BigIndex> all;
        for (BigIndex j = 1; j <= horizon; ++j) all.push_back(j);
        sched = Schedule::explicit_points(std::move(all));
    } else {
        sched = Schedule::geometric(1, horizon, 2.0);
    }

    if (a.out == "csv") {
        std::cout << "j,norm,log10_norm\n";
        for (const BigIndex& j : sched.points) {
            LogReal v = orbit_norm(op, x, j);
            std::cout << big_to_string(j) << "," << num(v.to_real()) << ","
                      << num(log10_of(v)) << "\n";
        }
        return kExitOk;
    }
    json doc;
    doc["operator"] = op.describe();
    doc["vector"] = x.describe();
    json rows = json::array();
    for (const BigIndex& j : sched.points) {
        LogReal v = orbit_norm(op, x, j);
        rows.push_back({{"j", big_to_string(j)},
                        {"norm", jnum(v.to_real())},
                        {"log10_norm", jnum(log10_of(v))}});
    }
    doc["rows"] = std::move(rows);
    std::cout << doc.dump(2) << "\n";
    return kExitOk;
}

// ---- cesaro ----

struct CesaroArgs {
    std::string op, vec, horizon = "1000000", schedule, backend = "auto",
                out = "csv";
    int64_t budget = kDefaultLoopBudget;
};

CesaroBackend backend_from(const std::string& s) {
    if (s == "loop") return CesaroBackend::Loop;
    if (s == "segment") return CesaroBackend::Segment;
    return CesaroBackend::Auto;
}

int run_cesaro(const CesaroArgs& a) {
    ShiftOperator op = parse_operator_literal(a.op);
    SparseVec x = parse_vector_literal(a.vec);

    Schedule sched;
    if (!a.schedule.empty()) {
        sched = parse_schedule_literal(a.schedule, profile_of(op));
    } else {
        BigIndex horizon = parse_big_arg("--horizon", a.horizon);
        if (horizon < 1) throw DomainError("--horizon: must be >= 1");
        sched = Schedule::geometric(1, horizon, 2.0);
    }

    OrbitNormSeries series = orbit_norm_series(op, x, sched.points.back());
    CesaroTrace trace =
        cesaro_trace(series, sched, backend_from(a.backend), a.budget);

    if (a.out == "csv") {
        std::cout << "N,mean,log10_mean\n";
        for (size_t i = 0; i < trace.schedule.size(); ++i)
            std::cout << big_to_string(trace.schedule[i]) << ","
                      << num(trace.values[i].to_real()) << ","
                      << num(log10_of(trace.values[i])) << "\n";
        return kExitOk;
    }
    json doc;
    doc["operator"] = op.describe();
    doc["vector"] = x.describe();
    doc["backend"] = a.backend;
    json rows = json::array();
    for (size_t i = 0; i < trace.schedule.size(); ++i)
        rows.push_back(
            {{"N", big_to_string(trace.schedule[i])},
             {"mean", jnum(trace.values[i].to_real())},
             {"log10_mean", jnum(log10_of(trace.values[i]))},
             {"backend",
              trace.backends[i] == CesaroBackend::Segment ? "segment" : "loop"}});
    doc["rows"] = std::move(rows);
    doc["min"] = {{"N", big_to_string(trace.schedule[trace.argmin])},
                  {"mean", jnum(trace.min_value.to_real())}};
    doc["max"] = {{"N", big_to_string(trace.schedule[trace.argmax])},
                  {"mean", jnum(trace.max_value.to_real())}};
    std::cout << doc.dump(2) << "\n";
    return kExitOk;
}

// ---- density ----

struct DensityArgs {
    std::string op, vec, vec2 = "zero", out = "csv";
    double delta = 0.0;
    int64_t horizon = 100000;
};

int run_density(const DensityArgs& a) {
    ShiftOperator op = parse_operator_literal(a.op);
    SparseVec d = sub(parse_vector_literal(a.vec), parse_vector_literal(a.vec2));
    if (!(a.delta > 0.0)) throw DomainError("--delta: must be > 0");
    if (a.horizon < 1) throw DomainError("--horizon: must be >= 1");
    if (a.horizon > 100'000'000)
        throw BudgetError("density walks every j; horizon capped at 1e8");

    LogReal bound = LogReal::from_real(a.delta);
    json rows = json::array();
    bool csv = a.out == "csv";
    if (csv) std::cout << "n,count,ratio\n";

    int64_t count = 0;
    int64_t next_emit = 1;
    for (int64_t j = 1; j <= a.horizon; ++j) {
        if (cmp_abs(orbit_norm(op, d, j), bound) < 0) ++count;
        if (j == next_emit || j == a.horizon) {
            double ratio = static_cast<double>(count) / static_cast<double>(j);
            if (csv)
                std::cout << j << "," << count << "," << num(ratio) << "\n";
            else
                rows.push_back({{"n", j}, {"count", count}, {"ratio", ratio}});
            while (next_emit <= j) next_emit *= 2;
        }
    }
    if (!csv) {
        json doc;
        doc["operator"] = op.describe();
        doc["difference"] = d.describe();
        doc["delta"] = a.delta;
        doc["rows"] = std::move(rows);
        std::cout << doc.dump(2) << "\n";
    }
    return kExitOk;
}

// ---- classify ----

struct ClassifyArgs {
    std::string op, vec, vec2 = "zero", horizon = "100000", tail_start = "0",
                deltas, schedule, out = "json";
    double eta = 1e-3, lambda = 1e3, margin = 0.5;
    int64_t budget = kDefaultLoopBudget;
};

int run_classify(const ClassifyArgs& a) {
    if (a.out != "json")
        throw DomainError("classify emits json only; csv has no verdict shape");
    ShiftOperator op = parse_operator_literal(a.op);
    SparseVec x = parse_vector_literal(a.vec);
    SparseVec y = parse_vector_literal(a.vec2);

    ClassifyParams params;
    params.horizon = parse_big_arg("--horizon", a.horizon);
    params.tail_start = parse_big_arg("--tail-start", a.tail_start);
    if (!a.deltas.empty()) params.delta_grid = parse_double_list("--deltas", a.deltas);
    params.eta = a.eta;
    params.lambda = a.lambda;
    params.margin = a.margin;
    if (!a.schedule.empty())
        params.schedule = parse_schedule_literal(a.schedule, profile_of(op));
    params.loop_budget = a.budget;

    PairVerdict v = classify_pair(op, x, y, params);
    std::cout << verdict_to_json(v) << "\n";
    return kExitOk;
}

// ---- acb-probe ----

struct AcbArgs {
    std::string op, schedule = "geom:1:4096:2", out = "json";
    std::vector<std::string> vecs;
    int random = 0;
    uint64_t seed = 12345;
    double c0 = 1.0;
    int64_t budget = kDefaultLoopBudget;
};

int run_acb_probe(const AcbArgs& a) {
    ShiftOperator op = parse_operator_literal(a.op);
    Schedule sched = parse_schedule_literal(a.schedule, profile_of(op));

    std::vector<SparseVec> samples;
    for (const std::string& v : a.vecs) samples.push_back(parse_vector_literal(v));
    if (a.random > 0) {
        // random basis vectors; bilateral ranges stay well inside the anchor
        // window so every schedule point keeps j + k on the profile
        int64_t lo = 1, hi = 4096;
        if (op.bilateral()) {
            lo = std::max<int64_t>(-4096,
                                   big_to_i64_saturating(op.profile.min_index() / 2));
            hi = std::min<int64_t>(4096,
                                   big_to_i64_saturating(op.profile.max_index() / 2));
        }
        std::mt19937_64 rng(a.seed);
        std::uniform_int_distribution<int64_t> pick(lo, hi);
        for (int i = 0; i < a.random; ++i)
            samples.push_back(SparseVec::basis(BigIndex(pick(rng))));
    }
    if (samples.empty())
        throw DomainError("acb-probe needs at least one --vector or --random > 0");

    AcbReport rep = acb_probe(op, samples, sched, a.c0, a.budget);

    if (a.out == "csv") {
        std::cout << "sample,norm,sup_ratio,arg_N\n";
        for (const AcbSample& s : rep.samples)
            std::cout << csv_quote(s.vector) << "," << num(s.norm.to_real())
                      << "," << num(s.sup_ratio.to_real()) << ","
                      << big_to_string(s.arg_n) << "\n";
    } else {
        json doc;
        doc["operator"] = op.describe();
        doc["c0"] = rep.c0;
        doc["max_ratio"] = jnum(rep.max_ratio.to_real());
        doc["arg_sample"] = rep.arg_sample;
        doc["violated"] = rep.violated;
        doc["verdict"] = rep.verdict;
        json arr = json::array();
        for (const AcbSample& s : rep.samples)
            arr.push_back({{"vector", s.vector},
                           {"norm", jnum(s.norm.to_real())},
                           {"sup_ratio", jnum(s.sup_ratio.to_real())},
                           {"arg_N", big_to_string(s.arg_n)}});
        doc["samples"] = std::move(arr);
        std::cout << doc.dump(2) << "\n";
    }
    return rep.violated ? kExitCheckFailed : kExitOk;
}

// ---- construct-irregular ----

struct ConstructArgs {
    std::string op, candidates = "auto", first = "1", out = "json";
    int stages = 1;
    int64_t budget = 1'000'000;
    double growth_c = 0.0;
    bool growth_set = false;
};

int run_construct(const ConstructArgs& a) {
    if (a.out != "json")
        throw DomainError("construct-irregular emits json only");
    ShiftOperator op = parse_operator_literal(a.op);

    CandidateGen gen;
    bool want_pairblock =
        a.candidates == "pairblock" ||
        (a.candidates == "auto" && op.kind == ShiftOperator::Kind::UnilateralBackward &&
         op.weights.kind == WeightModel::Kind::BlockHalvesTwos);
    if (want_pairblock)
        gen = pair_block_candidates();
    else
        gen = basis_candidates(parse_big_arg("--first", a.first));

    std::optional<double> growth;
    if (a.growth_set) growth = a.growth_c;

    Certificate cert = construct_irregular_vector(op, a.stages, gen, a.budget, growth);
    CheckReport checks = verify_certificate(op, cert);

    json doc;
    doc["certificate"] = json::parse(certificate_to_json(cert));
    doc["checks"] = json::parse(report_to_json(checks));
    std::cout << doc.dump(2) << "\n";
    return (cert.complete && checks.all_passed()) ? kExitOk : kExitCheckFailed;
}

// ---- semigroup ----

struct SemigroupArgs {
    std::string family = "translation", weight = "const:1", f, times = "0.5,1,2",
                bs = "1,10", out = "json";
    double gamma = 1.0, p = 1.0, eps = 0.0, s = 0.0, tau = 1e-8;
    bool eps_set = false, s_set = false;
};

int run_semigroup(const SemigroupArgs& a) {
    StepFunction f = parse_step_literal(a.f);
    std::vector<double> bs = parse_double_list("--b", a.bs);

    if (a.eps_set) {
        CheckReport rep = acb_integral_check(a.eps, a.p, f, bs, a.tau);
        emit_report(rep, a.out);
        return rep.all_passed() ? kExitOk : kExitCheckFailed;
    }

    SemigroupFamily fam;
    if (a.family == "multiplicative")
        fam = SemigroupFamily::multiplicative_translation(a.gamma, a.p);
    else if (a.family == "line-translation")
        fam = SemigroupFamily::whole_line_translation(parse_weight_literal(a.weight),
                                                      a.p);
    else
        fam = SemigroupFamily::translation(parse_weight_literal(a.weight), a.p);

    if (a.s_set) {
        CheckReport rep = sandwich_check(fam, f, a.s, bs, a.tau);
        emit_report(rep, a.out);
        return rep.all_passed() ? kExitOk : kExitCheckFailed;
    }

    std::vector<double> times = parse_double_list("--times", a.times);
    if (a.out == "csv") {
        std::cout << "kind,at,value\n";
        for (double t : times)
            std::cout << "norm," << num(t) << ","
                      << num(semigroup_norm(fam, f, t, a.tau)) << "\n";
        for (double b : bs)
            std::cout << "cesaro," << num(b) << ","
                      << num(cesaro_integral(fam, f, b, a.tau)) << "\n";
        return kExitOk;
    }
    json doc;
    doc["family"] = a.family;
    doc["p"] = a.p;
    if (a.family == "multiplicative") doc["gamma"] = a.gamma;
    json norms = json::array();
    for (double t : times)
        norms.push_back({{"t", t}, {"value", semigroup_norm(fam, f, t, a.tau)}});
    doc["norms"] = std::move(norms);
    json means = json::array();
    for (double b : bs)
        means.push_back({{"b", b}, {"value", cesaro_integral(fam, f, b, a.tau)}});
    doc["cesaro"] = std::move(means);
    std::cout << doc.dump(2) << "\n";
    return kExitOk;
}

// ---- gallery ----

struct GalleryRunArgs {
    std::string name, out = "json";
    GalleryOverrides ov;
    int k_max = 0;
    int64_t horizon = 0, budget = 0;
    bool k_set = false, h_set = false, b_set = false;
};

int run_gallery_run(GalleryRunArgs& a) {
    if (a.k_set) a.ov.k_max = a.k_max;
    if (a.h_set) a.ov.horizon = a.horizon;
    if (a.b_set) a.ov.budget = a.budget;
    CheckReport rep = gallery_run(a.name, a.ov);
    emit_report(rep, a.out);
    return rep.all_passed() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted-shift and translation-semigroup dynamics laboratory"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "meanly 0.1.0");
    app.fallthrough(true);  // lets --config appear after the subcommand name
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON config file with per-subcommand flags");
    auto out_check = CLI::IsMember({"csv", "json"});

    OrbitArgs orbit_args;
    CLI::App* orbit_cmd = app.add_subcommand("orbit", "tabulate j -> ||T^j x||");
    orbit_cmd->add_option("--operator", orbit_args.op, "operator literal")->required();
    orbit_cmd->add_option("--vector", orbit_args.vec, "vector literal")->required();
    orbit_cmd->add_option("--horizon", orbit_args.horizon,
                          "last j (every j up to 1e4, geometric beyond)");
    orbit_cmd->add_option("--schedule", orbit_args.schedule,
                          "explicit schedule literal (overrides --horizon)");
    orbit_cmd->add_option("--out", orbit_args.out, "csv|json")->check(out_check);

    CesaroArgs cesaro_args;
    CLI::App* cesaro_cmd =
        app.add_subcommand("cesaro", "tabulate N -> (1/N) sum_j ||T^j x||");
    cesaro_cmd->add_option("--operator", cesaro_args.op, "operator literal")
        ->required();
    cesaro_cmd->add_option("--vector", cesaro_args.vec, "vector literal")->required();
    cesaro_cmd->add_option("--horizon", cesaro_args.horizon,
                           "geometric schedule up to this N");
    cesaro_cmd->add_option("--schedule", cesaro_args.schedule,
                           "schedule literal (overrides --horizon)");
    cesaro_cmd->add_option("--backend", cesaro_args.backend, "loop|segment|auto")
        ->check(CLI::IsMember({"loop", "segment", "auto"}));
    cesaro_cmd->add_option("--budget", cesaro_args.budget, "loop-mode step budget");
    cesaro_cmd->add_option("--out", cesaro_args.out, "csv|json")->check(out_check);

    DensityArgs density_args;
    CLI::App* density_cmd = app.add_subcommand(
        "density", "count {j <= n : ||T^j(x - y)|| < delta} along n");
    density_cmd->add_option("--operator", density_args.op, "operator literal")
        ->required();
    density_cmd->add_option("--vector", density_args.vec, "vector literal")
        ->required();
    density_cmd->add_option("--vector2", density_args.vec2,
                            "second vector (default zero)");
    density_cmd->add_option("--delta", density_args.delta, "closeness threshold")
        ->required();
    density_cmd->add_option("--horizon", density_args.horizon, "walk j = 1..horizon");
    density_cmd->add_option("--out", density_args.out, "csv|json")->check(out_check);

    ClassifyArgs classify_args;
    CLI::App* classify_cmd = app.add_subcommand(
        "classify", "finite-horizon chaos-flag verdict for a pair");
    classify_cmd->add_option("--operator", classify_args.op, "operator literal")
        ->required();
    classify_cmd->add_option("--vector", classify_args.vec, "vector literal")
        ->required();
    classify_cmd->add_option("--vector2", classify_args.vec2,
                             "second vector (default zero)");
    classify_cmd->add_option("--horizon", classify_args.horizon, "per-j horizon");
    classify_cmd->add_option("--tail-start", classify_args.tail_start,
                             "density window start (0 -> horizon/10)");
    classify_cmd->add_option("--deltas", classify_args.deltas,
                             "comma list overriding the delta grid");
    classify_cmd->add_option("--schedule", classify_args.schedule,
                             "Cesaro schedule literal");
    classify_cmd->add_option("--eta", classify_args.eta, "smallness threshold");
    classify_cmd->add_option("--lambda", classify_args.lambda, "largeness threshold");
    classify_cmd->add_option("--margin", classify_args.margin, "density margin c");
    classify_cmd->add_option("--budget", classify_args.budget, "loop budget");
    classify_cmd->add_option("--out", classify_args.out, "json")->check(out_check);

    AcbArgs acb_args;
    CLI::App* acb_cmd = app.add_subcommand(
        "acb-probe", "sup_N A_N(x)/||x|| over a schedule, against a constant");
    acb_cmd->add_option("--operator", acb_args.op, "operator literal")->required();
    acb_cmd->add_option("--vector", acb_args.vecs,
                        "sample vector literal (repeatable)");
    acb_cmd->add_option("--random", acb_args.random, "add N random basis samples");
    acb_cmd->add_option("--seed", acb_args.seed, "RNG seed for --random");
    acb_cmd->add_option("--schedule", acb_args.schedule, "schedule literal");
    acb_cmd->add_option("--c0", acb_args.c0, "candidate bound");
    acb_cmd->add_option("--budget", acb_args.budget, "loop budget");
    acb_cmd->add_option("--out", acb_args.out, "csv|json")->check(out_check);

    ConstructArgs construct_args;
    CLI::App* construct_cmd = app.add_subcommand(
        "construct-irregular", "staged irregular-vector search + verification");
    construct_cmd->add_option("--operator", construct_args.op, "operator literal")
        ->required();
    construct_cmd->add_option("--stages", construct_args.stages, "stage count")
        ->check(CLI::PositiveNumber);
    construct_cmd->add_option("--budget", construct_args.budget, "evaluation budget");
    CLI::Option* growth_opt = construct_cmd->add_option(
        "--growth-c", construct_args.growth_c, "growth constant C (default ||T||)");
    construct_cmd->add_option("--candidates", construct_args.candidates,
                              "auto|basis|pairblock")
        ->check(CLI::IsMember({"auto", "basis", "pairblock"}));
    construct_cmd->add_option("--first", construct_args.first,
                              "first basis index for --candidates basis");
    construct_cmd->add_option("--out", construct_args.out, "json")->check(out_check);

    SemigroupArgs semi_args;
    CLI::App* semi_cmd = app.add_subcommand(
        "semigroup", "norms, Cesaro integrals and checks for C0 families");
    semi_cmd->add_option("--family", semi_args.family,
                         "translation|line-translation|multiplicative")
        ->check(CLI::IsMember({"translation", "line-translation", "multiplicative"}));
    semi_cmd->add_option("--weight", semi_args.weight,
                         "weight literal (translation families)");
    semi_cmd->add_option("--gamma", semi_args.gamma,
                         "drift exponent (multiplicative family)");
    semi_cmd->add_option("--p", semi_args.p, "space exponent");
    semi_cmd->add_option("--f", semi_args.f, "step-function literal")->required();
    semi_cmd->add_option("--times", semi_args.times, "comma list of t for norms");
    semi_cmd->add_option("--b", semi_args.bs, "comma list of b for Cesaro integrals");
    CLI::Option* eps_opt = semi_cmd->add_option(
        "--eps", semi_args.eps, "run the mixing-family integral check at this eps");
    CLI::Option* s_opt = semi_cmd->add_option(
        "--s", semi_args.s, "run the discretization sandwich at this step");
    semi_cmd->add_option("--tau", semi_args.tau, "quadrature tolerance");
    semi_cmd->add_option("--out", semi_args.out, "csv|json")->check(out_check);

    CLI::App* gallery_cmd =
        app.add_subcommand("gallery", "curated example manifests");
    gallery_cmd->require_subcommand(1);
    CLI::App* list_cmd = gallery_cmd->add_subcommand("list", "entry names");
    GalleryRunArgs gallery_args;
    CLI::App* run_cmd = gallery_cmd->add_subcommand("run", "run one manifest");
    run_cmd->add_option("name", gallery_args.name, "entry name")->required();
    CLI::Option* gk_opt = run_cmd->add_option("--k-max", gallery_args.k_max,
                                              "profile depth override");
    CLI::Option* gh_opt =
        run_cmd->add_option("--horizon", gallery_args.horizon, "horizon override");
    CLI::Option* gb_opt =
        run_cmd->add_option("--budget", gallery_args.budget, "budget override");
    run_cmd->add_flag("--timings", gallery_args.ov.timings,
                      "append wall-clock notices");
    run_cmd->add_option("--out", gallery_args.out, "csv|json")->check(out_check);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    construct_args.growth_set = growth_opt->count() > 0;
    semi_args.eps_set = eps_opt->count() > 0;
    semi_args.s_set = s_opt->count() > 0;
    if (gk_opt->count()) gallery_args.k_set = true;
    if (gh_opt->count()) gallery_args.h_set = true;
    if (gb_opt->count()) gallery_args.b_set = true;

    try {
        if (orbit_cmd->parsed()) return run_orbit(orbit_args);
        if (cesaro_cmd->parsed()) return run_cesaro(cesaro_args);
        if (density_cmd->parsed()) return run_density(density_args);
        if (classify_cmd->parsed()) return run_classify(classify_args);
        if (acb_cmd->parsed()) return run_acb_probe(acb_args);
        if (construct_cmd->parsed()) return run_construct(construct_args);
        if (semi_cmd->parsed()) return run_semigroup(semi_args);
        if (gallery_cmd->parsed()) {
            if (list_cmd->parsed()) {
                for (const std::string& name : gallery_list())
                    std::cout << name << "\n";
                return kExitOk;
            }
            return run_gallery_run(gallery_args);
        }
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const CapabilityError& e) {
        std::cerr << "capability error: " << e.what() << "\n";
        return kExitCapability;
    } catch (const QuadratureError& e) {
        std::cerr << "quadrature error: " << e.what()
                  << " (achieved " << num(e.achieved_tol) << ")\n";
        return kExitCapability;
    } catch (const BudgetError& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return kExitCapability;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCapability;
    }
    return kExitUsage;
}
