#include "meanly/literals.hpp"

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "meanly/errors.hpp"
#include "meanly/weights.hpp"

namespace meanly {
namespace {

[[noreturn]] void bad(const std::string& kind, const std::string& text) {
    throw DomainError("malformed " + kind + " literal: \"" + text + "\"");
}

std::vector<std::string> split(const std::string& s, char delim) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t pos = s.find(delim, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_double(const std::string& s, const std::string& ctx) {
    size_t used = 0;
    double v;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        bad(ctx, s);
    }
    if (used != s.size()) bad(ctx, s);
    return v;
}

int parse_int(const std::string& s, const std::string& ctx) {
    size_t used = 0;
    int v;
    try {
        v = std::stoi(s, &used);
    } catch (const std::exception&) {
        bad(ctx, s);
    }
    if (used != s.size()) bad(ctx, s);
    return v;
}

BigIndex parse_big(const std::string& s, const std::string& ctx) {
    if (s.empty()) bad(ctx, s);  // cpp_int reads "" as 0
    try {
        return big_from_string(s);
    } catch (const std::exception&) {
        bad(ctx, s);
    }
}

// "...@p=<p>" suffix; returns the stripped text
std::string take_p_suffix(const std::string& text, double& p) {
    size_t pos = text.rfind("@p=");
    if (pos == std::string::npos) return text;
    p = parse_double(text.substr(pos + 3), "operator");
    return text.substr(0, pos);
}

WeightModel parse_weight_model(const std::string& text) {
    if (text == "harmonic") return WeightModel::harmonic();
    if (text == "blocks") return WeightModel::block_halves_twos();
    if (text.rfind("const:", 0) == 0)
        return WeightModel::constant(parse_double(text.substr(6), "operator"));
    if (text.rfind("list:", 0) == 0) {
        std::vector<double> w;
        for (const std::string& item : split(text.substr(5), ','))
            w.push_back(parse_double(item, "operator"));
        return WeightModel::explicit_list(std::move(w));
    }
    bad("operator weight", text);
}

// "tbilcami:k=<k>" or "tbilcami-flat:k=<k>"
AnchorProfile parse_profile_spec(const std::string& text,
                                 const std::string& ctx) {
    ProfileVariant variant;
    std::string rest;
    if (text.rfind("tbilcami-flat:", 0) == 0) {
        variant = ProfileVariant::Flattened;
        rest = text.substr(14);
    } else if (text.rfind("tbilcami:", 0) == 0) {
        variant = ProfileVariant::Original;
        rest = text.substr(9);
    } else {
        bad(ctx, text);
    }
    if (rest.rfind("k=", 0) != 0) bad(ctx, text);
    return build_tbilcami(variant, parse_int(rest.substr(2), ctx));
}

}  // namespace

ShiftOperator parse_operator_literal(const std::string& text) {
    double p = 1.0;
    std::string body = take_p_suffix(text, p);
    if (body == "identity") return ShiftOperator::identity();
    if (body.rfind("dsum:", 0) == 0)
        return ShiftOperator::direct_sum_with_identity(
            parse_operator_literal(body.substr(5)));
    if (body.rfind("backward:", 0) == 0)
        return ShiftOperator::unilateral_backward(
            parse_weight_model(body.substr(9)), p);
    if (body.rfind("forward:", 0) == 0)
        return ShiftOperator::unilateral_forward(
            parse_weight_model(body.substr(8)), p);
    if (body.rfind("bilateral:", 0) == 0)
        return ShiftOperator::bilateral_forward(
            parse_profile_spec(body.substr(10), "operator"), p);
    if (body.rfind("bilateral-back:", 0) == 0)
        return ShiftOperator::bilateral_backward(
            parse_profile_spec(body.substr(15), "operator"), p);
    bad("operator", text);
}

SparseVec parse_vector_literal(const std::string& text) {
    if (text == "zero") return SparseVec::zero();
    if (text.rfind("e:", 0) == 0)
        return SparseVec::basis(parse_big(text.substr(2), "vector"));
    if (text.rfind("blockspecial:", 0) == 0) {
        int n = parse_int(text.substr(13), "vector");
        if (n < 1) bad("vector", text);
        return special_block_vector(n);
    }
    if (text.rfind("sum:", 0) == 0) {
        std::vector<std::pair<BigIndex, double>> raw;
        for (const std::string& item : split(text.substr(4), ',')) {
            size_t eq = item.find('=');
            if (eq == std::string::npos) bad("vector", text);
            std::string idx = item.substr(0, eq);
            size_t at = idx.find('@');
            if (at != std::string::npos) {
                // echo prefix: "2@2=0.5" repeats the index as a checksum
                if (idx.substr(0, at) != idx.substr(at + 1)) bad("vector", text);
                idx = idx.substr(at + 1);
            }
            raw.emplace_back(parse_big(idx, "vector"),
                             parse_double(item.substr(eq + 1), "vector"));
        }
        if (raw.empty()) bad("vector", text);
        return SparseVec::from_reals(raw);
    }
    bad("vector", text);
}

Schedule parse_schedule_literal(const std::string& text,
                                const AnchorProfile* profile) {
    if (text.rfind("geom:", 0) == 0) {
        std::vector<std::string> parts = split(text.substr(5), ':');
        if (parts.size() != 2 && parts.size() != 3) bad("schedule", text);
        double factor =
            parts.size() == 3 ? parse_double(parts[2], "schedule") : 2.0;
        return Schedule::geometric(parse_big(parts[0], "schedule"),
                                   parse_big(parts[1], "schedule"), factor);
    }
    if (text.rfind("explicit:", 0) == 0) {
        std::vector<BigIndex> ns;
        for (const std::string& item : split(text.substr(9), ','))
            ns.push_back(parse_big(item, "schedule"));
        return Schedule::explicit_points(std::move(ns));
    }
    bool dips = text.rfind("dips:", 0) == 0;
    bool hills = text.rfind("hills:", 0) == 0;
    if (dips || hills) {
        if (profile == nullptr)
            throw DomainError(
                "schedule literal \"" + text +
                "\" needs a bilateral operator to resolve its levels");
        std::vector<int> ks;
        for (const std::string& item : split(text.substr(dips ? 5 : 6), ','))
            ks.push_back(parse_int(item, "schedule"));
        return dips ? Schedule::tbilcami_dips(*profile, ks)
                    : Schedule::tbilcami_hills(*profile, ks);
    }
    bad("schedule", text);
}

WeightFunction parse_weight_literal(const std::string& text) {
    if (text.rfind("const:", 0) == 0)
        return WeightFunction::constant(parse_double(text.substr(6), "weight"));
    if (text.rfind("profile:", 0) == 0)
        return discretized_profile_weight(
            parse_profile_spec(text.substr(8), "weight"));
    if (text.rfind("pexp:", 0) == 0) {
        std::vector<std::pair<double, double>> anchors;
        for (const std::string& item : split(text.substr(5), ',')) {
            size_t eq = item.find('=');
            if (eq == std::string::npos) bad("weight", text);
            anchors.emplace_back(parse_double(item.substr(0, eq), "weight"),
                                 parse_double(item.substr(eq + 1), "weight"));
        }
        return WeightFunction::piecewise_exponential(std::move(anchors));
    }
    bad("weight", text);
}

StepFunction parse_step_literal(const std::string& text) {
    if (text == "zero") return StepFunction::zero();
    if (text.rfind("step:", 0) != 0) bad("step function", text);
    struct Piece {
        double lo, hi, value;
    };
    std::vector<Piece> pieces;
    std::string body = text.substr(5);
    size_t start = 0;
    int label = 1;
    while (start < body.size()) {
        // pieces are comma-separated at bracket depth zero
        size_t end = start;
        int depth = 0;
        while (end < body.size() && (depth > 0 || body[end] != ',')) {
            if (body[end] == '[') ++depth;
            if (body[end] == ']') --depth;
            ++end;
        }
        std::string item = body.substr(start, end - start);
        start = end + (end < body.size() ? 1 : 0);

        size_t eq = item.find('=');
        size_t at = item.find("@[");
        if (eq == std::string::npos || at == std::string::npos || at < eq ||
            item.back() != ']')
            bad("step function", text);
        if (parse_int(item.substr(0, eq), "step function") != label++)
            bad("step function", text);
        double value =
            parse_double(item.substr(eq + 1, at - eq - 1), "step function");
        std::vector<std::string> ends =
            split(item.substr(at + 2, item.size() - at - 3), ',');
        if (ends.size() != 2) bad("step function", text);
        pieces.push_back({parse_double(ends[0], "step function"),
                          parse_double(ends[1], "step function"), value});
    }
    if (pieces.empty()) bad("step function", text);

    std::sort(pieces.begin(), pieces.end(),
              [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
    std::vector<double> breakpoints{pieces.front().lo};
    std::vector<double> values;
    for (const Piece& pc : pieces) {
        if (pc.lo > breakpoints.back()) {  // zero-fill the gap
            values.push_back(0.0);
            breakpoints.push_back(pc.lo);
        } else if (pc.lo < breakpoints.back()) {
            throw DomainError("overlapping pieces in step literal: \"" + text +
                              "\"");
        }
        values.push_back(pc.value);
        breakpoints.push_back(pc.hi);
    }
    return StepFunction::pieces(std::move(breakpoints), std::move(values));
}

}  // namespace meanly
