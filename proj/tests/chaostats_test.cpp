#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <random>

#include "meanly/chaostats.hpp"

using namespace meanly;

namespace {

// forward shift realizing an arbitrary positive orbit g(j) = ||T^j e_1||
// through per-step weight ratios
ShiftOperator orbit_op(const std::vector<double>& g) {
    std::vector<double> w;
    w.reserve(g.size());
    double prev = 1.0;
    for (double v : g) {
        w.push_back(v / prev);
        prev = v;
    }
    return ShiftOperator::unilateral_forward(WeightModel::explicit_list(w));
}

// two-scale oscillator: huge on [4^m, 2*4^m), tiny elsewhere
bool large_phase(int64_t j) {
    for (int64_t lo = 1; lo <= j; lo *= 4)
        if (j >= lo && j < 2 * lo) return true;
    return false;
}

std::vector<double> oscillator_orbit(int64_t horizon) {
    std::vector<double> g;
    for (int64_t j = 1; j <= horizon; ++j)
        g.push_back(large_phase(j) ? 1e3 : 1e-9);
    return g;
}

}  // namespace

TEST_CASE("density windows over explicit sets") {
    DensityEstimate evens = density_estimate(
        [](const BigIndex& j) { return j % 2 == 0; }, BigIndex(100000),
        BigIndex(10000));
    CHECK(evens.low == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(evens.high == doctest::Approx(0.5).epsilon(1e-4));

    // union of [4^k, 2*4^k): the canonical set with distinct lower and upper
    // densities 1/3 and 2/3
    auto member = [](const BigIndex& j) {
        BigIndex lo = 1;
        while (lo <= j) {
            if (j >= lo && j < 2 * lo) return true;
            lo *= 4;
        }
        return false;
    };
    BigIndex horizon = BigIndex(1) << 20;  // 4^10
    DensityEstimate un = density_estimate(member, horizon, horizon / 10);
    CHECK(un.low == doctest::Approx(0.33333333).epsilon(1e-7));
    CHECK(un.high == doctest::Approx(0.66666921).epsilon(1e-7));

    DensityEstimate full = density_estimate(
        [](const BigIndex&) { return true; }, BigIndex(5000), BigIndex(1));
    CHECK(full.low == 1.0);
    CHECK(full.high == 1.0);

    CHECK_THROWS_AS(density_estimate(member, BigIndex(10), BigIndex(11)),
                    DomainError);
    CHECK_THROWS_AS(density_estimate(member, BigIndex(10), BigIndex(0)),
                    DomainError);
    CHECK_THROWS_AS(
        density_estimate(member, BigIndex(1000), BigIndex(1), /*budget=*/100),
        BudgetError);
}

TEST_CASE("distributional profile of a dying harmonic orbit") {
    ShiftOperator har =
        ShiftOperator::unilateral_backward(WeightModel::harmonic());
    DistributionalProfile prof = distributional_profile(
        har, SparseVec::basis(100), SparseVec::zero(), {0.5}, BigIndex(10000),
        BigIndex(1000));
    // ||B^j e_100|| = 100/(100-j) >= 1 while alive, 0 from j = 100 on, so the
    // small-difference set is exactly [100, horizon]
    CHECK(prof.F(0) == doctest::Approx(0.901).epsilon(1e-12));
    CHECK(prof.Fstar(0) == doctest::Approx(0.9901).epsilon(1e-12));
}

TEST_CASE("distributional profile edge shapes") {
    ShiftOperator id = ShiftOperator::identity();
    SparseVec x = SparseVec::basis(4);
    DistributionalProfile prof = distributional_profile(
        id, x, SparseVec::zero(), {0.5, 2.0}, BigIndex(500), BigIndex(50));
    CHECK(prof.F(0) == 0.0);
    CHECK(prof.Fstar(0) == 0.0);
    CHECK(prof.F(1) == 1.0);
    CHECK(prof.Fstar(1) == 1.0);

    // x = y: the zero difference is below every delta everywhere
    DistributionalProfile same = distributional_profile(
        id, x, x, {1e-6, 1.0}, BigIndex(200), BigIndex(20));
    for (size_t i = 0; i < same.delta_grid.size(); ++i) {
        CHECK(same.F(i) == 1.0);
        CHECK(same.Fstar(i) == 1.0);
    }

    CHECK_THROWS_AS(distributional_profile(id, x, SparseVec::zero(), {},
                                           BigIndex(10), BigIndex(1)),
                    DomainError);
    CHECK_THROWS_AS(distributional_profile(id, x, SparseVec::zero(), {2.0, 1.0},
                                           BigIndex(10), BigIndex(1)),
                    DomainError);
    CHECK_THROWS_AS(distributional_profile(id, x, SparseVec::zero(), {-1.0},
                                           BigIndex(10), BigIndex(1)),
                    DomainError);
}

TEST_CASE("oscillator profile equals the phase-set density, per delta") {
    const int64_t H = 4096;
    ShiftOperator op = orbit_op(oscillator_orbit(H));
    DistributionalProfile prof = distributional_profile(
        op, SparseVec::basis(1), SparseVec::zero(), default_delta_grid(),
        BigIndex(H), BigIndex(H / 10));
    // every grid delta separates 1e-9 from 1e3, so each estimate must agree
    // exactly with direct counting of the small phase
    DensityEstimate small_set = density_estimate(
        [](const BigIndex& j) { return !large_phase(j.convert_to<int64_t>()); },
        BigIndex(H), BigIndex(H / 10));
    for (size_t i = 0; i < prof.delta_grid.size(); ++i) {
        CHECK(prof.F(i) == small_set.low);
        CHECK(prof.Fstar(i) == small_set.high);
    }
    CHECK(small_set.low == doctest::Approx(510.0 / 1533.0).epsilon(1e-12));
    CHECK(small_set.high == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("classifier: two-scale oscillator is distributionally chaotic") {
    const int64_t H = 4096;
    ShiftOperator op = orbit_op(oscillator_orbit(H));
    ClassifyParams params;
    params.horizon = H;
    params.lambda = 500.0;
    PairVerdict v =
        classify_pair(op, SparseVec::basis(1), SparseVec::zero(), params);
    CHECK(v.ly == FlagStatus::Supported);        // dips to 1e-9, peaks at 1e3
    CHECK(v.mean_ly == FlagStatus::Unsupported);  // means never leave [300, 1e3]
    CHECK(v.dc1 == FlagStatus::Supported);
    CHECK(v.dc2 == FlagStatus::Supported);
    CHECK(v.dc2half == FlagStatus::Supported);
    CHECK(v.dc3 == FlagStatus::Supported);
    CHECK(v.orbit_min.to_real() == doctest::Approx(1e-9).epsilon(1e-9));
    CHECK(v.orbit_max.to_real() == doctest::Approx(1e3).epsilon(1e-9));
}

TEST_CASE("classifier: hill/valley pair is mean Li-Yorke at its horizons") {
    AnchorProfile prof = build_tbilcami(ProfileVariant::Original, 4);
    ShiftOperator op = ShiftOperator::bilateral_forward(prof);
    ClassifyParams params;
    params.horizon = 10000;
    params.schedule = Schedule::tbilcami_dips(prof, {1, 2, 3});
    for (int k : {1, 10, 100, 10000})
        params.extra_cesaro_points.push_back(
            tbilcami_hill_mean(k, ProfileVariant::Original));
    // eta set a hair under the level-3 dip envelope (2k)^{2/3}/(k+1)
    params.eta = 0.95 * std::pow(6.0, 2.0 / 3.0) / 4.0;
    params.lambda = 1.5;
    PairVerdict v =
        classify_pair(op, SparseVec::basis(0), SparseVec::zero(), params);
    CHECK(v.mean_ly == FlagStatus::Supported);
    CHECK(v.dip.N == 115421976);
    CHECK(v.dip.value.to_real() == doctest::Approx(0.613885625178).epsilon(1e-9));
    CHECK(std::floor(ln_big(v.peak.N) / std::log(10.0)) + 1.0 ==
          doctest::Approx(238027.0));
    CHECK(v.peak.value.to_real() == doctest::Approx(1.7780191843).epsilon(1e-7));
    // the raw orbit only swings between ~0.63 and ~1.32 inside this window:
    // mean chaos shows long before pointwise chaos at these thresholds
    CHECK(v.ly == FlagStatus::Unsupported);
}

TEST_CASE("classifier: degenerate pairs stay unsupported") {
    ShiftOperator blk =
        ShiftOperator::unilateral_backward(WeightModel::block_halves_twos());
    ClassifyParams params;
    params.horizon = 100;
    PairVerdict same =
        classify_pair(blk, SparseVec::basis(12), SparseVec::basis(12), params);
    CHECK(same.ly == FlagStatus::Unsupported);
    CHECK(same.mean_ly == FlagStatus::Unsupported);
    CHECK(same.dc1 == FlagStatus::Unsupported);
    CHECK(same.dc2 == FlagStatus::Unsupported);
    CHECK(same.dc2half == FlagStatus::Unsupported);
    CHECK(same.dc3 == FlagStatus::Unsupported);

    ShiftOperator id = ShiftOperator::identity();
    PairVerdict ident =
        classify_pair(id, SparseVec::basis(3), SparseVec::zero(), params);
    CHECK(ident.mean_ly == FlagStatus::Unsupported);  // constant trace
    CHECK(ident.ly == FlagStatus::Unsupported);
    CHECK(ident.dc1 == FlagStatus::Unsupported);
    CHECK(ident.dc3 == FlagStatus::Unsupported);
}

TEST_CASE("verdict JSON carries flags, params, and evidence") {
    ShiftOperator har =
        ShiftOperator::unilateral_backward(WeightModel::harmonic());
    ClassifyParams params;
    params.horizon = 1000;
    params.eta = 1e-3;
    params.lambda = 50.0;
    PairVerdict v =
        classify_pair(har, SparseVec::basis(100), SparseVec::zero(), params);
    CHECK(v.ly == FlagStatus::Supported);  // dies (min 0), peaks at 100 > 50
    CHECK(v.mean_ly == FlagStatus::Unsupported);  // means decay only like 1/N

    auto js = nlohmann::json::parse(verdict_to_json(v));
    CHECK(js["flags"]["LY"] == "supported");
    CHECK(js["flags"]["meanLY"] == "unsupported");
    CHECK(js["params"]["horizon"] == "1000");
    CHECK(js["params"]["eta"].get<double>() == doctest::Approx(1e-3));
    CHECK(js["evidence"]["profile"].size() == default_delta_grid().size());
    CHECK(js["evidence"]["dip"]["N"].is_string());
    CHECK(js["evidence"]["orbit_max"].get<double>() ==
          doctest::Approx(100.0).epsilon(1e-9));
    CHECK(js["pair"].get<std::string>().find("backward[harmonic]") == 0);
}

TEST_CASE("property: F <= F*, monotone in delta, Markov-consistent") {
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> lw(-2.5, 2.5);
    const BigIndex H(120), tail(12);
    std::vector<double> grid = default_delta_grid();
    for (int trial = 0; trial < 125; ++trial) {
        std::vector<double> g;
        for (int j = 0; j < 120; ++j) g.push_back(std::exp(lw(rng)));
        ShiftOperator op = orbit_op(g);
        SparseVec x = SparseVec::basis(1);
        DistributionalProfile prof =
            distributional_profile(op, x, SparseVec::zero(), grid, H, tail);
        OrbitNormSeries ser = orbit_norm_series(op, x, H);
        double mean = cesaro_mean(ser, H, CesaroBackend::Loop).to_real();
        for (size_t i = 0; i < grid.size(); ++i) {
            CHECK(prof.F(i) <= prof.Fstar(i));
            CHECK(prof.F(i) >= 0.0);
            CHECK(prof.Fstar(i) <= 1.0);
            if (i > 0) {
                CHECK(prof.F(i) >= prof.F(i - 1));
                CHECK(prof.Fstar(i) >= prof.Fstar(i - 1));
            }
            // Markov: the not-small set at the full horizon is mean-bounded
            CHECK(1.0 - prof.Fstar(i) <=
                  std::min(1.0, mean / grid[i]) + 1e-12);
        }
    }
}

TEST_CASE("property: complementary sets split the window exactly") {
    std::mt19937_64 rng(707);
    const BigIndex H(300), tail(30);
    for (int trial = 0; trial < 1000; ++trial) {
        uint64_t seed = rng();
        auto member = [seed](const BigIndex& j) {
            std::mt19937_64 g(seed ^ j.convert_to<uint64_t>());
            return (g() & 1) == 0;
        };
        auto complement = [&member](const BigIndex& j) { return !member(j); };
        DensityEstimate a = density_estimate(member, H, tail);
        DensityEstimate b = density_estimate(complement, H, tail);
        CHECK(a.low + b.high == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(a.high + b.low == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(a.low <= a.high);
    }
}

TEST_CASE("property: classification depends only on the difference") {
    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> lw(-1.5, 1.5);
    std::uniform_real_distribution<double> cf(-2.0, 2.0);
    std::uniform_int_distribution<int> idx(1, 30);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> w;
        for (int j = 0; j < 60; ++j) w.push_back(std::exp(lw(rng)));
        ShiftOperator op = ShiftOperator::unilateral_backward(
            WeightModel::explicit_list(w));
        std::vector<SparseVec::Entry> rx, ry;
        for (int i = 0; i < 3; ++i) {
            rx.push_back({BigIndex(idx(rng)), LogReal::from_real(cf(rng))});
            ry.push_back({BigIndex(idx(rng)), LogReal::from_real(cf(rng))});
        }
        SparseVec x = SparseVec::from_entries(std::move(rx));
        SparseVec y = SparseVec::from_entries(std::move(ry));
        ClassifyParams params;
        params.horizon = 64;
        params.eta = 0.25;
        params.lambda = 4.0;
        PairVerdict vxy = classify_pair(op, x, y, params);
        PairVerdict vd = classify_pair(op, sub(x, y), SparseVec::zero(), params);
        CHECK(vxy.ly == vd.ly);
        CHECK(vxy.mean_ly == vd.mean_ly);
        CHECK(vxy.dc1 == vd.dc1);
        CHECK(vxy.dc2 == vd.dc2);
        CHECK(vxy.dc2half == vd.dc2half);
        CHECK(vxy.dc3 == vd.dc3);
        CHECK(vxy.dip.N == vd.dip.N);
        CHECK(vxy.dip.value.logmag == vd.dip.value.logmag);
        CHECK(vxy.peak.value.logmag == vd.peak.value.logmag);
        CHECK(vxy.orbit_min.logmag == vd.orbit_min.logmag);
        CHECK(vxy.orbit_max.logmag == vd.orbit_max.logmag);
        for (size_t i = 0; i < vxy.profile.delta_grid.size(); ++i) {
            CHECK(vxy.profile.F(i) == vd.profile.F(i));
            CHECK(vxy.profile.Fstar(i) == vd.profile.Fstar(i));
        }
    }
}

TEST_CASE("flag chain: stronger distributional notions imply weaker ones") {
    // across assorted verdicts the spec-level invariant must hold
    std::vector<PairVerdict> verdicts;
    {
        const int64_t H = 4096;
        ShiftOperator op = orbit_op(oscillator_orbit(H));
        ClassifyParams params;
        params.horizon = H;
        verdicts.push_back(
            classify_pair(op, SparseVec::basis(1), SparseVec::zero(), params));
    }
    {
        ShiftOperator har =
            ShiftOperator::unilateral_backward(WeightModel::harmonic());
        ClassifyParams params;
        params.horizon = 2000;
        verdicts.push_back(
            classify_pair(har, SparseVec::basis(50), SparseVec::zero(), params));
    }
    for (const PairVerdict& v : verdicts) {
        if (v.dc1 == FlagStatus::Supported) CHECK(v.dc2 == FlagStatus::Supported);
        if (v.dc2 == FlagStatus::Supported)
            CHECK(v.dc2half == FlagStatus::Supported);
        if (v.dc2half == FlagStatus::Supported)
            CHECK(v.dc3 == FlagStatus::Supported);
    }
}
