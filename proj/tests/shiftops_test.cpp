#include <doctest.h>

#include <cmath>
#include <random>

#include "meanly/shiftops.hpp"

using namespace meanly;

namespace {
constexpr double kLn2 = 0.6931471805599453;

SparseVec apply_n(const ShiftOperator& op, SparseVec x, int n) {
    for (int i = 0; i < n; ++i) x = apply(op, x);
    return x;
}
}  // namespace

TEST_CASE("single applications") {
    ShiftOperator blk =
        ShiftOperator::unilateral_backward(WeightModel::block_halves_twos());
    SparseVec y = apply(blk, SparseVec::basis(2));
    REQUIRE(y.support_size() == 1);
    CHECK(y.entries[0].index == 1);
    CHECK(y.entries[0].coeff.to_real() == doctest::Approx(2.0));
    CHECK(apply(blk, SparseVec::basis(1)).is_zero());

    ShiftOperator har =
        ShiftOperator::unilateral_backward(WeightModel::harmonic());
    SparseVec h = apply(har, SparseVec::basis(5));
    CHECK(h.entries[0].index == 4);
    CHECK(h.entries[0].coeff.to_real() == doctest::Approx(1.25));

    AnchorProfile prof = build_tbilcami(ProfileVariant::Original, 2);
    ShiftOperator bil = ShiftOperator::bilateral_forward(prof);
    SparseVec b = apply(bil, SparseVec::basis(0));
    CHECK(b.entries[0].index == 1);
    CHECK(b.entries[0].coeff.to_real() == doctest::Approx(1.0));

    ShiftOperator fwd =
        ShiftOperator::unilateral_forward(WeightModel::harmonic());
    SparseVec f = apply(fwd, SparseVec::basis(5));
    CHECK(f.entries[0].index == 6);
    CHECK(f.entries[0].coeff.to_real() == doctest::Approx(1.25));
    CHECK_THROWS_AS(apply(fwd, SparseVec::basis(1)), DomainError);
}

TEST_CASE("orbit norms from cumulative windows") {
    ShiftOperator har =
        ShiftOperator::unilateral_backward(WeightModel::harmonic());
    CHECK(orbit_norm(har, SparseVec::basis(5), 4).to_real() ==
          doctest::Approx(5.0).epsilon(1e-12));
    // ||B^n e_{n+1}|| = n+1 at any scale
    BigIndex n("1000000000000000");
    CHECK(orbit_norm(har, SparseVec::basis(n + 1), n).logmag ==
          doctest::Approx(ln_big(n + 1)).epsilon(1e-12));
    CHECK(orbit_norm(har, SparseVec::basis(5), 5).is_zero());
    CHECK(orbit_norm(har, SparseVec::basis(5), 0).to_real() ==
          doctest::Approx(1.0));

    AnchorProfile prof = build_tbilcami(ProfileVariant::Original, 2);
    ShiftOperator bil = ShiftOperator::bilateral_forward(prof);
    CHECK(orbit_norm(bil, SparseVec::basis(0), 4).to_real() ==
          doctest::Approx(std::pow(2.0, -1.0 / 3.0)).epsilon(1e-12));
    CHECK(orbit_norm(bil, SparseVec::basis(0), 36).to_real() ==
          doctest::Approx(1.022041406).epsilon(1e-9));
    ShiftOperator bwd = ShiftOperator::bilateral_backward(prof);
    CHECK(orbit_norm(bwd, SparseVec::basis(0), 36).to_real() ==
          doctest::Approx(0.9080474441).epsilon(1e-9));
    // profile refuses indices beyond its anchors rather than extrapolating
    CHECK_THROWS_AS(orbit_norm(bil, SparseVec::basis(0), BigIndex(10000000)),
                    DomainError);
}

TEST_CASE("block orbit of e_12 walks the pair-block profile") {
    ShiftOperator blk =
        ShiftOperator::unilateral_backward(WeightModel::block_halves_twos());
    const double want[11] = {2, 4, 8, 4, 2, 1, 2, 4, 2, 1, 2};
    for (int j = 1; j <= 11; ++j)
        CHECK(orbit_norm(blk, SparseVec::basis(12), j).to_real() ==
              doctest::Approx(want[j - 1]).epsilon(1e-12));
    CHECK(orbit_norm(blk, SparseVec::basis(12), 12).is_zero());

    OrbitNormSeries ser = orbit_norm_series(blk, SparseVec::basis(12), 11);
    REQUIRE(ser.exact());
    REQUIRE(ser.strands().size() == 1);
    const auto& segs = ser.strands()[0].segments;
    REQUIRE(segs.size() == 5);
    CHECK(segs[0].j_start == 1);
    CHECK(segs[0].j_end == 3);
    CHECK(segs[1].j_end == 6);
    CHECK(segs[2].j_end == 8);
    CHECK(segs[3].j_end == 10);
    CHECK(segs[4].j_end == 11);
    CHECK(std::exp(segs[0].log_at(BigIndex(2))) == doctest::Approx(4.0));
    REQUIRE(ser.first_zero().has_value());
    CHECK(*ser.first_zero() == 12);
}

TEST_CASE("operator norms") {
    ShiftOperator har =
        ShiftOperator::unilateral_backward(WeightModel::harmonic());
    CHECK(operator_norm(har, BigIndex(4)).to_real() == doctest::Approx(5.0));
    BigIndex big("1000000000000");
    CHECK(operator_norm(har, big).logmag ==
          doctest::Approx(ln_big(big + 1)).epsilon(1e-12));
    CHECK(operator_norm(har, BigIndex(0)).to_real() == doctest::Approx(1.0));

    ShiftOperator blk =
        ShiftOperator::unilateral_backward(WeightModel::block_halves_twos());
    CHECK(operator_norm(blk, BigIndex(10)).to_real() ==
          doctest::Approx(1024.0).epsilon(1e-12));
    CHECK(operator_norm(blk, big).logmag ==
          doctest::Approx(1e12 * kLn2).epsilon(1e-12));

    ShiftOperator c3 =
        ShiftOperator::unilateral_forward(WeightModel::constant(3.0));
    CHECK(operator_norm(c3, BigIndex(4)).to_real() == doctest::Approx(81.0));

    ShiftOperator harf =
        ShiftOperator::unilateral_forward(WeightModel::harmonic());
    CHECK_THROWS_AS(operator_norm(harf, BigIndex(2)), CapabilityError);
    AnchorProfile prof = build_tbilcami(ProfileVariant::Original, 1);
    CHECK_THROWS_AS(
        operator_norm(ShiftOperator::bilateral_forward(prof), BigIndex(2)),
        CapabilityError);
}

TEST_CASE("operator norms over explicit lists respect window validity") {
    WeightModel w = WeightModel::explicit_list({0.5, 2.0, 3.0});
    ShiftOperator bwd = ShiftOperator::unilateral_backward(w);
    ShiftOperator fwd = ShiftOperator::unilateral_forward(w);
    // backward never consumes w_1 (B annihilates e_1)
    CHECK(operator_norm(bwd, BigIndex(1)).to_real() == doctest::Approx(3.0));
    CHECK(operator_norm(bwd, BigIndex(2)).to_real() == doctest::Approx(6.0));
    CHECK_THROWS_AS(operator_norm(bwd, BigIndex(3)), DomainError);
    CHECK(operator_norm(fwd, BigIndex(1)).to_real() == doctest::Approx(3.0));
    CHECK(operator_norm(fwd, BigIndex(3)).to_real() == doctest::Approx(3.0));
    CHECK_THROWS_AS(operator_norm(fwd, BigIndex(4)), DomainError);
}

TEST_CASE("orbit norm agrees with iterated application") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> wdist(0.25, 4.0);
    std::uniform_real_distribution<double> cdist(-2.0, 2.0);
    std::uniform_int_distribution<int> sdist(1, 20);
    for (int trial = 0; trial < 250; ++trial) {
        std::vector<double> w;
        for (int i = 0; i < 40; ++i) w.push_back(wdist(rng));
        for (double p : {1.0, 2.0}) {
            ShiftOperator op =
                trial % 2 == 0
                    ? ShiftOperator::unilateral_backward(
                          WeightModel::explicit_list(w), p)
                    : ShiftOperator::unilateral_forward(
                          WeightModel::explicit_list(w), p);
            std::vector<SparseVec::Entry> raw;
            for (int i = 0; i < 4; ++i) {
                double c = cdist(rng);
                if (c != 0.0)
                    raw.push_back({BigIndex(sdist(rng)), LogReal::from_real(c)});
            }
            SparseVec x = SparseVec::from_entries(std::move(raw));
            SparseVec xj = x;
            for (int j = 1; j <= 12; ++j) {
                xj = apply(op, xj);
                LogReal direct = vector_norm(op, xj);
                LogReal closed = orbit_norm(op, x, j);
                if (direct.is_zero()) {
                    CHECK(closed.is_zero());
                } else {
                    CHECK(closed.logmag ==
                          doctest::Approx(direct.logmag).epsilon(1e-9));
                }
            }
        }
    }
}

TEST_CASE("orbit norm is homogeneous and subadditive") {
    ShiftOperator blk = ShiftOperator::unilateral_backward(
        WeightModel::block_halves_twos());
    std::mt19937_64 rng(55);
    std::uniform_int_distribution<int64_t> sdist(1, 400);
    std::uniform_real_distribution<double> cdist(-3.0, 3.0);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<SparseVec::Entry> ra, rb;
        for (int i = 0; i < 3; ++i) {
            ra.push_back({BigIndex(sdist(rng)), LogReal::from_real(cdist(rng))});
            rb.push_back({BigIndex(sdist(rng)), LogReal::from_real(cdist(rng))});
        }
        SparseVec x = SparseVec::from_entries(std::move(ra));
        SparseVec y = SparseVec::from_entries(std::move(rb));
        BigIndex j(trial % 37);
        LogReal s = LogReal::from_real(trial % 2 ? -1.75 : 0.003);
        LogReal lx = orbit_norm(blk, x, j);
        LogReal lsx = orbit_norm(blk, x.scaled(s), j);
        if (!lx.is_zero())
            CHECK(lsx.logmag - lx.logmag ==
                  doctest::Approx(s.logmag).epsilon(5e-13));
        double nsum = orbit_norm(blk, x, j).to_real() +
                      orbit_norm(blk, y, j).to_real();
        double nadd = orbit_norm(blk, add(x, y), j).to_real();
        CHECK(nadd <= nsum * (1.0 + 1e-9) + 1e-12);
    }
}

TEST_CASE("bilateral shifts invert exactly") {
    AnchorProfile prof = build_tbilcami(ProfileVariant::Original, 2);
    ShiftOperator fwd = ShiftOperator::bilateral_forward(prof);
    ShiftOperator bwd = ShiftOperator::bilateral_backward(prof);
    SparseVec x = SparseVec::from_reals(
        {{BigIndex(-7), 0.5}, {BigIndex(0), -2.0}, {BigIndex(13), 3.25}});
    SparseVec back = apply(bwd, apply(fwd, x));
    REQUIRE(back.support_size() == x.support_size());
    for (size_t i = 0; i < x.entries.size(); ++i) {
        CHECK(back.entries[i].index == x.entries[i].index);
        CHECK(back.entries[i].coeff.logmag == x.entries[i].coeff.logmag);
        CHECK(back.entries[i].coeff.sign == x.entries[i].coeff.sign);
    }
}

TEST_CASE("direct sum with identity holds a reservoir fixed") {
    ShiftOperator inner =
        ShiftOperator::unilateral_backward(WeightModel::block_halves_twos());
    ShiftOperator ds = ShiftOperator::direct_sum_with_identity(inner);
    SparseVec x = SparseVec::from_reals({{BigIndex(-3), 0.7}, {BigIndex(12), 1.0}});
    CHECK(orbit_norm(ds, x, 3).to_real() == doctest::Approx(8.7).epsilon(1e-12));
    CHECK(orbit_norm(ds, x, 12).to_real() == doctest::Approx(0.7).epsilon(1e-12));
    SparseVec y = apply(ds, x);
    REQUIRE(y.support_size() == 2);
    CHECK(y.entries[0].index == -3);
    CHECK(y.entries[1].index == 11);
    CHECK(y.entries[1].coeff.to_real() == doctest::Approx(2.0));

    CHECK_THROWS_AS(orbit_norm(ds, SparseVec::basis(0), 1), DomainError);
    AnchorProfile prof = build_tbilcami(ProfileVariant::Original, 1);
    CHECK_THROWS_AS(ShiftOperator::direct_sum_with_identity(
                        ShiftOperator::bilateral_forward(prof)),
                    CapabilityError);
    CHECK_THROWS_AS(ShiftOperator::direct_sum_with_identity(ds),
                    CapabilityError);
}

TEST_CASE("identity stand-in is an isometry on orbits") {
    ShiftOperator id = ShiftOperator::identity();
    SparseVec x = SparseVec::from_reals({{BigIndex(2), -0.5}, {BigIndex(9), 2.0}});
    double nx = vector_norm(id, x).to_real();
    CHECK(nx == doctest::Approx(2.5));
    for (int j : {1, 5, 1000})
        CHECK(orbit_norm(id, x, j).to_real() == doctest::Approx(nx));
}

TEST_CASE("series decompositions stay exact where claimed") {
    // constant weights: one segment per strand
    ShiftOperator c2 = ShiftOperator::unilateral_forward(WeightModel::constant(2.0));
    OrbitNormSeries cs = orbit_norm_series(c2, SparseVec::basis(3), BigIndex(1000000));
    REQUIRE(cs.exact());
    REQUIRE(cs.strands().size() == 1);
    CHECK(cs.strands()[0].segments.size() == 1);
    CHECK(std::exp(cs.strands()[0].segments[0].log_at(BigIndex(10))) ==
          doctest::Approx(1024.0).epsilon(1e-12));

    // bilateral over the anchor profile: breakpoints at the anchors
    AnchorProfile prof = build_tbilcami(ProfileVariant::Original, 1);
    ShiftOperator bil = ShiftOperator::bilateral_forward(prof);
    OrbitNormSeries bs = orbit_norm_series(bil, SparseVec::basis(0), BigIndex(68));
    REQUIRE(bs.exact());
    const auto& segs = bs.strands()[0].segments;
    REQUIRE(segs.size() == 3);
    CHECK(segs[0].j_end == 1);
    CHECK(segs[1].j_end == 4);
    CHECK(segs[2].j_end == 68);
    CHECK(std::exp(segs[2].log_at(BigIndex(36))) ==
          doctest::Approx(1.022041406).epsilon(1e-9));
    CHECK_THROWS_AS(orbit_norm_series(bil, SparseVec::basis(0), BigIndex(69)),
                    DomainError);

    // harmonic windows are not piecewise log-linear: loop mode, death intact
    ShiftOperator har = ShiftOperator::unilateral_backward(WeightModel::harmonic());
    OrbitNormSeries hs = orbit_norm_series(har, SparseVec::basis(90), BigIndex(200));
    CHECK_FALSE(hs.exact());
    CHECK_THROWS_AS(hs.strands(), CapabilityError);
    REQUIRE(hs.first_zero().has_value());
    CHECK(*hs.first_zero() == 90);
    CHECK(hs.point(BigIndex(89)).to_real() == doctest::Approx(90.0).epsilon(1e-12));

    // multi-strand with p != 1 cannot add log-affine pieces
    ShiftOperator blk2 = ShiftOperator::unilateral_backward(
        WeightModel::block_halves_twos(), 2.0);
    SparseVec two = SparseVec::from_reals({{BigIndex(6), 1.0}, {BigIndex(12), 1.0}});
    CHECK_FALSE(orbit_norm_series(blk2, two, BigIndex(10)).exact());
    CHECK(orbit_norm_series(blk2, SparseVec::basis(12), BigIndex(10)).exact());

    // forward orbits never die
    CHECK_FALSE(orbit_norm_series(c2, SparseVec::basis(1), BigIndex(50))
                    .first_zero()
                    .has_value());
}

TEST_CASE("special block vector survives every power") {
    SparseVec x3 = special_block_vector(3);
    REQUIRE(x3.support_size() == 3);
    CHECK(x3.entries[0].index == 2);
    CHECK(x3.entries[1].index == 6);
    CHECK(x3.entries[2].index == 12);
    CHECK(x3.entries[2].coeff.to_real() == doctest::Approx(0.125));

    ShiftOperator blk =
        ShiftOperator::unilateral_backward(WeightModel::block_halves_twos());
    CHECK(vector_norm(blk, x3).to_real() == doctest::Approx(0.875));

    SparseVec xs = special_block_vector(1000);
    for (int m : {1, 2, 7, 50, 340, 999, 1000}) {
        double nm = orbit_norm(blk, xs, m).to_real();
        CHECK(nm >= 1.0 - 1e-9);
    }
}

TEST_CASE("descriptions name the moving parts") {
    CHECK(ShiftOperator::unilateral_backward(WeightModel::harmonic())
              .describe() == "backward[harmonic]");
    AnchorProfile prof = build_tbilcami(ProfileVariant::Flattened, 2);
    CHECK(ShiftOperator::bilateral_forward(prof).describe() ==
          "bilateral-forward[kmax=2,flat]");
    ShiftOperator ds = ShiftOperator::direct_sum_with_identity(
        ShiftOperator::unilateral_backward(WeightModel::block_halves_twos()));
    CHECK(ds.describe() == "backward[block-halves-twos]+identity");
}
