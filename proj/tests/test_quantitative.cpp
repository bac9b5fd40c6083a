#include "backstep/error.hpp"
#include "backstep/quantitative.hpp"
#include "backstep/spectrum.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace backstep;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("F values against frozen products") {
    SpectrumModel heat = make_spectrum(Kind::SelfAdjoint, 2.0, 1.0, 64);
    CHECK_THAT(eval_F(heat, 1, 0.5, 2).value.value().real(), WithinRel(7.0 / 6.0, 1e-15));
    CHECK_THAT(eval_F(heat, 2, 0.5, 2).value.value().real(), WithinRel(5.0 / 6.0, 1e-15));
    CHECK_THAT(eval_F(heat, 1, 2.5, 5).value.value().real(), WithinRel(3.0997178819444444, 1e-14));
    CHECK_THAT(eval_F(heat, 4, 2.5, 5).value.value().real(), WithinRel(0.54191468253968254, 1e-14));
}

TEST_CASE("truncated F stays within its tail bar of a much longer product") {
    SpectrumModel heat = make_spectrum(Kind::SelfAdjoint, 2.0, 1.0, 4096);
    const double lambda = 2.5;
    for (int n : {1, 5, 20}) {
        FValue short_f = eval_F(heat, n, lambda, 40);
        FValue long_f = eval_F(heat, n, lambda, 4000);
        REQUIRE(short_f.tail_bar);
        CHECK(std::abs(short_f.value.log_magnitude() - long_f.value.log_magnitude()) <= *short_f.tail_bar);
        CHECK(short_f.value.sign() == long_f.value.sign());
    }
}

TEST_CASE("J equals one") {
    for (Kind kind : {Kind::SelfAdjoint, Kind::SkewAdjoint}) {
        SpectrumModel model = make_spectrum(kind, 2.0, 1.0, 64);
        CHECK(std::abs(eval_J(model, 3, 7.3, 20) - 1.0) <= 1e-12);
        for (int N : {1, 2, 9, 33})
            for (int n = 1; n <= N; ++n) CHECK(std::abs(eval_J(model, n, 4.4371, N) - 1.0) <= 1e-10);
    }
    SpectrumModel a3 = make_spectrum(Kind::SelfAdjoint, 3.0, 1.0, 64);
    CHECK(std::abs(eval_J(a3, 2, 11.25, 30) - 1.0) <= 1e-10);
}

TEST_CASE("product bound follows exp(c lambda^(1/alpha))") {
    SpectrumModel heat = make_spectrum(Kind::SelfAdjoint, 2.0, 1.0, 256);
    std::vector<double> grid;
    for (int N = 1; N <= 16; ++N) grid.push_back(select_mu(heat, N).mu);
    ProductBoundReport r = bound_check_products(heat, grid, 200);
    REQUIRE(r.fit);
    CHECK(r.pass);
    CHECK(r.fit->slope > 0.0);
    CHECK(r.fit->r2 >= 0.95);
}

TEST_CASE("row and column sums stay near the reference") {
    SpectrumModel heat = make_spectrum(Kind::SelfAdjoint, 2.0, 1.0, 256);
    for (int N : {2, 5, 10, 20}) {
        MuSelection sel = select_mu(heat, N);
        SumBoundReport r = bound_check_sums(heat, sel.mu, 200);
        CHECK(r.dist == sel.cert.dist);
        CHECK(r.pass);
        CHECK(r.ratio > 0.0);
    }
}

TEST_CASE("lower bound on F along the selected sequence") {
    SpectrumModel heat = make_spectrum(Kind::SelfAdjoint, 2.0, 1.0, 256);
    std::vector<double> mus;
    for (int N = 1; N <= 12; ++N) mus.push_back(select_mu(heat, N).mu);
    FLowerBoundReport r = lower_bound_check_F(heat, mus, 200);
    CHECK(r.pass);
    CHECK(r.rate >= 0.0);
    CHECK_FALSE(r.modulus_at_least_one);

    SpectrumModel skew = make_spectrum(Kind::SkewAdjoint, 2.0, 1.0, 256);
    FLowerBoundReport s = lower_bound_check_F(skew, {1.5, 4.5, 9.5}, 150);
    CHECK(s.modulus_at_least_one);
}

TEST_CASE("cost sweep rows") {
    SpectrumModel heat = make_spectrum(Kind::SelfAdjoint, 2.0, 1.0, 96);
    CostSweep sweep = cost_sweep(heat, {1, 2, 3, 4, 5, 6}, 96);
    REQUIRE(sweep.rows.size() == 6);
    REQUIRE(sweep.fit);
    for (const CostReport& r : sweep.rows) {
        CHECK_FALSE(r.flagged);
        CHECK(r.lambda > r.N);
        CHECK(r.norm_T >= 1.0 - 1e-12);
        CHECK(r.k_inf <= r.k_sup);
        CHECK(r.tb_residual_max <= 1e-10);
        REQUIRE(r.weighted.size() == 2);
    }
    // Increasing cost along the sequence.
    CHECK(sweep.rows.back().norm_T * sweep.rows.back().norm_Tinv >
          sweep.rows.front().norm_T * sweep.rows.front().norm_Tinv);

    CostSweep flagged = cost_sweep_lambdas(heat, {2.5, 3.0}, 40);
    CHECK_FALSE(flagged.rows[0].flagged);
    CHECK(flagged.rows[1].flagged);
}
