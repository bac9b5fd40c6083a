#include "backstep/cauchy.hpp"
#include "backstep/error.hpp"
#include "backstep/linalg.hpp"
#include "backstep/log_product.hpp"
#include "backstep/spectrum.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace backstep;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SpectrumModel heat(int n_max = 64) { return make_spectrum(Kind::SelfAdjoint, 2.0, 1.0, n_max); }

}  // namespace

TEST_CASE("two-mode Cauchy matrix and its inverse") {
    CauchySystem sys = make_cauchy_system(heat(), 0.5, 2);
    CMatrix c = build_cauchy(sys);
    CHECK_THAT(c(0, 0).real(), WithinAbs(-2.0, 1e-15));
    CHECK_THAT(c(0, 1).real(), WithinAbs(0.4, 1e-15));
    CHECK_THAT(c(1, 0).real(), WithinAbs(-0.2857142857142857, 1e-15));
    CHECK_THAT(c(1, 1).real(), WithinAbs(-2.0, 1e-15));

    CMatrix inv = explicit_inverse(sys);
    CHECK_THAT(inv(0, 0).real(), WithinRel(-0.48611111111111111, 1e-14));
    CHECK_THAT(inv(0, 1).real(), WithinRel(-0.097222222222222222, 1e-14));
    CHECK_THAT(inv(1, 0).real(), WithinRel(0.069444444444444444, 1e-14));
    CHECK_THAT(inv(1, 1).real(), WithinRel(-0.48611111111111111, 1e-14));
}

// Frozen from a 40-digit inverse of the five-mode heat Cauchy matrix at lambda = 2.5.
TEST_CASE("five-mode inverse against frozen high-precision rows") {
    CauchySystem sys = make_cauchy_system(heat(), 2.5, 5);
    CMatrix inv = explicit_inverse(sys);
    const double first[] = {-0.66287188863558043, -2.2518825138547293, -1.9702970981597900, -1.5296571310328522,
                            -1.3345860731781592};
    const double last[] = {0.011958405244077114, 0.10386729126284122, 0.23775483880724226, 0.63894121595020507,
                           -2.1947980719488895};
    for (int j = 0; j < 5; ++j) {
        CHECK_THAT(inv(0, j).real(), WithinRel(first[j], 1e-13));
        CHECK_THAT(inv(4, j).real(), WithinRel(last[j], 1e-13));
        CHECK(inv(0, j).imag() == 0.0);
    }
}

TEST_CASE("explicit inverse agrees with elimination") {
    for (double alpha : {1.5, 2.0, 3.0}) {
        SpectrumModel model = make_spectrum(Kind::SelfAdjoint, alpha, 1.0, 64);
        for (int N : {1, 3, 10, 24}) {
            MuSelection sel = select_mu(model, 3);
            CauchySystem sys = make_cauchy_system(model, sel.mu, N, sel.cert.dist);
            CMatrix c = build_cauchy(sys);
            CMatrix inv = explicit_inverse(sys);
            CMatrix ref = oracle_inverse(c);
            CHECK(max_abs(inv - ref) <= 1e-9 * max_abs(ref));
            CHECK(max_abs(inv * c - CMatrix::Identity(N, N)) <= 1e-10);
        }
    }
    SpectrumModel skew = make_spectrum(Kind::SkewAdjoint, 2.0, 1.0, 64);
    CauchySystem sys = make_cauchy_system(skew, 6.5, 20);
    CMatrix c = build_cauchy(sys);
    CHECK(max_abs(explicit_inverse(sys) * c - CMatrix::Identity(20, 20)) <= 1e-12);
}

TEST_CASE("resonant systems are refused with a witness") {
    CauchySystem sys = make_cauchy_system(heat(), 3.0, 4);
    try {
        check_resonance(sys);
        FAIL("expected a resonance");
    } catch (const ResonanceError& e) {
        CHECK(e.i() == 1);
        CHECK(e.j() == 2);
    }
    CHECK_THROWS_AS(lagrange_products(sys), ResonanceError);
    CHECK_THROWS_AS(oracle_inverse(CMatrix::Zero(3, 3)), SingularMatrixError);
}

TEST_CASE("log-signed products match naive products") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        LogSignedProduct p;
        Complex naive = 1.0;
        const bool complex_factors = trial % 2 == 1;
        for (int k = 0; k < 30; ++k) {
            Complex f(u(rng), complex_factors ? u(rng) : 0.0);
            if (k % 3 == 0)
                p.multiply_one_plus(ExtComplex(f) - 1.0L);
            else
                p.multiply(ExtComplex(f));
            naive *= f;
        }
        CHECK(std::abs(p.value() - naive) <= 1e-12 * std::abs(naive));
        if (!complex_factors) CHECK(p.sign().imag() == 0.0);
    }
    LogSignedProduct z;
    z.multiply(0.0L);
    CHECK(z.is_zero());
    CHECK(z.value() == Complex(0.0));

    // Far beyond the double range, the logarithm stays exact.
    LogSignedProduct big;
    for (int k = 0; k < 400; ++k) big.multiply(1e10L);
    CHECK_THAT(big.log_magnitude(), WithinRel(4000.0 * std::log(10.0), 1e-12));
}

TEST_CASE("tail bound is positive and shrinks with truncation") {
    SpectrumModel model = heat(2048);
    const double lambda = 2.5;
    REQUIRE(tail_threshold_met(model, lambda, 40));
    CHECK_FALSE(tail_threshold_met(model, lambda, 3));
    double prev = INFINITY;
    for (int N : {40, 80, 160, 320}) {
        double b = tail_log_bound(model, 1, lambda, N);
        CHECK(b > 0.0);
        CHECK(b < prev);
        prev = b;
    }
}
