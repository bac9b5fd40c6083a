#include "backstep/error.hpp"
#include "backstep/spectrum.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace backstep;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("power-law eigenvalues and analytic gap constants") {
    SpectrumModel heat = make_spectrum(Kind::SelfAdjoint, 2.0, 1.5, 32);
    CHECK(heat.eigenvalue(3) == Complex(-13.5, 0.0));
    CHECK_THAT(heat.magnitude(4), WithinRel(24.0, 1e-15));
    CHECK(heat.eigenvalue(100) == Complex(-15000.0, 0.0));  // power laws extend past n_max
    CHECK(heat.gap_c() == 1.5);
    CHECK_THAT(heat.gap_C(), WithinRel(4.5, 1e-15));
    CHECK(heat.b(7) == 1.0);

    SpectrumModel schr = make_spectrum(Kind::SkewAdjoint, 3.0, 1.0, 8);
    CHECK(schr.eigenvalue(2) == Complex(0.0, -8.0));
}

TEST_CASE("invalid models are rejected") {
    CHECK_THROWS_AS(make_spectrum(Kind::SelfAdjoint, 1.0, 1.0, 16), UsageError);
    CHECK_THROWS_AS(make_spectrum(Kind::SelfAdjoint, 0.5, 1.0, 16), UsageError);
    CHECK_THROWS_AS(make_spectrum(Kind::SelfAdjoint, 2.0, 1.0, 1), UsageError);
    CHECK_THROWS_AS(make_spectrum(Kind::SelfAdjoint, 2.0, 1.0, 8, [](int n) { return n == 3 ? 0.0 : 1.0; }),
                    UsageError);
    CHECK_THROWS_AS(kind_from_string("parabolic"), UsageError);
    CHECK(kind_from_string("heat") == Kind::SelfAdjoint);
    CHECK(kind_from_string("schrodinger") == Kind::SkewAdjoint);
}

TEST_CASE("tabulated power law recovers the analytic constants") {
    std::vector<Complex> ev;
    std::vector<double> b;
    for (int n = 1; n <= 40; ++n) {
        ev.emplace_back(-2.0 * n * n, 0.0);
        b.push_back(1.0 + 1.0 / n);
    }
    SpectrumModel t = SpectrumModel::tabulated(Kind::SelfAdjoint, 2.0, ev, b);
    CHECK(t.is_power_law());
    CHECK_THAT(t.gap_c(), WithinRel(2.0, 1e-12));
    CHECK_THAT(t.b_lo(), WithinRel(1.025, 1e-15));
    CHECK_THAT(t.b_hi(), WithinRel(2.0, 1e-15));
    CHECK(t.eigenvalue(41) == Complex(-2.0 * 41 * 41, 0.0));

    ev[3] = Complex(-33.0, 0.0);
    SpectrumModel irregular = SpectrumModel::tabulated(Kind::SelfAdjoint, 2.0, ev, b);
    CHECK_FALSE(irregular.is_power_law());
    CHECK_THROWS_AS(irregular.eigenvalue(41), EnumerationOverflow);
}

TEST_CASE("gap verification on power laws") {
    for (double alpha : {1.5, 2.0, 3.0}) {
        GapReport r = verify_gaps(make_spectrum(Kind::SelfAdjoint, alpha, 1.0, 200), 200);
        CHECK(r.ordered);
        CHECK(r.pass);
        CHECK(r.step_lower.constant > 0.0);
        CHECK(r.step_upper.constant >= r.step_lower.constant);
    }
    std::vector<Complex> ev{{-1, 0}, {-4, 0}, {-3, 0}, {-16, 0}};
    SpectrumModel bad = SpectrumModel::tabulated(Kind::SelfAdjoint, 2.0, ev, {1, 1, 1, 1});
    GapReport r = verify_gaps(bad, 4);
    CHECK_FALSE(r.ordered);
    CHECK_FALSE(r.pass);
}

// Distances below are frozen from a brute-force high-precision scan of
// |j^alpha - i^alpha - lambda| over i, j < 200.
TEST_CASE("distance to resonance: frozen values") {
    SpectrumModel heat = make_spectrum(Kind::SelfAdjoint, 2.0, 1.0, 64);
    DistCertificate d = dist_alpha(heat, 0.5);
    CHECK(d.dist == 0.5);

    d = dist_alpha(heat, 3.0);
    CHECK(d.dist == 0.0);
    REQUIRE(d.witness);
    CHECK(*d.witness == std::make_pair(1, 2));

    d = dist_alpha(heat, 4.7);
    CHECK_THAT(d.dist, WithinAbs(0.3, 1e-12));
    CHECK(*d.witness == std::make_pair(2, 3));

    d = dist_alpha(heat, 8.5);
    CHECK(d.dist == 0.5);

    d = dist_alpha(heat, 27.483333333333334);
    CHECK_THAT(d.dist, WithinAbs(0.48333333333333428, 1e-12));
    CHECK(*d.witness == std::make_pair(3, 6));

    SpectrumModel a15 = make_spectrum(Kind::SelfAdjoint, 1.5, 1.0, 64);
    d = dist_alpha(a15, 5.125);
    CHECK_THAT(d.dist, WithinAbs(0.038653312256343296, 1e-12));
    CHECK(*d.witness == std::make_pair(11, 12));

    SpectrumModel skew = make_spectrum(Kind::SkewAdjoint, 2.0, 1.0, 64);
    CHECK(dist_alpha(skew, 3.0).dist == 3.0);
}

TEST_CASE("distance to resonance is 1-Lipschitz in lambda") {
    SpectrumModel heat = make_spectrum(Kind::SelfAdjoint, 2.0, 1.0, 64);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.01, 60.0);
    for (int i = 0; i < 200; ++i) {
        double a = u(rng), b = u(rng);
        CHECK(std::abs(dist_alpha(heat, a).dist - dist_alpha(heat, b).dist) <= std::abs(a - b) + 1e-12);
    }
}

TEST_CASE("candidate grids") {
    SpectrumModel heat = make_spectrum(Kind::SelfAdjoint, 2.0, 1.0, 64);
    MuCandidates c1 = mu_candidates(heat, 1);
    CHECK(c1.M == 4);
    REQUIRE(c1.grid.size() == 4);
    CHECK_THAT(c1.grid[0], WithinAbs(1.125, 1e-15));
    CHECK_THAT(c1.grid[3], WithinAbs(1.875, 1e-15));
    CHECK_THAT(c1.floor, WithinAbs(0.125, 1e-15));

    MuCandidates c8 = mu_candidates(heat, 8);
    CHECK(c8.M == 11);
    REQUIRE(c8.grid.size() == 11);
    CHECK_THAT(c8.grid[0], WithinAbs(8.0 + 1.0 / 22.0, 1e-14));
    CHECK_THAT(c8.grid[10], WithinAbs(8.0 + 21.0 / 22.0, 1e-14));

    for (int N = 1; N <= 40; ++N) {
        MuSelection s = select_mu(heat, N);
        MuCandidates c = mu_candidates(heat, N);
        CHECK(s.mu > N);
        CHECK(s.mu < N + 1);
        CHECK(s.cert.dist >= c.floor);
        for (double mu : c.grid) CHECK(dist_alpha(heat, mu).dist <= s.cert.dist);
    }

    SpectrumModel skew = make_spectrum(Kind::SkewAdjoint, 2.0, 1.0, 64);
    CHECK(select_mu(skew, 7).mu == 7.5);
}
