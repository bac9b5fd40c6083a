#include "backstep/error.hpp"
#include "backstep/linalg.hpp"
#include "backstep/spectrum.hpp"
#include "backstep/transform.hpp"

#include <catch_amalgamated.hpp>

using namespace backstep;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SpectrumModel heat(int n_max = 128) { return make_spectrum(Kind::SelfAdjoint, 2.0, 1.0, n_max); }

}  // namespace

TEST_CASE("two-mode synthesis: gains, transform and chi") {
    BacksteppingSynthesis syn = assemble(heat(), 0.5, 2);
    CHECK_THAT(syn.k[0].real(), WithinRel(-7.0 / 12.0, 1e-14));
    CHECK_THAT(syn.k[1].real(), WithinRel(-5.0 / 12.0, 1e-14));

    // T(p, n) = k_n b_p / (lambda_p - lambda_n - lambda)
    CHECK_THAT(syn.T(0, 0).real(), WithinRel(7.0 / 6.0, 1e-14));
    CHECK_THAT(syn.T(1, 0).real(), WithinRel(1.0 / 6.0, 1e-14));
    CHECK_THAT(syn.T(0, 1).real(), WithinRel(-1.0 / 6.0, 1e-14));
    CHECK_THAT(syn.T(1, 1).real(), WithinRel(5.0 / 6.0, 1e-14));
    CHECK(max_abs(syn.T * syn.Tinv - CMatrix::Identity(2, 2)) <= 1e-14);

    ChiFunction c = chi(heat(), 0.5, 1, 2);
    CHECK_THAT(c.coeffs[0].real(), WithinRel(2.0, 1e-15));
    CHECK_THAT(c.coeffs[1].real(), WithinRel(-0.4, 1e-15));
    CHECK(syn.tb_residual_max() <= 1e-15);
}

// k_n b_n = -lambda F_n with F_n frozen from 40-digit products (five heat modes, lambda = 2.5).
TEST_CASE("gain routes against frozen products") {
    const double kb[] = {-7.7492947048611111, -0.84511408730158730, -1.3485281808035714, -1.3547867063492063,
                         -1.2022763206845238};
    SynthesisOptions opt;
    opt.check_floor = false;
    GainResult prod = feedback_gains_product(heat(), 2.5, 5, opt);
    GainResult rows = feedback_gains_rowsum(heat(), 2.5, 5, opt);
    for (int n = 0; n < 5; ++n) {
        CHECK_THAT(prod.kb[n].real(), WithinRel(kb[n], 1e-14));
        CHECK_THAT(rows.kb[n].real(), WithinRel(kb[n], 1e-13));
        CHECK(std::abs(prod.kb[n] - rows.kb[n]) <= prod.bar(n) + rows.bar(n));
    }
}

TEST_CASE("skew-adjoint gains have modulus at least lambda") {
    SpectrumModel skew = make_spectrum(Kind::SkewAdjoint, 2.0, 1.0, 128);
    for (double lambda : {0.5, 3.5, 17.5}) {
        GainResult g = feedback_gains_product(skew, lambda, 100);
        for (const Complex& kb : g.kb) CHECK(std::abs(kb) >= lambda);
    }
}

TEST_CASE("synthesis invariants") {
    for (Kind kind : {Kind::SelfAdjoint, Kind::SkewAdjoint}) {
        SpectrumModel model = make_spectrum(kind, 2.0, 1.0, 128);
        for (int target : {1, 3, 6}) {
            double lambda = select_mu(model, target).mu;
            BacksteppingSynthesis syn = assemble(model, lambda, 48);
            CHECK(syn.tb_residual_max() <= 1e-10);
            CHECK(max_abs(syn.T * syn.Tinv - CMatrix::Identity(48, 48)) <= 1e-8 * *syn.norm_T * *syn.norm_Tinv);
            CHECK(operator_identity_residual(syn).relative <= 1e-12);
            for (int n : {1, 7, 48}) {
                ClosedLoopCheck c = verify_closed_loop_eigen(syn, n);
                CHECK(std::abs(c.k_on_chi + 1.0) <= 1e-10);
                CHECK(c.collinearity_defect <= 1e-10);
                CHECK(c.eigen_defect <= 1e-10);
            }
            // The closed loop is similar to A - lambda I.
            Eigen::ComplexEigenSolver<CMatrix> es(closed_loop_matrix(syn));
            for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
                Complex ev = es.eigenvalues()(i);
                double best = INFINITY;
                for (const Complex& l : syn.eigen) best = std::min(best, std::abs(ev - (l - lambda)));
                CHECK(best <= 1e-6 * (1.0 + std::abs(ev)));
            }
        }
    }
}

TEST_CASE("synthesis guards") {
    CHECK_THROWS_AS(assemble(heat(), 3.0, 4), ResonanceError);
    CHECK_THROWS_AS(assemble(heat(), 0.5, 0), UsageError);

    // With a zero floor rate the floor is lambda dist / 2, above the smallest gains at lambda = 8.5.
    SynthesisOptions strict;
    strict.floor_rate = 0.0;
    CHECK_THROWS_AS(assemble(heat(), 8.5, 40, strict), GainFloorError);
}

TEST_CASE("rowsum route from an assembled synthesis") {
    BacksteppingSynthesis syn = assemble(heat(), 4.5, 30);
    GainResult g = rowsum_gains(syn);
    for (int n = 0; n < 30; ++n) CHECK(std::abs(g.kb[n] - syn.kb[n]) <= g.bar(n) + syn.gains.bar(n));
}
