#include "backstep/error.hpp"
#include "backstep/io.hpp"
#include "backstep/quantitative.hpp"
#include "backstep/transform.hpp"

#include <catch_amalgamated.hpp>

#include <random>
#include <sstream>

using namespace backstep;

TEST_CASE("real and complex formatting round-trips") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 500; ++i) {
        Complex z(u(rng) * std::pow(10.0, i % 40 - 20), u(rng));
        CHECK(parse_complex(format_complex(z)) == z);
        CHECK(std::stod(format_real(z.real())) == z.real());
    }
    CHECK(format_real(NAN) == "nan");
    CHECK(format_real(-INFINITY) == "-inf");
    CHECK(format_complex(Complex(1.5, -2.0)) == "1.5-2i");
    CHECK(parse_complex("1e-05+3E+02i") == Complex(1e-5, 300.0));
    CHECK_THROWS_AS(parse_complex("1.5"), UsageError);
    CHECK_THROWS_AS(parse_complex("x+yi"), UsageError);
}

TEST_CASE("matrix CSV round-trip") {
    SpectrumModel skew = make_spectrum(Kind::SkewAdjoint, 2.0, 1.0, 32);
    BacksteppingSynthesis syn = assemble(skew, 3.5, 12);
    std::stringstream ss;
    write_matrix_csv(ss, syn.T);
    CMatrix back = read_matrix_csv(ss);
    CHECK((back.array() == syn.T.array()).all());

    std::stringstream ragged("1+0i,2+0i\n3+0i\n");
    CHECK_THROWS_AS(read_matrix_csv(ragged), UsageError);
}

TEST_CASE("model JSON round-trip") {
    for (Kind kind : {Kind::SelfAdjoint, Kind::SkewAdjoint}) {
        SpectrumModel m = make_spectrum(kind, 2.5, 0.75, 20, [](int n) { return 1.0 + 0.5 / n; });
        json j = json::parse(dump(model_to_json(m)));
        SpectrumModel back = model_from_json(j);
        CHECK(back.kind() == m.kind());
        CHECK(back.alpha() == m.alpha());
        CHECK(back.eigenvalues() == m.eigenvalues());
        CHECK(back.b_values() == m.b_values());
        CHECK(back.is_power_law());
        CHECK(back.gap_c() == Catch::Approx(m.gap_c()).epsilon(1e-12));
    }
    CHECK_THROWS_AS(model_from_json(json::parse(R"({"kind": "self_adjoint"})")), UsageError);
    CHECK_THROWS_AS(model_from_json(json::parse("[1, 2]")), UsageError);
}

TEST_CASE("synthesis and sweep documents") {
    SpectrumModel heat = make_spectrum(Kind::SelfAdjoint, 2.0, 1.0, 64);
    json j = synthesis_to_json(assemble(heat, 0.5, 2));
    CHECK(j["N"] == 2);
    CHECK(j["k"][0].get<double>() == Catch::Approx(-7.0 / 12.0).epsilon(1e-14));
    CHECK(j["dist"].get<double>() == 0.5);

    CostSweep sweep = cost_sweep_lambdas(heat, {2.5, 3.0, 4.5}, 30);
    std::ostringstream os;
    write_sweep_csv(os, heat, sweep);
    std::string text = os.str();
    CHECK(text.rfind("N,lambda,dist,norm_T,norm_Tinv,k_sup,k_inf,F_inf,fit_exponent\n", 0) == 0);
    CHECK(text.find("# flagged N=3 lambda=3") != std::string::npos);
    CHECK(text.find("\n3,3,0,nan,") != std::string::npos);
}

TEST_CASE("state documents") {
    StateVector y = state_from_json(json::parse("[1, [0, 2], -0.5]"));
    REQUIRE(y.coeffs.size() == 3);
    CHECK(y.coeffs[1] == Complex(0.0, 2.0));
    CHECK_THROWS_AS(state_from_json(json::parse(R"({"a": 1})")), UsageError);
    CHECK_THROWS_AS(state_from_json(json::parse(R"([[1, 2, 3]])")), UsageError);
}
