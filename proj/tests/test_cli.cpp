#include <catch_amalgamated.hpp>

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iterator>
#include <string>
#include <sys/wait.h>

namespace {

const std::string kDir = BACKSTEP_SCRATCH_DIR;

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string out = kDir + "/cli_test.out";
    std::string line = std::string("\"") + BACKSTEP_CLI_PATH + "\" " + args + " > \"" + out + "\" 2> \"" + kDir +
                       "/cli_test.err\"";
    int raw = std::system(line.c_str());
    Run r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(out, std::ios::binary);
    r.out.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    return r;
}

std::string write_file(const std::string& name, const std::string& text) {
    std::string path = kDir + "/" + name;
    std::ofstream(path) << text;
    return path;
}

}  // namespace

TEST_CASE("synth prints the gains") {
    Run r = run("synth --lambda 0.5 --N 2");
    REQUIRE(r.status == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["k"][0].get<double>() == Catch::Approx(-7.0 / 12.0).epsilon(1e-14));
    CHECK(j["k"][1].get<double>() == Catch::Approx(-5.0 / 12.0).epsilon(1e-14));
}

TEST_CASE("exit codes") {
    CHECK(run("synth --lambda 3 --N 4").status == 3);             // resonant
    CHECK(run("synth --lambda 1").status == 2);                   // missing --N
    CHECK(run("synth --lambda 1 --N 3 --alpha 0.9").status == 2); // invalid model
    CHECK(run("frobnicate").status == 2);
    CHECK(run("cost-sweep --n-from 5 --n-to 2").status == 2);
    CHECK(run("spectrum-check --n-check 40").status == 0);
    CHECK(run("simulate --lambda 2.5 --N 4 --y0-preset nothing").status == 2);
    CHECK(run("--help").status == 0);
}

TEST_CASE("config files with command-line precedence") {
    std::string cfg = write_file("cli_cfg.json", R"({"alpha": 2, "synth": {"lambda": 0.5, "N": 2}})");
    Run a = run("synth --config \"" + cfg + "\"");
    REQUIRE(a.status == 0);
    CHECK(nlohmann::json::parse(a.out)["N"] == 2);

    Run b = run("synth --config \"" + cfg + "\" --N 3");
    REQUIRE(b.status == 0);
    CHECK(nlohmann::json::parse(b.out)["N"] == 3);

    std::string unknown = write_file("cli_bad.json", R"({"synth": {"lambda": 0.5, "N": 2, "colour": "red"}})");
    CHECK(run("synth --config \"" + unknown + "\"").status == 2);
    CHECK(run("synth --config \"" + kDir + "/missing.json\"").status == 2);
    std::string broken = write_file("cli_broken.json", "{ not json");
    CHECK(run("synth --config \"" + broken + "\"").status == 2);
}

TEST_CASE("model files") {
    std::string model = write_file("cli_model.json", R"({"kind": "self_adjoint", "alpha": 2, "n_max": 3,
        "b": [1, 1, 1], "eigenvalues": [-1, -4, -9]})");
    Run r = run("synth --model \"" + model + "\" --lambda 0.5 --N 2");
    REQUIRE(r.status == 0);
    CHECK(nlohmann::json::parse(r.out)["k"][0].get<double>() == Catch::Approx(-7.0 / 12.0).epsilon(1e-14));
    CHECK(run("synth --model \"" + model + "\" --lambda 0.5 --N 5").status == 2);
}

TEST_CASE("cauchy-verify and simulate produce CSV") {
    Run c = run("cauchy-verify --n-grid 2 4 8");
    REQUIRE(c.status == 0);
    CHECK(c.out.rfind("N,lambda,dist,residual_max,oracle_rel_max\n", 0) == 0);
    CHECK(c.out.find("# max residual_max=") != std::string::npos);

    Run s = run("simulate --lambda 2.5 --N 8 --t-steps 10");
    REQUIRE(s.status == 0);
    CHECK(s.out.rfind("t,norm_H,norm_s,u\n", 0) == 0);
    CHECK(s.out.find("rate_hat=") != std::string::npos);
}
