#include "cli.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using sheetlab::cli::main_entry;

namespace {

struct Outcome {
    int status;
    std::string out, err;
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "sheetlab_cli");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int status = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {status, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("sheetlab_cli_test_" + name);
}

}  // namespace

TEST_CASE("documented invocations") {
    auto r = run({"solve", "--kind", "btbs", "--f", "quadratic", "--n", "1", "--d", "1", "--t", "1", "--x", "0"});
    CHECK(r.status == 0);
    CHECK(r.out == "0.7978845608\n");

    r = run({"moments", "--beta", "1/2", "--k", "1", "--route", "closed-form"});
    CHECK(r.status == 0);
    CHECK(r.out == "1.1283791671\n");

    r = run({"residual", "--system", "half-fractional", "--kind", "btbs", "--f", "quadratic", "--n", "1"});
    CHECK(r.status == 0);
    const auto pos = r.out.find("inf_norm=");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(r.out.substr(pos + 9)) < 5e-3);
    CHECK(r.out.find("boundary=ok") != std::string::npos);
}

TEST_CASE("configuration errors exit with status 2") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"solve", "--kind", "isltbs"},
             {"solve", "--kind", "sideways"},
             {"moments", "--route", "closed-form"},
             {"solve", "--n", "2", "--t", "1"},
             {"solve", "--j", "3"},
             {"frobnicate"},
             {},
             {"residual", "--system", "fourth-order", "--kind", "isltbs", "--beta", "1/3"},
             {"solve", "--f", "quadratic", "--bounded-only"},
             {"solve", "--t", "0:1:x"},
         }) {
        const auto r = run(args);
        INFO(r.err);
        CHECK(r.status == 2);
        CHECK(r.err.rfind("error status=2 kind=config message=", 0) == 0);
    }
}

TEST_CASE("numerical failures exit with status 3 and name the operation") {
    const auto r = run({"solve", "--f", "bump", "--t", "3", "--tol", "1e-10"});
    CHECK(r.status == 3);
    CHECK(r.err.rfind("error status=3 kind=numerical operation=eval_functional", 0) == 0);
}

TEST_CASE("config files are overridden by flags") {
    const auto cfg = scratch("cfg.ini");
    {
        std::ofstream os(cfg);
        os << "command=solve\nkind=isltbs\nbeta=1/3\nf=quadratic\nt=1\nx=2\n";
    }
    auto r = run({"--config", cfg.string()});
    CHECK(r.status == 0);
    // x^2 + E(1/3,1) t^{1/3} at x = 2, t = 1.
    CHECK(std::stod(r.out) == doctest::Approx(4.0 + 3.0 / std::tgamma(1.0 / 3.0)).epsilon(1e-9));
    r = run({"--config", cfg.string(), "--x", "0"});
    CHECK(std::stod(r.out) == doctest::Approx(3.0 / std::tgamma(1.0 / 3.0)).epsilon(1e-9));
    std::filesystem::remove(cfg);
}

TEST_CASE("artifacts carry the config hash and are reproducible") {
    const auto a = scratch("a.csv"), b = scratch("b.csv"), c = scratch("c.csv");
    const std::vector<std::string> base{"mc-compare", "--kind", "isltbs", "--beta", "1/3", "--f", "gaussian",
                                        "--t", "0.5:1.5:3", "--x", "0", "--samples", "20000"};
    auto with_out = [&](const std::filesystem::path& p, std::vector<std::string> extra = {}) {
        auto args = base;
        args.insert(args.end(), extra.begin(), extra.end());
        args.push_back("-o");
        args.push_back(p.string());
        return run(args);
    };
    CHECK(with_out(a, {"--seed", "7"}).status == 0);
    CHECK(with_out(b, {"--seed", "7"}).status == 0);
    CHECK(with_out(c, {"--seed", "8"}).status == 0);
    const auto sa = slurp(a), sb = slurp(b), sc = slurp(c);
    CHECK(sa == sb);
    CHECK(sa.rfind("# sheetlab ", 0) == 0);
    CHECK(sa.find(" config-hash=") != std::string::npos);
    CHECK(sa.substr(0, sa.find('\n')) != sc.substr(0, sc.find('\n')));
    CHECK(sa.find("t1,x1,quadrature,monte_carlo,standard_error\n") != std::string::npos);
    for (const auto& p : {a, b, c}) std::filesystem::remove(p);
}

TEST_CASE("each command produces its summary") {
    auto r = run({"density", "--kernel", "bm", "--t", "1", "--x", "0"});
    CHECK(r.status == 0);
    CHECK(std::stod(r.out) == doctest::Approx(0.3989422804).epsilon(1e-9));

    r = run({"density", "--kernel", "inv-subordinator", "--beta", "1/2", "--t", "1", "--x", "0.5:2:4"});
    CHECK(r.status == 0);
    CHECK(r.out.rfind("points=4 ", 0) == 0);

    const auto field = scratch("field.csv");
    r = run({"solve", "--kind", "btbs", "--n", "2", "--d", "1", "--functional", "script-v", "--t", "1,0.5:1:2",
             "--x", "-1:1:3", "-o", field.string()});
    CHECK(r.status == 0);
    CHECK(r.out.rfind("points=6 ", 0) == 0);
    const auto csv = slurp(field);
    CHECK(csv.find("\nt1,t2,x1,value\n") != std::string::npos);
    std::filesystem::remove(field);

    r = run({"equivalence", "--kind", "btbs", "--f", "gaussian", "--t-lo", "0.5", "--t-hi", "1", "--tau", "0.0078125",
             "--h", "0.125", "--levels", "2"});
    CHECK(r.status == 0);
    CHECK(r.out.rfind("levels=2 ", 0) == 0);
}
