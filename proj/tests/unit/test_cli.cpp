#include "doctest.h"

#include "opuc_cli/cli.hpp"

#include "opuc/errors.hpp"
#include "opuc/equilibrium.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using opuc::cplx;
using nlohmann::json;
namespace cli = opuc::cli;

namespace {

struct Outcome {
    int code = -1;
    std::string out, err;
    json doc() const { return json::parse(out); }
};

Outcome run(std::vector<std::string> args)
{
    args.insert(args.begin(), "opuc");
    std::vector<const char*> argv;
    for (const std::string& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    Outcome o;
    o.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

std::string spike_critical(int p)
{
    const cplx a = opuc::critical_circle_alpha(0.25);
    json arr = json::array();
    for (int i = 0; i + 1 < p; ++i)
        arr.push_back({0.0, 0.0});
    arr.push_back({a.real(), a.imag()});
    return arr.dump();
}

const std::string kFree = "[[0,0],[0,0]]";

} // namespace

TEST_SUITE("cli")
{

TEST_CASE("alphas parsing")
{
    const std::vector<cplx> a = cli::parse_alphas_json("[[0.5, -0.25], 0.125, [0, 0]]");
    REQUIRE(a.size() == 3);
    CHECK(a[0] == cplx(0.5, -0.25));
    CHECK(a[1] == cplx(0.125, 0.0));
    CHECK(cli::parse_alphas_json(R"({"alphas": [[0.1, 0.2]]})")[0] == cplx(0.1, 0.2));

    CHECK_THROWS_AS(cli::parse_alphas_json("[[0,0],"), opuc::ArgumentError);
    CHECK_THROWS_AS(cli::parse_alphas_json("[]"), opuc::ArgumentError);
    CHECK_THROWS_AS(cli::parse_alphas_json("[[1, 2, 3]]"), opuc::ArgumentError);
    CHECK_THROWS_AS(cli::parse_alphas_json(R"([["a", 0]])"), opuc::ArgumentError);
    CHECK_THROWS_AS(cli::parse_alphas_json(R"({"beta": []})"), opuc::ArgumentError);
    try {
        cli::load_alphas("[[0,0],[0.3,0],[0.9,0.9]]");
        FAIL("expected a rejection");
    } catch (const opuc::ArgumentError& e) {
        CHECK(std::string(e.what()).find('2') != std::string::npos);
    }
}

TEST_CASE("alphas round trip is lossless")
{
    std::mt19937_64 rng(90);
    std::uniform_real_distribution<double> u(-0.7, 0.7);
    for (int i = 0; i < 50; ++i) {
        json arr = json::array();
        std::vector<cplx> want;
        for (int j = 0; j < 1 + i % 6; ++j) {
            const cplx a(u(rng), u(rng));
            want.push_back(a);
            arr.push_back({a.real(), a.imag()});
        }
        const std::vector<cplx> got = cli::parse_alphas_json(arr.dump());
        CHECK(got == want);
        // And through a report's config echo.
        const Outcome o = run({"kernel", "--alphas", arr.dump(), "--n", "5"});
        REQUIRE(o.code == 0);
        CHECK(cli::parse_alphas_json(o.doc()["config"]["alphas"].dump()) == want);
    }
}

TEST_CASE("alphas from a file")
{
    const std::string path = "cli_test_alphas.json";
    {
        std::ofstream f(path);
        f << R"({"alphas": [[0.5, 0]]})";
    }
    CHECK(cli::load_alphas(path).alphas() == std::vector<cplx>{cplx(0.5, 0.0)});
    std::remove(path.c_str());
    CHECK_THROWS_AS(cli::load_alphas("no_such_file.json"), opuc::ArgumentError);
}

TEST_CASE("bands: free case")
{
    const Outcome o = run({"bands", "--alphas", kFree});
    REQUIRE(o.code == 0);
    const json r = o.doc()["result"];
    CHECK(r["full_circle"] == true);
    CHECK(r["bands"].size() == 1);
    REQUIRE(r["closed_gaps"].size() == 2);
    CHECK(r["closed_gaps"][0]["theta"] == 0.0);
    CHECK(std::abs(r["closed_gaps"][1]["theta"].get<double>() - std::numbers::pi) <= 1e-11);
    CHECK(r["resonances"].size() == 2);
    CHECK(std::abs(r["cdf"]["total_raw"].get<double>() - 0.5) <= 1e-9);
    // k(theta) = theta / 2pi on the table.
    for (const json& row : r["cdf"]["table"])
        CHECK(std::abs(row[2].get<double>() - row[0].get<double>() / (2 * std::numbers::pi)) <= 1e-6);
}

TEST_CASE("bands: critical spike has p bands")
{
    const Outcome o = run({"bands", "--alphas", spike_critical(4)});
    REQUIRE(o.code == 0);
    CHECK(o.doc()["result"]["bands"].size() == 4);
}

TEST_CASE("validation errors exit with 2")
{
    Outcome o = run({"bands", "--alphas", "[[0,0],[0,"});
    CHECK(o.code == 2);
    CHECK(o.err.find("malformed JSON") != std::string::npos);
    CHECK(o.out.empty());

    o = run({"bands", "--alphas", "[[0,0],[1.0,0]]"});
    CHECK(o.code == 2);
    CHECK(o.err.find("alpha_1") != std::string::npos);

    CHECK(run({"singular", "--alphas", spike_critical(4), "--s", "4"}).code == 2);
    CHECK(run({"singular", "--alphas", spike_critical(4), "--s", "-1"}).code == 2);
    CHECK(run({"bands"}).code == 2);
    CHECK(run({"bands", "--alphas", kFree, "--format", "xml"}).code == 2);
    CHECK(run({"bands", "--alphas", kFree, "--bogus"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"kernel", "--alphas", kFree, "--z", "one"}).code == 2);
    CHECK(run({"universality", "--alphas", kFree}).code == 2);

    // A gap point: constant alpha = 0.5 has its gap around 0.
    o = run({"universality", "--alphas", "[[0.5,0]]", "--theta", "0.3"});
    CHECK(o.code == 2);
    CHECK(o.err.find("OutsideBands") != std::string::npos);
}

TEST_CASE("help and version exit with 0")
{
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"bands", "--help"}).code == 0);
    const Outcome v = run({"--version"});
    CHECK(v.code == 0);
}

TEST_CASE("singular: critical spike")
{
    const Outcome o = run({"singular", "--alphas", spike_critical(4)});
    REQUIRE(o.code == 0);
    const json r = o.doc()["result"];
    CHECK(r["common_to_all_s"] == true);
    REQUIRE(r["sections"].size() == 4);
    for (const json& s : r["sections"]) {
        CHECK(s["count"] == 2);
        for (const json& p : s["points"])
            CHECK(p["residual"].get<double>() <= 1e-6);
    }

    const Outcome one = run({"singular", "--alphas", spike_critical(4), "--s", "1"});
    REQUIRE(one.code == 0);
    CHECK(one.doc()["result"]["sections"].size() == 1);
}

TEST_CASE("singular: off the critical circle")
{
    const cplx a = opuc::critical_circle_alpha(0.25) * (1.0 + 0.05 / std::abs(opuc::critical_circle_alpha(0.25)));
    const std::string alphas = json::array({{0, 0}, {0, 0}, {0, 0}, {a.real(), a.imag()}}).dump();
    const Outcome o = run({"singular", "--alphas", alphas});
    REQUIRE(o.code == 0);
    for (const json& s : o.doc()["result"]["sections"])
        CHECK(s["count"] == 0);
}

TEST_CASE("universality: free bulk passes")
{
    const Outcome o = run({"universality", "--alphas", kFree, "--theta", "1.5707963267948966"});
    REQUIRE(o.code == 0);
    const json r = o.doc()["result"];
    CHECK(r["verdict"] == "PASS");
    CHECK(r["terminal_error"].get<double>() < 0.01);
    CHECK(r["limit"]["regime"] == "InteriorBulk");
    CHECK(r["rows"].size() == 3 * 49);
}

TEST_CASE("universality: edges")
{
    char edge[40];
    std::snprintf(edge, sizeof edge, "%.17g", 2.0 * std::asin(0.5));
    const Outcome o = run({"universality", "--alphas", "[[0.5,0]]", "--theta", edge,
                           "--n", "400,800,1600,3200"});
    REQUIRE(o.code == 0);
    const json r = o.doc()["result"];
    CHECK(r["limit"]["regime"] == "EdgeNonResonant");
    CHECK(r["monotone"] == true);
    CHECK(r["terminal_error"].get<double>() <= 0.05);

    // {0.3, 0} has a Delta = -2 edge near 2.8369.
    const json bands = run({"bands", "--alphas", "[[0.3,0],[0,0]]"}).doc()["result"];
    double neg = -1.0;
    for (const json& e : bands["edges"])
        if (e["delta"] == "-2")
            neg = e["theta"].get<double>();
    REQUIRE(neg > 0.0);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", neg);
    const Outcome refused = run({"universality", "--alphas", "[[0.3,0],[0,0]]", "--theta", buf});
    CHECK(refused.code == 4);
    CHECK(refused.err.find("unsupported") != std::string::npos);
    const Outcome rotated =
        run({"universality", "--alphas", "[[0.3,0],[0,0]]", "--theta", buf, "--experimental-neg-edge"});
    CHECK(rotated.code == 0);
    CHECK(rotated.doc()["result"]["limit"]["rotated"] == true);
}

TEST_CASE("kernel, schur and identity")
{
    const std::string v = "[[0.3,0.1],[0,0.2],[0.1,0]]";
    Outcome o = run({"kernel", "--alphas", v, "--n", "200", "--theta", "1"});
    REQUIRE(o.code == 0);
    CHECK(o.doc()["result"]["relative_difference"].get<double>() <= 1e-8);

    o = run({"schur", "--alphas", v, "--k", "5"});
    REQUIRE(o.code == 0);
    const json s = o.doc()["result"];
    CHECK(s["max_abs_f"].get<double>() < 1.0);
    CHECK(s["min_re_F"].get<double>() > 0.0);
    CHECK(s["wall_vs_pinter_nevai"].get<double>() <= 1e-9);

    o = run({"identity", "--alphas", spike_critical(2), "--k", "3"});
    REQUIRE(o.code == 0);
    CHECK(o.doc()["result"]["pass"] == true);

    // |t| too large for the generating function: reported as skipped.
    o = run({"identity", "--alphas", v, "--t", "0.99", "--z", "1.5,0"});
    CHECK(o.code == 0);
    CHECK(o.doc()["result"]["generating_function"].contains("skipped"));
}

TEST_CASE("verify")
{
    Outcome o = run({"verify", "--alphas", kFree});
    CHECK(o.code == 0);
    CHECK(o.doc()["result"]["pass"] == true);

    o = run({"verify", "--seed", "42", "--p", "4"});
    CHECK(o.code == 0);
    const json r = o.doc()["result"];
    CHECK(r["randomized"] == true);
    CHECK(r["alphas"].size() == 4);
    for (const json& p : r["properties"])
        CHECK_MESSAGE(p["pass"] == true, p["name"].get<std::string>());

    o = run({"verify", "--seed", "42", "--p", "4", "--debug-wrong-psi"});
    CHECK(o.code == 1);
    const json bad = o.doc()["result"];
    bool wall_failed = false;
    for (const json& f : bad["failures"]) {
        CHECK(f.contains("alphas"));
        CHECK(f.contains("case"));
        if (f["property"] == "wall_vs_pinter_nevai") {
            wall_failed = true;
            CHECK(f["error"].get<std::string>().find("coefficient") != std::string::npos);
        }
    }
    CHECK(wall_failed);
}

TEST_CASE("reports are byte-stable and embed the run description")
{
    const std::vector<std::string> args{"verify", "--seed", "7", "--p", "3"};
    const Outcome a = run(args), b = run(args);
    CHECK(a.out == b.out);
    const json d = a.doc();
    CHECK(d["version"] == "0.1.0");
    CHECK(d["config"]["seed"] == 7);
    CHECK(d["tolerances"].size() > 5);
    CHECK_FALSE(d.contains("timing"));

    std::vector<std::string> timed = args;
    timed.push_back("--timing");
    CHECK(run(timed).doc()["timing"]["wall_seconds"].get<double>() >= 0.0);

    const std::vector<std::string> bands{"bands", "--alphas", "[[0.5,0]]"};
    CHECK(run(bands).out == run(bands).out);
}

TEST_CASE("angles are in [0, 2pi) with 12 significant digits")
{
    const json r = run({"bands", "--alphas", "[[0.3,0.2],[0.1,-0.4]]"}).doc()["result"];
    for (const json& e : r["edges"]) {
        const double t = e["theta"].get<double>();
        CHECK(t >= 0.0);
        CHECK(t < 2 * std::numbers::pi);
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.12g", t);
        CHECK(std::stod(buf) == t);
    }
}

TEST_CASE("csv output and --out")
{
    const Outcome o = run({"verify", "--format", "csv"});
    REQUIRE(o.code == 0);
    std::istringstream in(o.out);
    std::string line;
    int comments = 0, rows = 0;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) == 0)
            ++comments;
        else if (!header)
            header = line == "property,max_residual,tolerance,samples,pass";
        else
            ++rows;
    }
    CHECK(comments == 4);
    CHECK(header);
    CHECK(rows >= 10);

    const std::string path = "cli_test_report.json";
    const Outcome f = run({"bands", "--alphas", kFree, "--out", path});
    CHECK(f.code == 0);
    CHECK(f.out.empty());
    std::ifstream in2(path);
    std::stringstream buf;
    buf << in2.rdbuf();
    CHECK(buf.str() == run({"bands", "--alphas", kFree}).out);
    std::remove(path.c_str());
}

} // TEST_SUITE
