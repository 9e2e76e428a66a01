#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sobnum/cli.hpp"

using namespace sobnum;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("an json output") {
    Run r = run({"an", "iso:s=1,r=1,d=1", "--n", "1", "--target", "linf", "--format", "json"});
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["n"] == 1);
    CHECK(j["exact"] == true);
    double target = std::sqrt(M_PI * M_PI / 3.0 - 1.0);
    CHECK(j["lo"].get<double>() <= target);
    CHECK(target <= j["hi"].get<double>());
    CHECK(j["hi"].get<double>() - j["lo"].get<double>() <= 1e-6);
}

TEST_CASE("csv headers are fixed") {
    Run s = run({"sigma", "iso:s=1,r=2,d=1", "--n", "1:3"});
    CHECK(s.code == 0);
    CHECK(s.out.rfind("n,sigma,level\n", 0) == 0);

    Run a = run({"an", "iso:s=1,r=1,d=1", "--n", "1:2", "--target", "linf"});
    CHECK(a.code == 0);
    CHECK(a.out.rfind("n,lo,hi,exact\n", 0) == 0);

    Run c = run({"certify", "prop2-upper", "iso:s=1,r=2,d=1", "--n", "15:40"});
    CHECK(c.code == 0);
    CHECK(c.out.rfind("n,actual_lo,actual_hi,bound,margin\n", 0) == 0);
}

TEST_CASE("count subcommand") {
    Run r = run({"count", "mix:s=1,r=1,d=2", "--t", "2"});
    CHECK(r.code == 0);
    CHECK(r.out == "5\n");
}

TEST_CASE("tail subcommand") {
    Run r = run({"tail", "iso:s=1,r=1,d=1", "--n", "1", "--q", "2", "--format", "json"});
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["width_ok"] == true);
    CHECK(j["lo"].get<double>() < j["hi"].get<double>());
}

TEST_CASE("limit subcommand emits a trace") {
    Run r = run({"limit", "iso:s=1,r=2,d=1", "--target", "linf", "--n",
                 "100:10000:geometric=3"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("n,ratio\n", 0) == 0);
    // last ratio close to 1
    auto pos = r.out.rfind("10000,");
    REQUIRE(pos != std::string::npos);
    double ratio = std::stod(r.out.substr(pos + 6));
    CHECK(ratio == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("certify exit codes") {
    Run pass = run({"certify", "prop2-upper", "iso:s=1,r=2,d=1", "--n", "15:200"});
    CHECK(pass.code == 0);
    // a range entirely below the threshold has nothing to check: not a pass
    Run vacuous = run({"certify", "prop2-upper", "iso:s=1,r=2,d=1", "--n", "1:10"});
    CHECK(vacuous.code == 1);
}

TEST_CASE("usage and domain errors exit 2") {
    CHECK(run({"sigma"}).code == 2);
    CHECK(run({"sigma", "bad-family", "--n", "1"}).code == 2);
    CHECK(run({"an", "iso:s=1,r=2,d=2", "--n", "1", "--target", "linf"}).code == 2);
    CHECK(run({"certify", "cor1-upper", "iso:s=1,r=2,d=2", "--n", "221:300"}).code == 2);
    CHECK(run({"an", "iso:s=1,r=1,d=1", "--n", "0:5", "--target", "linf"}).code == 2);
    CHECK(run({"nonsense"}).code == 2);
    Run bad = run({"sigma", "bad-family", "--n", "1"});
    CHECK(bad.err.find("error:") == 0);
}

TEST_CASE("output is byte-identical across runs and thread counts") {
    std::vector<std::string> base = {"certify", "cor12-upper", "mix:s=1,r=2,d=1",
                                     "--n", "28:3000", "--format", "csv"};
    Run a = run(base);
    Run b = run(base);
    CHECK(a.out == b.out);
    auto with_threads = base;
    with_threads.push_back("--threads");
    with_threads.push_back("4");
    Run c = run(with_threads);
    CHECK(a.out == c.out);

    Run s1 = run({"sigma", "mix:s=0.6,r=2,d=2", "--n", "1:50"});
    Run s2 = run({"sigma", "mix:s=0.6,r=2,d=2", "--n", "1:50"});
    CHECK(s1.out == s2.out);
}

TEST_CASE("constants subcommand emits records") {
    Run r = run({"constants", "iso:s=1,r=2,d=1", "--p", "4"});
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    REQUIRE(j["limits"].size() == 2);
    CHECK(j["limits"][1]["constant"].get<double>() == doctest::Approx(2.0));
    bool has_cor12b = false;
    for (const auto& b : j["bounds"])
        if (b["name"] == "Cor12bUpper") has_cor12b = true;
    CHECK(has_cor12b);
}

TEST_CASE("n-range parsing") {
    Run geo = run({"sigma", "iso:s=1,r=2,d=1", "--n", "10:1000:geometric=4"});
    REQUIRE(geo.code == 0);
    int lines = 0;
    for (char ch : geo.out)
        if (ch == '\n') ++lines;
    CHECK(lines == 5);  // header + 4 points
    CHECK(run({"sigma", "iso:s=1,r=2,d=1", "--n", "5:2"}).code == 2);
    CHECK(run({"sigma", "iso:s=1,r=2,d=1", "--n", "1:10:geometric=x"}).code == 2);
}
