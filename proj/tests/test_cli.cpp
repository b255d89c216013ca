#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "psum/cli.hpp"

using namespace psum::cli;
using nlohmann::json;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    Result r;
    try {
        const auto config = parse_command_line(args, out);
        r.code = config ? run(*config, out, err) : 0;
    } catch (const usage_error& e) {
        err << e.what();
        r.code = 2;
    }
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::vector<json> lines(const std::string& text) {
    std::vector<json> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(json::parse(line));
    return out;
}

}  // namespace

TEST_CASE("range parsing") {
    const IntRange r = parse_range("3:17:2");
    CHECK(r.start == 3);
    CHECK(r.end == 17);
    CHECK(r.step == 2);
    CHECK(parse_range("1:1").step == 1);
    CHECK_THROWS_AS(parse_range("5"), usage_error);
    CHECK_THROWS_AS(parse_range("9:3"), usage_error);
    CHECK_THROWS_AS(parse_range("1:x"), usage_error);
    CHECK_THROWS_AS(parse_range("1:9:0"), usage_error);
    CHECK_THROWS_AS(parse_range("-1:9"), usage_error);
}

TEST_CASE("thm2 exhaustive run") {
    const Result r = invoke({"thm2", "--range", "1:10000"});
    CHECK(r.code == 0);
    const auto recs = lines(r.out);
    REQUIRE(recs.size() == 10000);
    for (std::size_t i = 0; i < recs.size(); ++i) {
        REQUIRE(recs[i]["identity"] == "THM2");
        REQUIRE(recs[i]["x"] == i + 1);
        REQUIRE(recs[i]["exact"] == true);
        REQUIRE(recs[i]["lhs"].is_number_integer());
        REQUIRE(recs[i]["lhs"] == recs[i]["rhs"]);
        REQUIRE(recs[i]["residual"] == 0);
    }
    CHECK(r.err.find("checked=10000 exact=10000 violations=0 inconclusive=0") != std::string::npos);
}

TEST_CASE("collision --n 20") {
    const Result r = invoke({"collision", "--n", "20"});
    CHECK(r.code == 0);
    const auto recs = lines(r.out);
    REQUIRE(recs.size() == 2);
    const json& rec = recs[0];
    CHECK(rec["kind"] == "COLLISION");
    CHECK(rec["target"] == 20);
    CHECK(rec["status"] == "PASS");
    const auto w = rec["witnesses"];
    const std::uint64_t a = w[0][0].get<std::uint64_t>() * w[0][1].get<std::uint64_t>();
    const std::uint64_t b = w[1][0].get<std::uint64_t>() * w[1][1].get<std::uint64_t>();
    CHECK(a % 20 == b % 20);
    CHECK(a % 20 == 55 % 20);
    CHECK(recs[1]["summary"]["self_verified"] == 1);
}

TEST_CASE("domain and usage errors exit 2") {
    Result r = invoke({"thm1", "--range", "1:4"});
    CHECK(r.code == 2);
    CHECK(r.err.find("x >= 5") != std::string::npos);
    CHECK(r.out.empty());

    CHECK(invoke({"thm2", "--sample", "5", "--max", "100"}).code == 2);  // seed missing
    CHECK(invoke({"thm2"}).code == 2);
    CHECK(invoke({"nope", "--n", "3"}).code == 2);
    CHECK(invoke({"thm2", "--n", "3", "--range", "1:2"}).code == 2);
    CHECK(invoke({"goldbach", "--n", "7"}).code == 2);
    CHECK(invoke({"thm2", "--range", "1:10", "--format", "xml"}).code == 2);
    CHECK(invoke({"thm1", "--range", "5:10", "--max-memory-mb", "0"}).code == 2);
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("seeded sampling is reproducible") {
    auto args = std::vector<std::string>{"thm2", "--sample", "20", "--min", "10000", "--max", "200000",
                                         "--seed", "42", "--no-timing"};
    const Result a = invoke(args);
    const Result b = invoke(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.err == b.err);
    CHECK(lines(a.out).size() == 20);
    args[8] = "43";
    CHECK(invoke(args).out != a.out);

    for (const auto& rec : lines(a.out)) {
        CHECK(rec["x"] >= 10000);
        CHECK(rec["x"] <= 200000);
        CHECK(rec["ms"] == 0);
    }
}

TEST_CASE("sieve limit is raised with a warning") {
    const Result r = invoke({"thm1", "--range", "5:100", "--sieve-limit", "10"});
    CHECK(r.code == 0);
    CHECK(r.err.find("warning") != std::string::npos);
    CHECK(lines(r.out).size() == 96);
}

TEST_CASE("pi-formula audit") {
    const Result r = invoke({"pi-formula", "--range", "2:500"});
    CHECK(r.code == 0);
    const auto recs = lines(r.out);
    REQUIRE(recs.size() == 500);
    const json& audit = recs.back()["audit"];
    CHECK(audit["exact_variant"] == "statement");
    CHECK(audit["statement"]["rounds_to_pi"] == 499);
    CHECK(audit["proof"]["rounds_to_pi"] == 499);
    CHECK(audit["proof"]["max_abs_residual"].get<double>() > 0.2);

    const Result proof = invoke({"pi-formula", "--n", "2", "--variant", "proof"});
    CHECK(lines(proof.out)[0]["residual"].get<double>() > 0.2);
}

TEST_CASE("trend csv") {
    const Result r = invoke({"trend", "--n", "10000,100000", "--format", "csv"});
    CHECK(r.code == 0);
    std::istringstream in(r.out);
    std::string header, row;
    std::getline(in, header);
    CHECK(header == "x,mertens_sum,logx_loglogx,ratio");
    std::getline(in, row);
    CHECK(row.rfind("10000,", 0) == 0);
}

TEST_CASE("upsilon records") {
    const Result r = invoke({"upsilon", "--n", "10,20,1000"});
    CHECK(r.code == 0);
    const auto recs = lines(r.out);
    REQUIRE(recs.size() == 3);
    CHECK(recs[0]["ratio"].is_null());
    CHECK(recs[1]["ratio"].get<double>() > 0);
    for (const auto& rec : recs) CHECK(rec["agree"] == true);
}

TEST_CASE("prime-window reports violations and exits 1") {
    const Result r = invoke({"prime-window", "--range", "3:2000"});
    CHECK(r.code == 1);
    const auto recs = lines(r.out);
    REQUIRE(recs.size() == 1999);
    const json& summary = recs.back()["summary"];
    CHECK(summary["INCONCLUSIVE"] == 0);
    CHECK(summary["VIOLATION"].get<int>() > 0);
    CHECK(summary["self_verified"] == 1998);
    CHECK(recs[0]["lambda"] == 6);
}

TEST_CASE("goldbach range keeps even n") {
    const Result r = invoke({"goldbach", "--range", "6:40"});
    CHECK(r.code == 0);
    const auto recs = lines(r.out);
    REQUIRE(recs.size() == 18 + 1);
    for (std::size_t i = 0; i + 1 < recs.size(); ++i) CHECK(recs[i]["n"].get<int>() % 2 == 0);
}

TEST_CASE("csv scan rows carry quoted witnesses") {
    const Result r = invoke({"goldbach", "--n", "10", "--format", "csv"});
    CHECK(r.out == "kind,n,lower,upper,target,witnesses,status\nGOLDBACH_CONG,10,0,0,10,\"[[3,3,7]]\",PASS\n");
}

TEST_CASE("prime table cache and --out") {
    const auto dir = std::filesystem::temp_directory_path() / "psum_cli_cache";
    std::filesystem::remove_all(dir);
    const auto out_path = (dir / "out.jsonl").string();
    std::filesystem::create_directories(dir);
    const Result first = invoke({"thm1", "--range", "5:300", "--cache-dir", dir.string(), "--no-timing",
                                 "--out", out_path});
    CHECK(first.code == 0);
    CHECK(first.out.empty());
    CHECK(std::filesystem::exists(dir / "primes-300.psum"));
    std::ifstream f(out_path);
    const std::string written((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    const Result second = invoke({"thm1", "--range", "5:300", "--cache-dir", dir.string(), "--no-timing"});
    CHECK(second.out == written);
    std::filesystem::remove_all(dir);
}

TEST_CASE("executable exit codes") {
    const std::string bin = PSUM_BINARY;
    auto status = [&](const std::string& args) {
        const int raw = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    CHECK(status("thm2 --range 1:100") == 0);
    CHECK(status("collision --n 20") == 0);
    CHECK(status("thm1 --range 1:4") == 2);
    CHECK(status("prime-window --range 3:100") == 1);
    CHECK(status("bogus") == 2);
}
