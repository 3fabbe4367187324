#include "doctest.h"

#include "zt/cli.hpp"

#include "json.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace {

struct Run {
    int rc;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "ztcli");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int rc = zt::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {rc, out.str(), err.str()};
}

std::vector<nlohmann::json> records(const std::string& s) {
    std::vector<nlohmann::json> r;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) r.push_back(nlohmann::json::parse(line));
    return r;
}

}  // namespace

TEST_CASE("cli rsf record") {
    auto r = run({"rsf", "--t", "200", "--digits", "40"});
    CHECK(r.rc == 0);
    auto recs = records(r.out);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0]["record"] == "rsf");
    CHECK(recs[0]["N_t"] == 5);
    CHECK(std::stod(recs[0]["z"].get<std::string>()) == doctest::Approx(5.59025532).epsilon(1e-8));
}

TEST_CASE("cli output is deterministic") {
    std::vector<std::string> args = {"gauss-qgs", "--N", "100000", "--seed", "7", "--K", "20"};
    auto a = run(args), b = run(args);
    CHECK(a.rc == 0);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
    auto c = run({"gauss-qgs", "--N", "100000", "--seed", "8", "--K", "20"});
    CHECK(c.out != a.out);
}

TEST_CASE("cli gauss sums agree") {
    auto q = run({"gauss-qgs", "--N", "5000", "--x", "1/sqrt(45)", "--theta", "1-sqrt(23/71)", "--K", "20", "--refined"});
    auto d = run({"gauss-direct", "--N", "5000", "--x", "1/sqrt(45)", "--theta", "1-sqrt(23/71)", "--full"});
    REQUIRE(q.rc == 0);
    REQUIRE(d.rc == 0);
    auto jq = records(q.out).at(0), jd = records(d.out).at(0);
    for (const char* k : {"re", "im"}) {
        double vq = std::stod(jq["value"][k].get<std::string>()), vd = std::stod(jd["value"][k].get<std::string>());
        CHECK(vq == doctest::Approx(vd).epsilon(1e-3));
    }
}

TEST_CASE("cli usage errors name the key") {
    auto r = run({"rsf", "--t", "50"});
    CHECK(r.rc != 0);
    CHECK(r.err.find("--t") != std::string::npos);
    auto k = run({"zt13", "--t", "1e18", "--K", "3"});
    CHECK(k.rc != 0);
    CHECK(k.err.find("K") != std::string::npos);
    auto n = run({"gauss-qgs", "--N", "-5", "--x", "0.3", "--theta", "0.1"});
    CHECK(n.rc != 0);
    CHECK(n.err.find("N") != std::string::npos);
    auto bad = run({"gauss-direct", "--N", "10", "--x", "1/", "--theta", "0"});
    CHECK(bad.rc != 0);
    CHECK(bad.err.find("x") != std::string::npos);
    auto unknown = run({"nonsense"});
    CHECK(unknown.rc != 0);
    auto none = run({});
    CHECK(none.rc != 0);
}

TEST_CASE("cli partial sum window") {
    auto r = run({"partial-sum", "--t", "1e9", "--n-lo", "10", "--n-hi", "20", "--theta-c"});
    CHECK(r.rc == 0);
    auto recs = records(r.out);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0]["record"] == "partial-sum");
}

TEST_CASE("cli hybrid17 record") {
    auto r = run({"hybrid17", "--t", "1e10"});
    CHECK(r.rc == 0);
    auto recs = records(r.out);
    REQUIRE(!recs.empty());
    CHECK(recs[0].contains("z"));
}
