#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>

// end-to-end runs of the built binary; WSH_CLI_PATH comes from the build

namespace {

struct RunResult {
    int code;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(WSH_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf;
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), int(buf.size()), pipe)) out += buf.data();
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::string tmpfile_path(const std::string& name) {
    return std::string("/tmp/wsh_cli_") + name;
}

}  // namespace

TEST_CASE("build emits a 20-dimensional algebra, idempotently") {
    auto r1 = run("build --type W --m 1 --n 1 --p 5");
    CHECK(r1.code == 0);
    auto j = nlohmann::ordered_json::parse(r1.out);
    CHECK(j["basis"].size() == 20);
    auto r2 = run("build --type W --m 1 --n 1 --p 5");
    CHECK(r1.out == r2.out);
}

TEST_CASE("build stamps out-of-scope shapes") {
    auto r = run("build --type H --m 2 --n 4 --p 5");
    CHECK(r.code == 0);
    auto j = nlohmann::ordered_json::parse(r.out);
    CHECK(j["scope"]["theorem"] == false);

    CHECK(run("build --type H --m 3 --n 5 --p 5").code == 2);  // odd m
    CHECK(run("build --type W --m 1 --n 1 --p 6").code == 2);  // composite p
}

TEST_CASE("verify catches a corrupted structure constant with a witness") {
    auto r = run("build --type W --m 1 --n 1 --p 5 --out " + tmpfile_path("w.json"));
    REQUIRE(r.code == 0);
    std::ifstream in(tmpfile_path("w.json"));
    auto j = nlohmann::ordered_json::parse(in);
    // corrupt the first nonempty sc entry
    for (auto& entry : j["sc"]) {
        if (!entry[2].empty()) {
            int v = entry[2][0][1].get<int>();
            entry[2][0][1] = (v + 1) % 5;
            break;
        }
    }
    std::ofstream out(tmpfile_path("corrupted.json"));
    out << j.dump();
    out.close();

    auto ok = run("verify --type W --m 1 --n 1 --p 5");
    CHECK(ok.code == 0);
    auto bad = run("verify --in " + tmpfile_path("corrupted.json"));
    CHECK(bad.code == 1);
    auto rep = nlohmann::ordered_json::parse(bad.out);
    bool witnessed = false;
    for (auto& s : rep["steps"])
        if (s["status"] == "fail" && s.contains("witness")) witnessed = true;
    CHECK(witnessed);
}

TEST_CASE("certify exit codes") {
    CHECK(run("certify --type S --m 2 --n 2 --p 5").code == 0);
    CHECK(run("certify --type H --m 2 --n 4 --p 5").code == 3);
    CHECK(run("certify --type W --m 1 --n 1 --p 3").code == 3);
    CHECK(run("certify --type W --m 1 --n 1 --p 5 --negative-control drop-cert").code == 1);
    CHECK(run("certify --type H --m 3 --n 5 --p 5").code == 2);
}

TEST_CASE("weights and char run") {
    auto r = run("weights --type S --m 2 --n 2 --p 5");
    CHECK(r.code == 0);
    auto j = nlohmann::ordered_json::parse(r.out);
    CHECK(j["decomposition"]["long"] == true);

    auto c = run("char --type W --m 1 --n 1 --p 5 --lambda 1,2");
    CHECK(c.code == 0);
    auto cj = nlohmann::ordered_json::parse(c.out);
    CHECK(cj["verma_minus"]["total"] == "20000000");  // 5^7 * 2^8
}

TEST_CASE("compose and blocks on the toy algebras") {
    std::string toy = std::string(WSH_TEST_DATA) + "/toy_nilrad.json";
    auto r = run("compose --in " + toy + " --lambda 0 --seed 5");
    CHECK(r.code == 0);
    auto j = nlohmann::ordered_json::parse(r.out);
    CHECK(j["dim"] == 50);
    CHECK(j["factors"]["factors"].size() == 5);

    std::string borel = std::string(WSH_TEST_DATA) + "/toy_borel.json";
    auto b = run("blocks --in " + borel + " --seed 5");
    CHECK(b.code == 0);
    auto bj = nlohmann::ordered_json::parse(b.out);
    CHECK(bj["blocks"].size() == 1);
}

TEST_CASE("determinism: identical seeds give byte-identical reports") {
    for (std::string cmd :
         {std::string("certify --type W --m 1 --n 1 --p 5 --seed 42"),
          std::string("verify --type S --m 2 --n 2 --p 5 --mode sampled --samples 2000 --seed 42"),
          std::string("compose --in ") + WSH_TEST_DATA + "/toy_nilrad.json --seed 42"}) {
        auto r1 = run(cmd);
        auto r2 = run(cmd);
        CHECK(r1.code == r2.code);
        CHECK(r1.out == r2.out);
    }
}
