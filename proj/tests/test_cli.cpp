#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ultratree/cli.hpp"
#include "ultratree/io.hpp"

using namespace ultratree;
namespace fs = std::filesystem;

namespace {

struct Workdir {
    fs::path path;
    Workdir() : path(fs::temp_directory_path() / ("ultratree_cli_" + std::to_string(::getpid()))) {
        fs::create_directories(path);
    }
    ~Workdir() { fs::remove_all(path); }

    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path / name) << text;
        return (path / name).string();
    }
};

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(RunConfig cfg) {
    std::ostringstream out, err;
    const int code = run(cfg, out, err);
    return {code, out.str(), err.str()};
}

const char* const kX4 = "a,b,c,d\n0,0.25,0.5,1\n0.25,0,0.5,1\n0.5,0.5,0,1\n1,1,1,0\n";

}  // namespace

TEST_CASE("validate") {
    Workdir w;
    auto r = call({.command = "validate", .input = w.write("x4.csv", kX4)});
    CHECK(r.code == kExitOk);
    CHECK(Json::parse(r.out)["is_ultrametric"] == true);

    r = call({.command = "validate", .input = w.write("no.csv", "a,b,c\n0,1,1\n1,0,1.9\n1,1.9,0\n")});
    CHECK(r.code == kExitNegative);
    CHECK(Json::parse(r.out)["witness"]["kind"] == "strong_triangle");

    r = call({.command = "validate", .input = w.write("broken.csv", "a,b\n0,1\n2,0\n")});
    CHECK(r.code == kExitMalformed);
    CHECK(r.err.find("structural") != std::string::npos);

    r = call({.command = "validate", .input = w.write("bad.csv", "a,b\n0,1\n1,x\n")});
    CHECK(r.code == kExitMalformed);
    CHECK(r.err.find("line 3") != std::string::npos);

    r = call({.command = "validate", .input = (w.path / "missing.csv").string()});
    CHECK(r.code == kExitMalformed);
}

TEST_CASE("tree") {
    Workdir w;
    const auto r = call({.command = "tree", .input = w.write("x4.csv", kX4)});
    REQUIRE(r.code == kExitOk);
    const auto j = Json::parse(r.out);
    CHECK(j["clade_size"] == 4);
    CHECK(j["isometry"] == true);
    CHECK(j["newick"] == "(((a:0.25,b:0.25):0.25,c:0.5):0.5,d:1);");
    CHECK(j["phi"]["c"] == Json::array({0, 2, 2}));

    const auto no = call({.command = "tree", .input = w.write("no.csv", "a,b,c\n0,1,1\n1,0,1.9\n1,1.9,0\n")});
    CHECK(no.code == kExitNegative);
}

TEST_CASE("coerce keeps the input format") {
    Workdir w;
    auto r = call({.command = "coerce", .input = w.write("m.csv", "a,b\n0,0.3\n0.3,0\n")});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out == "a,b\n0,0.25\n0.25,0\n");
    r = call({.command = "coerce", .input = w.write("m.json", R"({"labels":["a","b"],"d":[[0,7],[7,0]]})")});
    REQUIRE(r.code == kExitOk);
    CHECK(Json::parse(r.out)["d"][0][1] == 1.0);
}

TEST_CASE("vitali") {
    Workdir w;
    const auto balls = w.write("balls.json", R"({"balls":[{"center":"a","radius":0.6},{"center":"c","radius":0.6},
        {"center":"b","radius":0.3},{"center":"d","radius":1.1}]})");
    const auto r = call({.command = "vitali", .input = w.write("x4.csv", kX4), .balls = balls});
    REQUIRE(r.code == kExitOk);
    const auto j = Json::parse(r.out);
    REQUIRE(j["selected"].size() == 1);
    CHECK(j["selected"][0]["center"] == "d");
    CHECK(call({.command = "vitali", .input = w.write("x4b.csv", kX4)}).code == kExitMalformed);
}

TEST_CASE("analyze") {
    Workdir w;
    auto r = call({.command = "analyze", .input = w.write("x4.csv", kX4)});
    REQUIRE(r.code == kExitOk);
    CHECK(Json::parse(r.out)["doubling"]["bruteforce"] == 2);

    r = call({.command = "analyze", .input = "builtin:binary", .horizon = 10});
    REQUIRE(r.code == kExitOk);
    const auto j = Json::parse(r.out);
    CHECK(j["perfect"]["value"] == true);
    CHECK(j["perfect"]["scope"] == "up to horizon 10");

    r = call({.command = "analyze", .input = "builtin:xgeo", .horizon = 8});
    REQUIRE(r.code == kExitOk);
    CHECK(Json::parse(r.out)["doubling"]["sufficient"]["constant"] == 4);

    RunConfig big{.command = "generate", .input = "20", .seed = 3};
    const auto gen = call(big);
    REQUIRE(gen.code == kExitOk);
    r = call({.command = "analyze", .input = w.write("big.csv", gen.out)});
    CHECK(r.code == kExitCapExceeded);
    r = call({.command = "analyze", .input = w.write("big2.csv", gen.out), .cap_n = 20});
    CHECK(r.code == kExitOk);

    CHECK(call({.command = "analyze", .input = "builtin:nothing"}).code == kExitMalformed);
}

TEST_CASE("generate is deterministic and writes --out") {
    Workdir w;
    const auto a = call({.command = "generate", .input = "12", .seed = 5, .levels = 3});
    const auto b = call({.command = "generate", .input = "12", .seed = 5, .levels = 3});
    CHECK(a.code == kExitOk);
    CHECK(a.out == b.out);
    const auto path = (w.path / "g.csv").string();
    CHECK(call({.command = "generate", .input = "12", .output = path, .seed = 5, .levels = 3}).code == kExitOk);
    std::ifstream in(path);
    CHECK(std::string(std::istreambuf_iterator<char>(in), {}) == a.out);
    CHECK(call({.command = "generate", .input = "zero"}).code == kExitMalformed);
}

TEST_CASE("the executable reports exit codes") {
    Workdir w;
    const std::string exe = ULTRATREE_EXE;
    const auto good = w.write("x4.csv", kX4);
    const auto bad = w.write("no.csv", "a,b,c\n0,1,1\n1,0,1.9\n1,1.9,0\n");
    auto status = [](const std::string& cmd) { return WEXITSTATUS(std::system((cmd + " >/dev/null 2>&1").c_str())); };
    CHECK(status(exe + " validate " + good) == 0);
    CHECK(status(exe + " validate " + bad) == 1);
    CHECK(status(exe + " frobnicate " + good) == 2);
    CHECK(status(exe + " analyze " + good + " --cap-n 3") == 3);
}
