#include "henon/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using henon::cli::main_with_args;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = main_with_args(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("henon_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("solve emits the ground state") {
    const fs::path dir = scratch("solve");
    const Run r = run({"solve", "--N", "3", "--alpha", "2", "--F", "pow:p=3", "--cache-dir", dir.string()});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("command") == "solve");
    CHECK(j.at("result").at("a_star").get<double>() == doctest::Approx(2.95289940153097).epsilon(1e-9));
    CHECK(j.at("result").contains("delta_fit"));
    CHECK(j.at("result").contains("energy_grad"));
    CHECK(r.err.find("a*=") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("census and morse-table") {
    const Run c = run({"census", "--alpha", "6", "--N", "4"});
    REQUIRE(c.code == 0);
    const auto j = nlohmann::json::parse(c.out);
    CHECK(j.at("result").at("branch_count") == 2);
    CHECK(j.at("result").at("groups").size() == 2);

    const Run m = run({"morse-table", "--N", "3", "--alpha", "0.5:9.5:0.5", "--format", "csv"});
    REQUIRE(m.code == 0);
    std::istringstream lines(m.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "alpha,side,m,m_symmetric,kernel_dim,bifurcation");
    std::size_t rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 19 + 4);  // 19 values, 4 of them bifurcation values with two rows
    CHECK(m.out.find("\n1.5,,4,") != std::string::npos);
    CHECK(m.out.find("\n2,right,9,") != std::string::npos);
    CHECK(m.out.find("\n9.5,,36,") != std::string::npos);
}

TEST_CASE("exit codes") {
    const Run help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("morse-table") != std::string::npos);
    const Run sub = run({"sweep", "--help"});
    CHECK(sub.code == 0);
    CHECK(sub.out.find("--alpha-range") != std::string::npos);
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"solve", "--bogus", "1"}).code == 1);
    CHECK(run({"solve", "--tol", "-1"}).code == 1);
    CHECK(run({"solve", "--format", "xml"}).code == 1);
    CHECK(run({"solve", "--alpha", "abc"}).code == 1);
    CHECK(run({"sweep", "--alpha-range", "3:1"}).code == 1);
    CHECK(run({"spectrum", "--weight", "L2"}).code == 1);
    CHECK(run({"solve", "--nodes", "10"}).code == 1);  // not a solve option
    CHECK(run({"census", "--alpha", "3"}).code == 2);
    CHECK(run({"bessel", "--s", "-1"}).code == 2);
    CHECK(run({"solve", "--F", "pow:p=0.5", "--no-cache"}).code == 2);
    CHECK(run({"solve", "--F", "pow:p=5.1", "--no-cache"}).code == 3);
}

TEST_CASE("config file values and flag precedence") {
    const fs::path dir = scratch("config");
    write(dir / "c.json", R"({"N": 4, "alpha": "1"})");
    const Run a = run({"census", "--config", (dir / "c.json").string(), "--alpha", "6"});
    REQUIRE(a.code == 0);
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j.at("result").at("alpha_i") == 6);
    CHECK(j.at("result").at("branch_count") == 2);  // N = 4 from the file

    write(dir / "num.json", R"({"alpha": 4, "N": 5})");
    const Run b = run({"census", "--config", (dir / "num.json").string()});
    REQUIRE(b.code == 0);
    CHECK(nlohmann::json::parse(b.out).at("result").at("groups")[0] == "O(4)");

    write(dir / "unknown.json", R"({"N": 3, "colour": "red"})");
    CHECK(run({"census", "--config", (dir / "unknown.json").string()}).code == 1);
    write(dir / "wrongcmd.json", R"({"nodes": 400})");
    CHECK(run({"census", "--config", (dir / "wrongcmd.json").string()}).code == 1);
    write(dir / "badtype.json", R"({"N": "three"})");
    CHECK(run({"census", "--config", (dir / "badtype.json").string()}).code == 1);
    write(dir / "broken.json", "{");
    CHECK(run({"census", "--config", (dir / "broken.json").string()}).code == 1);
    CHECK(run({"census", "--config", (dir / "missing.json").string()}).code == 1);
    fs::remove_all(dir);
}

TEST_CASE("cache hits are byte-identical and keyed by settings") {
    const fs::path dir = scratch("cache");
    const std::vector<std::string> args = {"verify-decay", "--alpha", "2", "--t-max", "10", "--dt", "1",
                                           "--cache-dir",  dir.string()};
    const Run first = run(args);
    REQUIRE(first.code == 0);
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
    CHECK(files == 1);
    const Run second = run(args);
    REQUIRE(second.code == 0);
    CHECK(second.out == first.out);
    CHECK(second.err.find("cached") != std::string::npos);

    // the output location does not change the key
    auto with_out = args;
    with_out.insert(with_out.end(), {"--out", (dir / "report.json").string()});
    const Run third = run(with_out);
    REQUIRE(third.code == 0);
    CHECK(slurp(dir / "report.json") == first.out);
    CHECK(third.out.find("cached") != std::string::npos);

    // a different setting misses
    auto other = args;
    other[2] = "3";
    const Run fourth = run(other);
    REQUIRE(fourth.code == 0);
    CHECK(fourth.out != first.out);

    // bypassing the cache recomputes the same bytes
    auto bypass = args;
    bypass.push_back("--no-cache");
    const Run fifth = run(bypass);
    CHECK(fifth.out == first.out);
    CHECK(fifth.err.find("cached") == std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("repeated runs are byte-identical") {
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{"spectrum", "--alpha", "1", "--nodes", "500", "--no-cache"},
          std::vector<std::string>{"bessel", "--nu", "1", "--s", "0.5:40:9", "--format", "csv"},
          std::vector<std::string>{"check-F", "--F", "max:p=3,q=2", "--scan", "0.01:100:301"}}) {
        const Run a = run(args), b = run(args);
        REQUIRE(a.code == 0);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("canonical config ignores output plumbing") {
    henon::cli::RunConfig a;
    a.command = "solve";
    henon::cli::RunConfig b = a;
    b.out = "x.json";
    b.cache_dir = "/tmp/elsewhere";
    b.no_cache = true;
    CHECK(henon::cli::canonical_config(a) == henon::cli::canonical_config(b));
    b.tol = 1e-12;
    CHECK(henon::cli::canonical_config(a) != henon::cli::canonical_config(b));
    // options of other commands do not enter the key
    b = a;
    b.nu = 3.0;
    CHECK(henon::cli::canonical_config(a) == henon::cli::canonical_config(b));
}
