#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cdr/cli.hpp"
#include "test_support.hpp"

using namespace cdr;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("cdr_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

const std::string ref = test::data_path("reference_triangle.csv");

}  // namespace

TEST_CASE("fit prints the development table") {
    const auto r = run_cli({"fit", "--input", ref, "--tail", "--i-ult", "10", "--format", "table"});
    CHECK(r.code == 0);
    CHECK(r.out.find("1.00049") != std::string::npos);
    CHECK(r.out.find("3.17") != std::string::npos);
    CHECK(r.out.find("e-08") != std::string::npos);

    const auto j = nlohmann::json::parse(run_cli({"fit", "--input", ref, "--tail", "--i-ult", "10"}).out);
    CHECK(j["tail"]["f_ult"].get<double>() == doctest::Approx(1.00049).epsilon(1e-5));
    CHECK(j["pattern"]["factors"].size() == 8);
}

TEST_CASE("fit on the doubling triangle") {
    const auto r = run_cli({"fit", "--input", test::data_path("doubling.csv"), "--format", "csv"});
    CHECK(r.code == 0);
    CHECK(r.out == "period,factor,sigma2\n0,2,0\n1,2,0\n");
    CHECK(r.err.find("warning:") != std::string::npos);
}

TEST_CASE("missing or bad input fails without output") {
    auto r = run_cli({"fit", "--input", test::data_path("does_not_exist.csv")});
    CHECK(r.code != 0);
    CHECK(r.out.empty());
    CHECK_FALSE(r.err.empty());

    const auto dir = scratch_dir("bad");
    std::ofstream(dir / "bad.csv") << "# kind=cumulative\n1,2,4\n1,0\n1\n";
    r = run_cli({"closed-form", "--input", (dir / "bad.csv").string()});
    CHECK(r.code != 0);
    CHECK(r.out.empty());
    CHECK(r.err.find("invalid triangle") != std::string::npos);
}

TEST_CASE("argument errors") {
    CHECK(run_cli({}).code != 0);
    CHECK(run_cli({"fit"}).code != 0);
    CHECK(run_cli({"fit", "--input", ref, "--format", "xml"}).code != 0);
    CHECK(run_cli({"fit", "--input", ref, "--tail"}).code != 0);
    CHECK(run_cli({"closed-form", "--input", ref, "--tail", "--i-ult", "8"}).code != 0);
    CHECK(run_cli({"bootstrap", "--input", ref, "--iterations", "0"}).code != 0);
    CHECK(run_cli({"bootstrap", "--input", ref, "--mode", "fast"}).code != 0);
    CHECK(run_cli({"bootstrap", "--input", ref, "--workers", "0"}).code != 0);
    CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("closed-form totals") {
    const auto j = nlohmann::json::parse(run_cli({"closed-form", "--input", ref}).out);
    CHECK(std::abs(j["total"]["prediction"].get<double>() - 81081) <= 1.0);
    CHECK(std::abs(j["total"]["estimation"].get<double>() - 29784) <= 1.0);
    CHECK(std::abs(j["total"]["process"].get<double>() - 75412) <= 1.0);

    const auto jt = nlohmann::json::parse(run_cli({"closed-form", "--input", ref, "--tail", "--i-ult", "10"}).out);
    CHECK(std::abs(jt["total"]["prediction"].get<double>() - 81336) <= 1.0);
    CHECK(std::abs(jt["years"][0]["estimation"].get<double>() - 655) <= 1.0);

    const auto csv = run_cli({"closed-form", "--input", ref, "--format", "csv"});
    CHECK(csv.out.rfind("year,estimation,process,prediction", 0) == 0);
}

TEST_CASE("output file receives the data") {
    const auto dir = scratch_dir("output");
    const auto path = dir / "report.json";
    const auto r = run_cli({"closed-form", "--input", ref, "--output", path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    CHECK(nlohmann::json::parse(slurp(path))["last_index"] == 8);
}

TEST_CASE("bootstrap output and determinism") {
    const auto dir = scratch_dir("boot");
    std::vector<std::string> args{"bootstrap", "--input", ref,     "--iterations", "2000",
                                  "--seed",    "42",    "--tail", "--i-ult",      "10"};
    auto a = args;
    a.insert(a.end(), {"--dump-samples", (dir / "a.csv").string(), "--output", (dir / "a.json").string()});
    auto b = args;
    b.insert(b.end(), {"--dump-samples", (dir / "b.csv").string(), "--output", (dir / "b.json").string(),
                       "--workers", "4"});
    REQUIRE(run_cli(a).code == 0);
    REQUIRE(run_cli(b).code == 0);
    CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
    for (const char* mode : {"full", "estimation", "process"}) {
        const auto sa = slurp(dir / ("a." + std::string(mode) + ".csv"));
        CHECK_FALSE(sa.empty());
        CHECK(sa == slurp(dir / ("b." + std::string(mode) + ".csv")));
    }

    const auto j = nlohmann::json::parse(slurp(dir / "a.json"));
    CHECK(j["config"]["seed"] == 42);
    CHECK(j["modes"].size() == 3);
    CHECK(j["modes"]["estimation"]["seed"] == 43);
    CHECK(j["comparison"]["relative_distance"]["prediction"].get<double>() < 0.05);
    CHECK(j["be_I"].get<double>() > 0.0);
}

TEST_CASE("single-mode bootstrap with per-year comparison") {
    const auto dir = scratch_dir("single");
    const auto dump = (dir / "s.csv").string();
    const auto r = run_cli({"bootstrap", "--input", ref, "--iterations", "500", "--mode", "estimation", "--per-year",
                            "--dump-samples", dump, "--format", "csv"});
    REQUIRE(r.code == 0);
    CHECK(slurp(dump).rfind("iteration,paid_next_year,be_next_year,cdr,cdr_year_0", 0) == 0);
    CHECK(r.out.find("\n1,") != std::string::npos);
    CHECK(r.out.find("\nestimation,500,") != std::string::npos);

    const auto t = run_cli({"bootstrap", "--input", ref, "--iterations", "500", "--mode", "process", "--format", "table"});
    CHECK(t.code == 0);
    CHECK(t.out.find("process") != std::string::npos);
}

TEST_CASE("helpers") {
    CHECK(cli::seed_for(10, BootstrapMode::full) == 10);
    CHECK(cli::seed_for(10, BootstrapMode::process_only) == 12);
    CHECK(cli::dump_path_for("out/s.csv", BootstrapMode::full, false) == "out/s.csv");
    CHECK(cli::dump_path_for("out/s.csv", BootstrapMode::estimation_only, true) == "out/s.estimation.csv");
    CHECK(cli::dump_path_for("samples", BootstrapMode::full, true) == "samples.full");
    cli::RunConfig c;
    CHECK_THROWS(c.validate());
    c.input = "x.csv";
    CHECK_NOTHROW(c.validate());
    c.tail = true;
    CHECK_THROWS(c.validate());
}
