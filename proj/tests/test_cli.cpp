#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "ptwell/export.hpp"

using namespace ptwell;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "ptwell");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("pattern output matches the library") {
    const Result r = run_cli({"pattern", "--k", "4", "--l", "1"});
    CHECK(r.code == 0);
    CHECK(r.out == pattern_to_table(solve_pattern(4, 1)));
    const Result j = run_cli({"pattern", "--k", "6", "--l", "2", "--format", "json"});
    CHECK(j.out == pattern_to_json(solve_pattern(6, 2)));
    const Result d = run_cli({"pattern", "--k", "3"});
    CHECK(d.out == pattern_to_table(solve_pattern(3, 1)));
}

TEST_CASE("spectrum output matches the library") {
    const Result r = run_cli({"spectrum", "--k", "3", "--set", "Z=0", "--set", "p1=1", "--format", "csv"});
    CHECK(r.code == 0);
    Eigen::MatrixXd m(3, 3);
    m << 0, 1, 1, 1, 0, 1, 1, 1, 0;
    CHECK(r.out == spectrum_to_csv(spectrum(CouplingMatrix(m))));
    const Result again = run_cli({"spectrum", "--k", "3", "--set", "Z=0", "--set", "p1=1", "--format", "csv"});
    CHECK(again.out == r.out);
}

TEST_CASE("critical coupling") {
    const Result r = run_cli({"critical", "--format", "csv"});
    CHECK(r.code == 0);
    CHECK(r.out == "z_crit\n" + format_number(critical_coupling()) + "\n");
    const Result s = run_cli({"critical", "--k", "1", "--set", "Z=2", "--format", "csv"});
    CHECK(s.out == "z_crit,scale\n" + format_number(critical_coupling()) + "," +
                       format_number(critical_coupling() / 2.0) + "\n");
}

TEST_CASE("verify and metric") {
    const Result v = run_cli({"verify", "--k", "1", "--set", "Z=1", "--grid-n", "100", "--format", "json"});
    CHECK(v.code == 0);
    ValidationOptions o;
    o.n = 100;
    CHECK(v.out == validation_to_json(validate(CouplingMatrix(Eigen::MatrixXd::Constant(1, 1, 1.0)),
                                               make_parity(1, 0), o)));
    const Result m = run_cli({"metric", "--k", "1", "--set", "Z=1", "--grid-n", "40", "--format", "csv"});
    CHECK(m.code == 0);
    CHECK(m.out.rfind("quantity,value\nhermiticity,", 0) == 0);
}

TEST_CASE("exit codes") {
    CHECK(run_cli({}).code == cli::kInvalidInput);
    CHECK(run_cli({"pattern"}).code == cli::kInvalidInput);
    CHECK(run_cli({"pattern", "--k", "3", "--l", "3"}).code == cli::kInvalidInput);
    CHECK(run_cli({"spectrum", "--k", "2", "--set", "Z=1"}).code == cli::kInvalidInput);
    CHECK(run_cli({"spectrum", "--k", "1", "--set", "Z=1", "--set", "Q=2"}).code == cli::kInvalidInput);
    CHECK(run_cli({"spectrum", "--k", "1", "--set", "Z=abc"}).code == cli::kInvalidInput);
    CHECK(run_cli({"spectrum", "--k", "1", "--set", "Z=1", "--set", "Z=2"}).code == cli::kInvalidInput);
    CHECK(run_cli({"verify", "--k", "1", "--set", "Z=1", "--grid-n", "7"}).code == cli::kInvalidInput);
    CHECK(run_cli({"pattern", "--k", "2", "--format", "xml"}).code == cli::kInvalidInput);
    const Result broken = run_cli({"metric", "--k", "1", "--set", "Z=6", "--grid-n", "40"});
    CHECK(broken.code == cli::kBrokenSymmetry);
    CHECK(broken.err.find("broken") != std::string::npos);
    CHECK(run_cli({"verify", "--k", "2", "--l", "1", "--set", "Z=0", "--set", "p1=1", "--set", "p2=-1",
                   "--grid-n", "40"})
              .code == cli::kBrokenSymmetry);
    CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("output file") {
    const std::string path = "test_cli_output.txt";
    const Result r = run_cli({"pattern", "--k", "2", "--output", path});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream content;
    content << in.rdbuf();
    CHECK(content.str() == pattern_to_table(solve_pattern(2, 1)));
    std::remove(path.c_str());
}
