#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "ptwell/error.hpp"
#include "ptwell/export.hpp"

using namespace ptwell;
using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, sep)) {
        out.push_back(cell);
    }
    return out;
}

Spectrum sample_spectrum() {
    Eigen::MatrixXd m(3, 3);
    m << 0, 1, 1, 1, 0, 1, 1, 1, 0;
    Spectrum s = spectrum(CouplingMatrix(m), 10.0);
    s.l = 1;
    s.params = {{"Z", 0.0}, {"p1", 1.0}};
    return s;
}

}  // namespace

TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(0.1, 3) == "0.1");
    CHECK(format_number(2.0) == "2");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("precision from the environment") {
    ::unsetenv("PTWELL_PRECISION");
    CHECK(output_precision() == 17);
    ::setenv("PTWELL_PRECISION", "6", 1);
    CHECK(output_precision() == 6);
    ::setenv("PTWELL_PRECISION", "40", 1);
    CHECK(output_precision() == 17);
    ::setenv("PTWELL_PRECISION", "abc", 1);
    CHECK(output_precision() == 17);
    ::unsetenv("PTWELL_PRECISION");
}

TEST_CASE("pattern JSON round trip") {
    for (int k = 1; k <= 6; ++k) {
        for (int l = 0; l < k; ++l) {
            const CouplingPattern p = solve_pattern(k, l);
            const std::string text = pattern_to_json(p);
            const CouplingPattern back = pattern_from_json(text);
            CHECK(back.k == k);
            CHECK(back.l == l);
            CHECK(same_partition(p, back));
            CHECK(back.labels == p.labels);
        }
    }
    const json doc = json::parse(pattern_to_json(solve_pattern(2, 1)));
    CHECK(doc["orbits"][0] == json::parse("[[1,1],[2,2]]"));
    CHECK(doc["labels"] == json::parse(R"(["Z","p1","p2"])"));
    const CouplingPattern free = solve_pattern(2, 1, ConstraintMode::unconstrained);
    CHECK(pattern_from_json(pattern_to_json(free)).mode == ConstraintMode::unconstrained);
}

TEST_CASE("malformed pattern JSON") {
    CHECK_THROWS_AS(pattern_from_json("not json"), InvalidInput);
    CHECK_THROWS_AS(pattern_from_json(R"({"K":2,"L":1,"orbits":[[[1,1]]],"labels":["Z"]})"), InvalidInput);
    CHECK_THROWS_AS(
        pattern_from_json(R"({"K":1,"L":0,"orbits":[[[1,1]],[[1,1]]],"labels":["Z","p1"]})"),
        InvalidInput);
    CHECK_THROWS_AS(pattern_from_json(R"({"K":1,"L":0,"orbits":[[[3,1]]],"labels":["Z"]})"), InvalidInput);
    CHECK_THROWS_AS(pattern_from_json(R"({"K":1,"L":0,"orbits":[[[1,1]]],"labels":[]})"), InvalidInput);
}

TEST_CASE("pattern table") {
    const std::string table = pattern_to_table(solve_pattern(3, 1));
    CHECK(table == "K = 3, L = 1, 2 free parameters\nZ  p1 p1\np1 Z  p1\np1 p1 Z \n");
}

TEST_CASE("spectrum CSV round trips every root") {
    const Spectrum s = sample_spectrum();
    std::stringstream in(spectrum_to_csv(s));
    std::string line;
    std::getline(in, line);
    CHECK(line == "n,oval,s,t,z_eff,E,degeneracy");
    std::size_t i = 0;
    while (std::getline(in, line)) {
        REQUIRE(i < s.roots.size());
        const auto cells = split(line, ',');
        REQUIRE(cells.size() == 7);
        const SecularRoot& r = s.roots[i];
        CHECK(std::stoi(cells[0]) == static_cast<int>(i + 1));
        CHECK(std::stoi(cells[1]) == r.oval_index);
        CHECK(std::stod(cells[2]) == r.s);
        CHECK(std::stod(cells[3]) == r.t);
        CHECK(std::stod(cells[4]) == r.z_eff);
        CHECK(std::stod(cells[5]) == r.energy);
        CHECK(std::stoi(cells[6]) == r.degeneracy);
        ++i;
    }
    CHECK(i == s.roots.size());
}

TEST_CASE("spectrum JSON") {
    const Spectrum s = sample_spectrum();
    const json doc = json::parse(spectrum_to_json(s));
    CHECK(doc["K"] == 3);
    CHECK(doc["L"] == 1);
    CHECK(doc["all_real"] == true);
    CHECK(doc["params"]["p1"] == 1.0);
    REQUIRE(doc["roots"].size() == s.roots.size());
    for (std::size_t i = 0; i < s.roots.size(); ++i) {
        CHECK(doc["roots"][i]["E"].get<double>() == s.roots[i].energy);
        CHECK(doc["roots"][i]["degeneracy"] == s.roots[i].degeneracy);
    }
    CHECK(doc["charges"].size() == 2);
}

TEST_CASE("spectrum table lists complex charges") {
    Eigen::MatrixXd rot(2, 2);
    rot << 0, 1, -1, 0;
    const std::string table = spectrum_to_table(spectrum(CouplingMatrix(rot)), 6);
    CHECK(table.find("complex effective charges") != std::string::npos);
}

TEST_CASE("validation JSON") {
    ValidationReport r;
    r.k = 2;
    r.n = 100;
    r.n_levels = 5;
    r.max_rel_error = 1e-4;
    r.residuals["pseudo_hermiticity"] = 0.0;
    json doc = json::parse(validation_to_json(r));
    CHECK(doc["N"] == 100);
    CHECK_FALSE(doc.contains("convergence_ratio"));
    r.convergence_ratio = 4.0;
    doc = json::parse(validation_to_json(r));
    CHECK(doc["convergence_ratio"] == 4.0);
    CHECK(doc["residuals"]["pseudo_hermiticity"] == 0.0);
}
