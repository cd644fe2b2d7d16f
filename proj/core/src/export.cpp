#include "ptwell/export.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "ptwell/error.hpp"

namespace ptwell {

using nlohmann::json;

int output_precision() {
    const char* env = std::getenv("PTWELL_PRECISION");
    if (env == nullptr || *env == '\0') {
        return 17;
    }
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (*end != '\0' || value < 1 || value > 17) {
        return 17;
    }
    return static_cast<int>(value);
}

std::string format_number(double value, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, value);
    return buf;
}

std::string pattern_to_json(const CouplingPattern& pattern) {
    json orbits = json::array();
    for (const auto& orbit : pattern.orbits) {
        json entries = json::array();
        for (const Position& p : orbit) {
            entries.push_back({p.row + 1, p.col + 1});
        }
        orbits.push_back(std::move(entries));
    }
    json doc = {{"K", pattern.k}, {"L", pattern.l}, {"orbits", orbits}, {"labels", pattern.labels}};
    if (pattern.mode == ConstraintMode::unconstrained) {
        doc["mode"] = "unconstrained";
    }
    return doc.dump(2) + "\n";
}

CouplingPattern pattern_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("pattern JSON: ") + e.what());
    }
    try {
        CouplingPattern pattern;
        pattern.k = doc.at("K").get<int>();
        pattern.l = doc.at("L").get<int>();
        if (doc.contains("mode") && doc.at("mode").get<std::string>() == "unconstrained") {
            pattern.mode = ConstraintMode::unconstrained;
        }
        std::vector<int> seen(static_cast<std::size_t>(pattern.k * pattern.k), 0);
        for (const auto& orbit : doc.at("orbits")) {
            std::vector<Position> positions;
            for (const auto& entry : orbit) {
                const int row = entry.at(0).get<int>() - 1;
                const int col = entry.at(1).get<int>() - 1;
                if (row < 0 || row >= pattern.k || col < 0 || col >= pattern.k) {
                    throw InvalidInput("pattern JSON: position out of range");
                }
                ++seen[static_cast<std::size_t>(row * pattern.k + col)];
                positions.push_back({row, col});
            }
            std::sort(positions.begin(), positions.end());
            pattern.orbits.push_back(std::move(positions));
        }
        if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; })) {
            throw InvalidInput("pattern JSON: orbits do not partition the matrix");
        }
        pattern.labels = doc.at("labels").get<std::vector<std::string>>();
        if (pattern.labels.size() != pattern.orbits.size()) {
            throw InvalidInput("pattern JSON: label count differs from orbit count");
        }
        return pattern;
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("pattern JSON: ") + e.what());
    }
}

std::string pattern_to_table(const CouplingPattern& pattern) {
    const auto grid = pattern.label_grid();
    std::size_t width = 1;
    for (const auto& label : pattern.labels) {
        width = std::max(width, label.size());
    }
    std::ostringstream out;
    out << "K = " << pattern.k << ", L = " << pattern.l << ", " << pattern.dimension()
        << " free parameters\n";
    for (const auto& row : grid) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j > 0) {
                out << ' ';
            }
            out << row[j] << std::string(width - row[j].size(), ' ');
        }
        out << '\n';
    }
    return out.str();
}

std::string spectrum_to_csv(const Spectrum& spectrum, int precision) {
    std::ostringstream out;
    out << "n,oval,s,t,z_eff,E,degeneracy\n";
    int n = 1;
    for (const SecularRoot& r : spectrum.roots) {
        out << n++ << ',' << r.oval_index << ',' << format_number(r.s, precision) << ','
            << format_number(r.t, precision) << ',' << format_number(r.z_eff, precision) << ','
            << format_number(r.energy, precision) << ',' << r.degeneracy << '\n';
    }
    return out.str();
}

std::string spectrum_to_json(const Spectrum& spectrum) {
    json roots = json::array();
    int n = 1;
    for (const SecularRoot& r : spectrum.roots) {
        roots.push_back({{"n", n++},
                         {"oval", r.oval_index},
                         {"s", r.s},
                         {"t", r.t},
                         {"z_eff", r.z_eff},
                         {"E", r.energy},
                         {"degeneracy", r.degeneracy},
                         {"tangent", r.tangent}});
    }
    json charges = json::array();
    for (const EffectiveCharge& c : spectrum.charges) {
        charges.push_back({{"re", c.value.real()},
                           {"im", c.value.imag()},
                           {"multiplicity", c.multiplicity},
                           {"is_real", c.is_real}});
    }
    json complex_charges = json::array();
    for (const auto& c : spectrum.complex_charges) {
        complex_charges.push_back({c.real(), c.imag()});
    }
    json doc = {{"K", spectrum.k},
                {"params", spectrum.params},
                {"s_max", spectrum.s_max},
                {"tol", spectrum.tol},
                {"all_real", spectrum.all_real},
                {"charges", charges},
                {"complex_charges", complex_charges},
                {"roots", roots}};
    if (spectrum.l) {
        doc["L"] = *spectrum.l;
    }
    return doc.dump(2) + "\n";
}

std::string spectrum_to_table(const Spectrum& spectrum, int precision) {
    const int width = precision + 8;
    std::ostringstream out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%4s %5s %*s %*s %*s %*s %4s\n", "n", "oval", width, "s", width,
                  "t", width, "z_eff", width, "E", "deg");
    out << buf;
    int n = 1;
    for (const SecularRoot& r : spectrum.roots) {
        std::snprintf(buf, sizeof buf, "%4d %5d %*s %*s %*s %*s %4d%s\n", n++, r.oval_index, width,
                      format_number(r.s, precision).c_str(), width,
                      format_number(r.t, precision).c_str(), width,
                      format_number(r.z_eff, precision).c_str(), width,
                      format_number(r.energy, precision).c_str(), r.degeneracy,
                      r.tangent ? "  tangent" : "");
        out << buf;
    }
    if (!spectrum.all_real) {
        out << "complex effective charges (levels omitted):";
        for (const auto& c : spectrum.complex_charges) {
            out << ' ' << format_number(c.real(), precision) << (c.imag() < 0 ? "-" : "+")
                << format_number(std::abs(c.imag()), precision) << 'i';
        }
        out << '\n';
    }
    return out.str();
}

std::string validation_to_json(const ValidationReport& report) {
    json doc = {{"K", report.k},
                {"N", report.n},
                {"n_levels", report.n_levels},
                {"max_rel_error", report.max_rel_error},
                {"residuals", report.residuals}};
    if (report.convergence_ratio) {
        doc["convergence_ratio"] = *report.convergence_ratio;
    }
    return doc.dump(2) + "\n";
}

}  // namespace ptwell
