#include "ptwell/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ptwell/error.hpp"
#include "ptwell/parity.hpp"

namespace ptwell {
namespace {

int flat(int k, Position p) { return p.row * k + p.col; }

Position unflat(int k, int idx) { return Position{idx / k, idx % k}; }

void canonicalize(CouplingPattern& pattern) {
    for (auto& orbit : pattern.orbits) {
        std::sort(orbit.begin(), orbit.end());
    }
    std::sort(pattern.orbits.begin(), pattern.orbits.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    pattern.labels.clear();
    for (std::size_t i = 0; i < pattern.orbits.size(); ++i) {
        pattern.labels.push_back(i == 0 ? "Z" : "p" + std::to_string(i));
    }
}

void check_permutation(std::span<const int> perm, int k) {
    if (static_cast<int>(perm.size()) != k) {
        throw InvalidInput("permuted_view: permutation has " + std::to_string(perm.size()) +
                           " entries, expected " + std::to_string(k));
    }
    std::vector<bool> seen(static_cast<std::size_t>(k), false);
    for (int v : perm) {
        if (v < 0 || v >= k || seen[static_cast<std::size_t>(v)]) {
            throw InvalidInput("permuted_view: not a bijection of the channel indices");
        }
        seen[static_cast<std::size_t>(v)] = true;
    }
}

}  // namespace

Position EntryPermutation::operator()(Position p) const {
    return unflat(k_, apply(flat(k_, p)));
}

EntryPermutation entry_permutation(int k, int l) {
    const GeneralizedParity r = make_parity(k, l);
    // (r^T A^T r)(i, j) = A(sigma(j), sigma(i)).
    std::vector<int> map(static_cast<std::size_t>(k * k));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            map[static_cast<std::size_t>(flat(k, {i, j}))] = flat(k, {r.image(j), r.image(i)});
        }
    }
    return EntryPermutation(k, std::move(map));
}

int CouplingPattern::orbit_of(Position p) const {
    for (std::size_t i = 0; i < orbits.size(); ++i) {
        if (std::binary_search(orbits[i].begin(), orbits[i].end(), p)) {
            return static_cast<int>(i);
        }
    }
    throw InvalidInput("orbit_of: position outside the pattern");
}

std::vector<std::vector<std::string>> CouplingPattern::label_grid() const {
    std::vector<std::vector<std::string>> grid(static_cast<std::size_t>(k),
                                               std::vector<std::string>(static_cast<std::size_t>(k)));
    for (std::size_t i = 0; i < orbits.size(); ++i) {
        for (const Position& p : orbits[i]) {
            grid[static_cast<std::size_t>(p.row)][static_cast<std::size_t>(p.col)] = labels[i];
        }
    }
    return grid;
}

CouplingPattern solve_pattern(int k, int l, ConstraintMode mode) {
    const EntryPermutation tau = entry_permutation(k, l);
    CouplingPattern pattern{k, l, mode, {}, {}};
    const int n = k * k;
    if (mode == ConstraintMode::unconstrained) {
        for (int idx = 0; idx < n; ++idx) {
            pattern.orbits.push_back({unflat(k, idx)});
        }
        canonicalize(pattern);
        return pattern;
    }
    // tau is a bijection, so its cycles are exactly the orbits of the group it generates.
    std::vector<bool> visited(static_cast<std::size_t>(n), false);
    for (int start = 0; start < n; ++start) {
        if (visited[static_cast<std::size_t>(start)]) {
            continue;
        }
        std::vector<Position> orbit;
        for (int idx = start; !visited[static_cast<std::size_t>(idx)]; idx = tau.apply(idx)) {
            visited[static_cast<std::size_t>(idx)] = true;
            orbit.push_back(unflat(k, idx));
        }
        pattern.orbits.push_back(std::move(orbit));
    }
    canonicalize(pattern);
    return pattern;
}

int pattern_dimension(int k, int l) { return solve_pattern(k, l).dimension(); }

bool same_partition(const CouplingPattern& a, const CouplingPattern& b) {
    if (a.k != b.k) {
        return false;
    }
    std::set<std::vector<Position>> lhs(a.orbits.begin(), a.orbits.end());
    std::set<std::vector<Position>> rhs(b.orbits.begin(), b.orbits.end());
    return lhs == rhs;
}

CouplingMatrix::CouplingMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
        throw InvalidInput("coupling matrix must be square and non-empty");
    }
    if (!entries_.allFinite()) {
        throw InvalidInput("coupling matrix has non-finite entries");
    }
}

CouplingMatrix assemble(const CouplingPattern& pattern, const ParameterMap& params) {
    for (const auto& [label, value] : params) {
        if (std::find(pattern.labels.begin(), pattern.labels.end(), label) == pattern.labels.end()) {
            throw InvalidInput("assemble: unknown label '" + label + "'");
        }
        if (!std::isfinite(value)) {
            throw InvalidInput("assemble: value for '" + label + "' is not finite");
        }
    }
    Eigen::MatrixXd entries(pattern.k, pattern.k);
    for (std::size_t i = 0; i < pattern.orbits.size(); ++i) {
        auto it = params.find(pattern.labels[i]);
        if (it == params.end()) {
            throw InvalidInput("assemble: missing value for label '" + pattern.labels[i] + "'");
        }
        for (const Position& p : pattern.orbits[i]) {
            entries(p.row, p.col) = it->second;
        }
    }
    return CouplingMatrix(std::move(entries));
}

double verify_constraint(const CouplingMatrix& a, int k, int l) {
    if (a.channels() != k) {
        throw InvalidInput("verify_constraint: matrix is " + std::to_string(a.channels()) +
                           "x" + std::to_string(a.channels()) + ", expected K = " +
                           std::to_string(k));
    }
    const EntryPermutation tau = entry_permutation(k, l);
    double worst = 0.0;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const Position q = tau({i, j});
            worst = std::max(worst, std::abs(a(i, j) - a(q.row, q.col)));
        }
    }
    return worst;
}

CouplingPattern permuted_view(const CouplingPattern& pattern, std::span<const int> perm) {
    check_permutation(perm, pattern.k);
    std::vector<int> inverse(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        inverse[static_cast<std::size_t>(perm[i])] = static_cast<int>(i);
    }
    CouplingPattern view{pattern.k, pattern.l, pattern.mode, {}, {}};
    for (const auto& orbit : pattern.orbits) {
        std::vector<Position> moved;
        moved.reserve(orbit.size());
        for (const Position& p : orbit) {
            moved.push_back({inverse[static_cast<std::size_t>(p.row)],
                             inverse[static_cast<std::size_t>(p.col)]});
        }
        view.orbits.push_back(std::move(moved));
    }
    canonicalize(view);
    return view;
}

CouplingMatrix permuted_view(const CouplingMatrix& a, std::span<const int> perm) {
    check_permutation(perm, a.channels());
    const int k = a.channels();
    Eigen::MatrixXd out(k, k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            out(i, j) = a(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
        }
    }
    return CouplingMatrix(std::move(out));
}

}  // namespace ptwell
