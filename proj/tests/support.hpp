#pragma once

#include <algorithm>
#include <complex>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <boost/rational.hpp>
#include <Eigen/Core>

#include "ptwell/constraints.hpp"

namespace ptwell::testing {

/// Pattern read from a grid of labels, one string per row, labels separated by spaces.
inline CouplingPattern pattern_from_grid(const std::vector<std::vector<std::string>>& grid) {
    const int k = static_cast<int>(grid.size());
    std::map<std::string, std::vector<Position>> groups;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            groups[grid[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]].push_back({i, j});
        }
    }
    CouplingPattern p;
    p.k = k;
    for (auto& [label, orbit] : groups) {
        p.orbits.push_back(orbit);
        p.labels.push_back(label);
    }
    return p;
}

/// r_(K,L) as an integer matrix: r(i, j) = 1 iff i = j + L mod K.
inline Eigen::MatrixXi shift_matrix(int k, int l) {
    Eigen::MatrixXi r = Eigen::MatrixXi::Zero(k, k);
    for (int j = 0; j < k; ++j) {
        r((j + l) % k, j) = 1;
    }
    return r;
}

/// Dimension of {A : A = r_(K,K-L) A^T r_(K,L)} from exact Gaussian elimination.
inline int solution_space_dimension(int k, int l) {
    using Q = boost::rational<long long>;
    const int n = k * k;
    const Eigen::MatrixXi left = shift_matrix(k, (k - l) % k);
    const Eigen::MatrixXi right = shift_matrix(k, l);
    // Row (i, j): A(i, j) - sum_ab left(i, a) A(b, a) right(b, j) = 0.
    std::vector<std::vector<Q>> rows(static_cast<std::size_t>(n), std::vector<Q>(static_cast<std::size_t>(n)));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            auto& row = rows[static_cast<std::size_t>(i * k + j)];
            row[static_cast<std::size_t>(i * k + j)] += 1;
            for (int a = 0; a < k; ++a) {
                for (int b = 0; b < k; ++b) {
                    row[static_cast<std::size_t>(b * k + a)] -= left(i, a) * right(b, j);
                }
            }
        }
    }
    int rank = 0;
    for (int col = 0; col < n && rank < n; ++col) {
        int pivot = -1;
        for (int r = rank; r < n; ++r) {
            if (rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != Q(0)) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) {
            continue;
        }
        std::swap(rows[static_cast<std::size_t>(rank)], rows[static_cast<std::size_t>(pivot)]);
        const auto& prow = rows[static_cast<std::size_t>(rank)];
        for (int r = 0; r < n; ++r) {
            auto& row = rows[static_cast<std::size_t>(r)];
            if (r == rank || row[static_cast<std::size_t>(col)] == Q(0)) {
                continue;
            }
            const Q f = row[static_cast<std::size_t>(col)] / prow[static_cast<std::size_t>(col)];
            for (int c = 0; c < n; ++c) {
                row[static_cast<std::size_t>(c)] -= f * prow[static_cast<std::size_t>(c)];
            }
        }
        ++rank;
    }
    return n - rank;
}

/// Channel permutation perm with permuted_view(pattern, perm) equal to target, if any.
inline std::optional<std::vector<int>> find_channel_permutation(const CouplingPattern& pattern,
                                                                const CouplingPattern& target) {
    std::vector<int> perm(static_cast<std::size_t>(pattern.k));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        if (same_partition(permuted_view(pattern, perm), target)) {
            return perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::nullopt;
}

/// Parameters for `pattern` that reproduce the fixture grid filled with `values`,
/// given permuted_view(pattern, perm) == fixture.
inline ParameterMap parameters_through(const CouplingPattern& pattern, const std::vector<int>& perm,
                                       const std::vector<std::vector<std::string>>& fixture,
                                       const std::map<std::string, double>& values) {
    ParameterMap out;
    const int k = pattern.k;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const Position p{perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]};
            const std::string& label = pattern.labels[static_cast<std::size_t>(pattern.orbit_of(p))];
            out[label] = values.at(fixture[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        }
    }
    return out;
}

inline std::vector<std::vector<std::string>> grid(std::initializer_list<std::string> rows) {
    std::vector<std::vector<std::string>> out;
    for (const std::string& row : rows) {
        std::vector<std::string> cells;
        std::string cell;
        for (char c : row + " ") {
            if (c == ' ') {
                if (!cell.empty()) {
                    cells.push_back(cell);
                    cell.clear();
                }
            } else {
                cell += c;
            }
        }
        out.push_back(cells);
    }
    return out;
}

namespace fixtures {

inline const auto trojka = grid({"Z Y", "X Z"});
inline const auto ctyrka = grid({"Z X X", "X Z X", "X X Z"});
inline const auto ctyrdim = grid({"Z U D U", "L Z L D", "D U Z U", "L D L Z"});
inline const auto dimctyr = grid({"Z D U U", "D Z U U", "L L Z D", "L L D Z"});
inline const auto petidim = grid({"Z X D D X", "X Z X D D", "D X Z X D", "D D X Z X", "X D D X Z"});
inline const auto sestidim = grid({"Z Y G B F B", "X Z C F C G", "F B Z Y G B",
                                   "C G X Z C F", "G B F B Z Y", "C F C G X Z"});
inline const auto dimsesti = grid({"Z X X C D G", "X Z X G C D", "X X Z D G C",
                                   "C G D A B B", "D C G B A B", "G D C B B A"});
inline const auto sedmidim = grid({"Z X Y D D Y X", "X Z X Y D D Y", "Y X Z X Y D D",
                                   "D Y X Z X Y D", "D D Y X Z X Y", "Y D D Y X Z X",
                                   "X Y D D Y X Z"});

}  // namespace fixtures

/// Eigenvalues sorted by (real, imag) for comparison.
inline std::vector<std::complex<double>> sorted(std::vector<std::complex<double>> v) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return v;
}

/// Distance between two multisets of complex numbers of equal size, by greedy matching.
inline double multiset_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
    if (a.size() != b.size()) {
        return std::numeric_limits<double>::infinity();
    }
    double worst = 0.0;
    std::vector<bool> used(b.size(), false);
    for (const auto& x : a) {
        std::size_t best = b.size();
        double dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (!used[j] && std::abs(x - b[j]) < dist) {
                dist = std::abs(x - b[j]);
                best = j;
            }
        }
        used[best] = true;
        worst = std::max(worst, dist);
    }
    return worst;
}

}  // namespace ptwell::testing
