#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace ptwell {

/// Matrix position, 0-based.
struct Position {
    int row = 0;
    int col = 0;

    friend auto operator<=>(const Position&, const Position&) = default;
};

/// tau on {0..K-1}^2 such that the pseudo-Hermiticity constraint
/// A = r_(K,K-L) A^T r_(K,L) reads A[p] == A[tau(p)] for every p.
class EntryPermutation {
public:
    EntryPermutation(int k, std::vector<int> map) : k_(k), map_(std::move(map)) {}

    int channels() const noexcept { return k_; }
    Position operator()(Position p) const;
    /// Row-major flat index form.
    int apply(int flat) const { return map_.at(static_cast<std::size_t>(flat)); }
    std::span<const int> flat_map() const noexcept { return map_; }

private:
    int k_;
    std::vector<int> map_;
};

EntryPermutation entry_permutation(int k, int l);

enum class ConstraintMode {
    /// Solve A = r_(K,K-L) A^T r_(K,L).
    pseudo_hermitian,
    /// No constraint at all: every entry is its own orbit (K^2 couplings).
    unconstrained,
};

/// Disjoint orbits of matrix positions; one free real parameter per orbit.
///
/// Orbits are ordered by their row-major smallest position, so the orbit of
/// (0, 0) always comes first and carries the label "Z"; the rest are "p1", "p2", ...
/// Positions inside an orbit are sorted row-major.
struct CouplingPattern {
    int k = 0;
    int l = 0;
    ConstraintMode mode = ConstraintMode::pseudo_hermitian;
    std::vector<std::vector<Position>> orbits;
    std::vector<std::string> labels;

    int dimension() const noexcept { return static_cast<int>(orbits.size()); }
    /// Orbit index of a position.
    int orbit_of(Position p) const;
    /// K x K grid of labels.
    std::vector<std::vector<std::string>> label_grid() const;
};

CouplingPattern solve_pattern(int k, int l, ConstraintMode mode = ConstraintMode::pseudo_hermitian);

int pattern_dimension(int k, int l);

/// Same set of orbits (labels and ordering ignored).
bool same_partition(const CouplingPattern& a, const CouplingPattern& b);

/// Real K x K matrix of coupling strengths Z_(m,j); entries are always finite.
class CouplingMatrix {
public:
    explicit CouplingMatrix(Eigen::MatrixXd entries);

    int channels() const noexcept { return static_cast<int>(entries_.rows()); }
    const Eigen::MatrixXd& entries() const noexcept { return entries_; }
    double operator()(int row, int col) const { return entries_(row, col); }

private:
    Eigen::MatrixXd entries_;
};

using ParameterMap = std::map<std::string, double>;

/// Fill each orbit with its parameter value. Missing or extra labels and
/// non-finite values throw InvalidInput.
CouplingMatrix assemble(const CouplingPattern& pattern, const ParameterMap& params);

/// max_p |A[p] - A[tau(p)]|.
double verify_constraint(const CouplingMatrix& a, int k, int l);

/// Conjugate the pattern by a channel permutation: position (i, j) of the view
/// holds what (perm[i], perm[j]) held in the original. Labels are re-canonicalized.
CouplingPattern permuted_view(const CouplingPattern& pattern, std::span<const int> perm);

/// The coupling matrix viewed through the same channel relabeling.
CouplingMatrix permuted_view(const CouplingMatrix& a, std::span<const int> perm);

}  // namespace ptwell
