#pragma once

#include <complex>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ptwell/constraints.hpp"
#include "ptwell/parity.hpp"
#include "ptwell/spectrum.hpp"

namespace ptwell {

/// Three-point finite-difference Hamiltonian of the coupled wells on (-1, 1).
///
/// Unknowns are ordered channel-major: index = m * n + j for channel m and
/// interior grid point x_j = -1 + (j + 1) h, j = 0..n-1, h = 2 / (n + 1).
/// With n even no grid point sits at x = 0. The potential block at x_j is
/// +i A for x_j < 0 and -i A for x_j > 0.
struct DiscretizedHamiltonian {
    int k = 0;
    int n = 0;
    double h = 0.0;
    std::vector<double> grid;
    Eigen::MatrixXcd matrix;
    CouplingMatrix coupling;

    int index(int channel, int point) const noexcept { return channel * n + point; }
    /// Max absolute row sum.
    double norm() const;
};

/// n >= 4 and even; otherwise InvalidInput.
DiscretizedHamiltonian discretize(const CouplingMatrix& a, int n);

struct EigenPair {
    std::complex<double> energy;
    /// Unit norm.
    Eigen::VectorXcd ket;
};

/// Every eigenpair from a dense complex nonsymmetric decomposition, ascending by
/// (real, imag).
std::vector<EigenPair> eigensolve(const DiscretizedHamiltonian& h);

enum class OracleSolver {
    /// One dense solve of the whole (K N) x (K N) matrix.
    full,
    /// H = I x T - i A x S; a complex Schur form A = Q U Q^H makes
    /// (Q x I)^H H (Q x I) block upper triangular with diagonal blocks
    /// T - i u_kk S, solved one N x N block at a time.
    channel_schur,
};

/// Eigenvalues only, ascending by (real, imag).
///
/// Spatial reflection P satisfies P H P = conj(H), so H is similar to a real
/// matrix; the real matrix is diagonalized instead of H.
std::vector<std::complex<double>> eigenvalues(const DiscretizedHamiltonian& h,
                                              OracleSolver solver = OracleSolver::full);

/// The real matrix similar to H used by eigenvalues().
Eigen::MatrixXd realified(const DiscretizedHamiltonian& h);

/// R v with R = (channel permutation) x (spatial reflection).
Eigen::VectorXcd apply_pseudo_parity(const DiscretizedHamiltonian& h, const GeneralizedParity& p,
                                     const Eigen::VectorXcd& v);

/// max |(R H - H^dagger R)_ab|.
double pseudo_hermiticity_residual(const DiscretizedHamiltonian& h, const GeneralizedParity& p);

/// Largest distance from an eigenvalue to the nearest conjugate of another,
/// relative to ||H||. Zero for an exactly PT-symmetric spectrum.
double conjugate_pairing_defect(std::span<const std::complex<double>> values, double scale);

struct BiorthogonalPair {
    std::complex<double> energy;
    /// H ket = E ket, largest component real positive, unit norm.
    Eigen::VectorXcd ket;
    /// H^dagger ketket = conj(E) ketket, ketket^H ket = 1.
    Eigen::VectorXcd ketket;
};

/// Ketkets from the left eigenvectors of H.
std::vector<BiorthogonalPair> biorthogonal_basis(const DiscretizedHamiltonian& h);

/// Ketkets built as R |n>, R the pseudo-parity of p.
std::vector<BiorthogonalPair> biorthogonal_basis(const DiscretizedHamiltonian& h,
                                                 const GeneralizedParity& p);

struct MetricTheta {
    Eigen::MatrixXcd matrix;
    std::vector<double> weights;
};

/// Theta = sum_n c_n |n>> <<n|. Empty weights mean c_n = 1. Throws
/// BrokenSymmetry when any energy is complex.
MetricTheta build_metric(std::span<const BiorthogonalPair> pairs, std::span<const double> weights = {});

struct MetricDiagnostics {
    /// ||Theta - Theta^dagger|| / ||Theta||.
    double hermiticity = 0.0;
    /// Smallest eigenvalue of (Theta + Theta^dagger) / 2.
    double min_eigenvalue = 0.0;
    /// ||Theta H - H^dagger Theta|| / (||Theta|| ||H||).
    double quasi_hermiticity = 0.0;
};

/// Frobenius norms throughout.
MetricDiagnostics metric_diagnostics(const MetricTheta& theta, const DiscretizedHamiltonian& h);

/// Worst relative deviation between the n_levels lowest analytic levels
/// (expanded by degeneracy) and the real parts of the lowest oracle eigenvalues.
double compare_spectra(const Spectrum& analytic, const DiscretizedHamiltonian& h, int n_levels);
double compare_spectra(const Spectrum& analytic, std::span<const std::complex<double>> oracle,
                       int n_levels);

struct ValidationReport {
    int k = 0;
    int n = 0;
    int n_levels = 0;
    double max_rel_error = 0.0;
    /// err(n / 2) / err(n), when requested.
    std::optional<double> convergence_ratio;
    std::map<std::string, double> residuals;
};

struct ValidationOptions {
    int n = 800;
    int n_levels = 5;
    double s_max = kDefaultSMax;
    double tol = kDefaultTol;
    bool convergence = false;
    OracleSolver solver = OracleSolver::channel_schur;
};

/// Analytic spectrum vs. oracle, plus pseudo-Hermiticity (when a parity is
/// given) and conjugate-pairing residuals of the discretized operator.
ValidationReport validate(const CouplingMatrix& a, const std::optional<GeneralizedParity>& parity,
                          const ValidationOptions& options);

}  // namespace ptwell
