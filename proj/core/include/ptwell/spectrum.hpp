#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "ptwell/constraints.hpp"

namespace ptwell {

/// Eigenvalue of the coupling matrix. At a bound state it equals 2st and acts
/// as the strength of an effective single-channel imaginary step.
struct EffectiveCharge {
    std::complex<double> value;
    int multiplicity = 1;
    /// Orthonormal basis of the eigenspace (real when is_real).
    std::vector<Eigen::VectorXcd> channel_vectors;
    bool is_real = true;

    double real_value() const noexcept { return value.real(); }
};

/// Eigenvalues of A grouped by multiplicity, sorted ascending by (real, imag).
///
/// Eigenvalues closer than 1e-8 * max(1, ||A||_F) are merged into one charge;
/// a charge counts as real when |Im| <= 1e-9 * ||A||_F.
std::vector<EffectiveCharge> effective_charges(const CouplingMatrix& a);

/// 2s sin 2s + 2t sinh 2t.
double secular_residual(double s, double t);

/// The secular function on the hyperbola t = z / (2s):
/// h(s) = 2s sin 2s + (z/s) sinh(z/s). Even in z.
double secular_on_hyperbola(double s, double z);

struct RootPair {
    double s = 0.0;
    double t = 0.0;
    /// Double root (the hyperbola touches the curve); reported once.
    bool tangent = false;
};

struct RootOptions {
    double grid_step = 0.002;
    /// Bisection stops once the bracket is this narrow; Newton takes over.
    double bisection_width = 1e-6;
};

/// All roots of h(s) on (0, s_max], ascending in s, with |h(s)| <= tol.
/// z == 0 yields the Hermitian-well roots s = n pi / 2.
std::vector<RootPair> solve_roots(double z_eff, double s_max, double tol,
                                  const RootOptions& options = {});

/// Oval n >= 1 is the arch pi/2 + (n-1) pi <= s <= n pi where sin 2s <= 0.
/// Returns 0 when t == 0.
int oval_index(double s, double t);

struct SecularRoot {
    double s = 0.0;
    double t = 0.0;
    double z_eff = 0.0;
    double energy = 0.0;
    int oval_index = 0;
    int degeneracy = 1;
    bool tangent = false;
};

SecularRoot make_root(const RootPair& pair, double z_eff, int degeneracy);

struct Spectrum {
    int k = 0;
    /// Provenance, filled by callers that know it.
    std::optional<int> l;
    ParameterMap params;

    std::vector<SecularRoot> roots;
    std::vector<EffectiveCharge> charges;
    /// Charges with non-negligible imaginary part; their levels are not in roots.
    std::vector<std::complex<double>> complex_charges;
    double s_max = 20.0;
    double tol = 1e-12;
    bool all_real = true;

    /// Energies expanded by degeneracy, ascending.
    std::vector<double> level_energies() const;
};

inline constexpr double kDefaultSMax = 20.0;
inline constexpr double kDefaultTol = 1e-12;
/// Relative tolerance for merging coincident energies from distinct charges.
inline constexpr double kEnergyMergeTol = 1e-9;

Spectrum spectrum(const CouplingMatrix& a, double s_max = kDefaultSMax, double tol = kDefaultTol);

/// The tangency point on the first oval: h = dh/ds = 0 jointly.
struct Tangency {
    double s = 0.0;
    double z = 0.0;
    int iterations = 0;
};

/// Z_crit ~ 4.4753: beyond it the two lowest levels of the one-channel well turn complex.
double critical_coupling();
Tangency first_oval_tangency();

/// Factor c such that max |Z_eff| of c * A equals Z_crit. Throws BrokenSymmetry
/// when A has complex charges and InvalidInput when every charge vanishes.
double critical_scaling(const CouplingMatrix& a);

/// Solution of the matching problem in the two halves of the well.
struct BoundState {
    SecularRoot root;
    Eigen::VectorXcd amplitudes_left;
    Eigen::VectorXcd amplitudes_right;

    int channels() const noexcept { return static_cast<int>(amplitudes_left.size()); }
    std::complex<double> kappa_left() const { return {root.s, -root.t}; }
    std::complex<double> kappa_right() const { return {root.s, root.t}; }
};

/// C_L = channel_vector, C_R = C_L sin(kappa_L) / sin(kappa_R).
/// The vector must be an eigenvector of A for 2st and the root must solve the
/// secular equation; otherwise InvalidInput.
BoundState bound_state(const CouplingMatrix& a, const SecularRoot& root,
                       const Eigen::VectorXcd& channel_vector);

/// phi^(m)(x), x in [-1, 1]; m is 0-based.
std::complex<double> evaluate_wavefunction(const BoundState& state, int m, double x);

struct ShiftedCharges {
    double shift = 0.0;
    /// Eigenvalues of A - shift * I, ascending by (real, imag), with repetition.
    std::vector<std::complex<double>> eigenvalues;
};

/// Shift by the mean of the (at most two) distinct diagonal values.
ShiftedCharges shifted_charges(const CouplingMatrix& a);

}  // namespace ptwell
