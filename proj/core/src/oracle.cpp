#include "ptwell/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "dense_eigen.hpp"
#include "ptwell/error.hpp"

namespace ptwell {
namespace {

using cd = std::complex<double>;

bool complex_less(const cd& a, const cd& b) {
    if (a.real() != b.real()) {
        return a.real() < b.real();
    }
    return a.imag() < b.imag();
}

// Eigenvalues closer than this (times ||H||) are treated as one cluster.
constexpr double kClusterTol = 1e-9;
// Levels with |Im E| <= kRealTol * ||H|| count as real.
constexpr double kRealTol = 1e-9;

Eigen::VectorXcd gauge_ket(const Eigen::VectorXcd& v, cd* phase_out) {
    Eigen::VectorXcd out = v / v.norm();
    Eigen::Index imax = 0;
    out.cwiseAbs().maxCoeff(&imax);
    const cd phase = out(imax) / std::abs(out(imax));
    *phase_out = phase;
    return out / phase;
}

struct Cluster {
    cd value;
    std::vector<int> members;
};

std::vector<Cluster> cluster_values(const Eigen::VectorXcd& values, double tol) {
    const int n = static_cast<int>(values.size());
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return complex_less(values(a), values(b)); });
    std::vector<Cluster> clusters;
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (int oi = 0; oi < n; ++oi) {
        const int i = order[static_cast<std::size_t>(oi)];
        if (used[static_cast<std::size_t>(i)]) {
            continue;
        }
        Cluster c{values(i), {i}};
        used[static_cast<std::size_t>(i)] = true;
        // Sorted by real part, so candidates lie within a short forward run.
        for (int oj = oi + 1; oj < n; ++oj) {
            const int j = order[static_cast<std::size_t>(oj)];
            if (values(j).real() - values(i).real() > tol) {
                break;
            }
            if (!used[static_cast<std::size_t>(j)] && std::abs(values(j) - values(i)) <= tol) {
                c.members.push_back(j);
                used[static_cast<std::size_t>(j)] = true;
            }
        }
        clusters.push_back(std::move(c));
    }
    return clusters;
}

// Biorthonormalize left vectors W against right vectors V inside one cluster.
void biorthonormalize(const Eigen::MatrixXcd& v, Eigen::MatrixXcd& w, const cd& value) {
    const Eigen::MatrixXcd gram = w.adjoint() * v;
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(gram);
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(gram);
    const auto& sv = svd.singularValues();
    const double rcond = sv(sv.size() - 1) / sv(0);
    if (!(rcond > 1e-10)) {
        throw NumericalFailure("biorthogonal_basis: cluster of " + std::to_string(v.cols()) +
                               " level(s) at E = (" + std::to_string(value.real()) + ", " +
                               std::to_string(value.imag()) +
                               ") is too close to an exceptional point to pair");
    }
    // W <- W G^{-H} gives W^H V = I.
    w = w * lu.inverse().adjoint();
}

std::vector<BiorthogonalPair> assemble_pairs(const Eigen::VectorXcd& values, Eigen::MatrixXcd right,
                                             Eigen::MatrixXcd left) {
    const int n = static_cast<int>(values.size());
    std::vector<BiorthogonalPair> pairs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        cd phase;
        Eigen::VectorXcd ket = gauge_ket(right.col(i), &phase);
        const double scale = right.col(i).norm();
        // Keep ketket^H ket unchanged: ket was divided by scale * phase.
        Eigen::VectorXcd ketket = left.col(i) * (scale * std::conj(phase));
        pairs[static_cast<std::size_t>(i)] = {values(i), std::move(ket), std::move(ketket)};
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const auto& a, const auto& b) { return complex_less(a.energy, b.energy); });
    return pairs;
}

Eigen::MatrixXcd gather(const Eigen::MatrixXcd& m, const std::vector<int>& cols) {
    Eigen::MatrixXcd out(m.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
        out.col(static_cast<Eigen::Index>(c)) = m.col(cols[c]);
    }
    return out;
}

void scatter(Eigen::MatrixXcd& m, const std::vector<int>& cols, const Eigen::MatrixXcd& block) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
        m.col(cols[c]) = block.col(static_cast<Eigen::Index>(c));
    }
}

}  // namespace

double DiscretizedHamiltonian::norm() const {
    return matrix.cwiseAbs().rowwise().sum().maxCoeff();
}

DiscretizedHamiltonian discretize(const CouplingMatrix& a, int n) {
    if (n < 4 || n % 2 != 0) {
        throw InvalidInput("discretize: grid size must be even and >= 4, got " + std::to_string(n));
    }
    const int k = a.channels();
    const double h = 2.0 / (n + 1);
    const double diag = 2.0 / (h * h);
    const double off = -1.0 / (h * h);

    DiscretizedHamiltonian out{k, n, h, {}, Eigen::MatrixXcd::Zero(k * n, k * n), a};
    out.grid.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        out.grid[static_cast<std::size_t>(j)] = -1.0 + (j + 1) * h;
    }
    for (int m = 0; m < k; ++m) {
        for (int j = 0; j < n; ++j) {
            const int row = out.index(m, j);
            out.matrix(row, row) += diag;
            if (j > 0) {
                out.matrix(row, out.index(m, j - 1)) += off;
            }
            if (j + 1 < n) {
                out.matrix(row, out.index(m, j + 1)) += off;
            }
            const double sign = out.grid[static_cast<std::size_t>(j)] < 0.0 ? 1.0 : -1.0;
            for (int c = 0; c < k; ++c) {
                out.matrix(row, out.index(c, j)) += cd(0.0, sign * a(m, c));
            }
        }
    }
    return out;
}

std::vector<EigenPair> eigensolve(const DiscretizedHamiltonian& h) {
    const detail::ComplexEigenDecomposition dec = detail::complex_eigen(h.matrix, false);
    std::vector<EigenPair> pairs;
    pairs.reserve(static_cast<std::size_t>(dec.values.size()));
    for (Eigen::Index i = 0; i < dec.values.size(); ++i) {
        pairs.push_back({dec.values(i), dec.right.col(i).normalized()});
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const auto& a, const auto& b) { return complex_less(a.energy, b.energy); });
    return pairs;
}

Eigen::MatrixXd realified(const DiscretizedHamiltonian& h) {
    const int half = h.n / 2;
    const int dim = h.k * h.n;
    const int block = h.k * half;
    // Basis index b < block: symmetric combination of (m, j) and its mirror;
    // b >= block: antisymmetric combination.
    auto point = [&](int b) { return (b % block) % half; };
    auto chan = [&](int b) { return (b % block) / half; };
    Eigen::MatrixXd out(dim, dim);
    double worst_imag = 0.0;
    for (int col = 0; col < dim; ++col) {
        const double rho = col < block ? 1.0 : -1.0;
        const int q = h.index(chan(col), point(col));
        const int qm = h.index(chan(col), h.n - 1 - point(col));
        for (int row = 0; row < dim; ++row) {
            const double sigma = row < block ? 1.0 : -1.0;
            const int p = h.index(chan(row), point(row));
            const int pm = h.index(chan(row), h.n - 1 - point(row));
            cd value = 0.5 * (h.matrix(p, q) + rho * h.matrix(p, qm) + sigma * h.matrix(pm, q) +
                              sigma * rho * h.matrix(pm, qm));
            // Similarity by diag(1, i): (sym, anti) picks up i, (anti, sym) picks up -i.
            if (sigma > 0.0 && rho < 0.0) {
                value *= cd(0.0, 1.0);
            } else if (sigma < 0.0 && rho > 0.0) {
                value *= cd(0.0, -1.0);
            }
            out(row, col) = value.real();
            worst_imag = std::max(worst_imag, std::abs(value.imag()));
        }
    }
    if (worst_imag > 1e-12 * std::max(1.0, h.norm())) {
        throw NumericalFailure("realified: operator is not PT-symmetric (imaginary defect " +
                               std::to_string(worst_imag) + ")");
    }
    return out;
}

std::vector<cd> eigenvalues(const DiscretizedHamiltonian& h, OracleSolver solver) {
    std::vector<cd> out;
    if (solver == OracleSolver::full) {
        const Eigen::VectorXcd values = detail::real_eigenvalues(realified(h));
        out.assign(values.data(), values.data() + values.size());
    } else {
        const Eigen::MatrixXd& a = h.coupling.entries();
        const Eigen::ComplexSchur<Eigen::MatrixXcd> schur(a.cast<cd>());
        if (schur.info() != Eigen::Success) {
            throw NumericalFailure("eigenvalues: Schur decomposition of the coupling matrix failed");
        }
        const double anorm = std::max(1.0, a.norm());
        out.reserve(static_cast<std::size_t>(h.k * h.n));
        for (int m = 0; m < h.k; ++m) {
            const cd u = schur.matrixT()(m, m);
            Eigen::VectorXcd values;
            if (std::abs(u.imag()) <= 1e-12 * anorm) {
                const DiscretizedHamiltonian block =
                    discretize(CouplingMatrix(Eigen::MatrixXd::Constant(1, 1, u.real())), h.n);
                values = detail::real_eigenvalues(realified(block));
            } else {
                DiscretizedHamiltonian block =
                    discretize(CouplingMatrix(Eigen::MatrixXd::Zero(1, 1)), h.n);
                for (int j = 0; j < h.n; ++j) {
                    const double sign = h.grid[static_cast<std::size_t>(j)] < 0.0 ? 1.0 : -1.0;
                    block.matrix(j, j) += cd(0.0, sign) * u;
                }
                values = detail::complex_eigen(block.matrix, false).values;
            }
            out.insert(out.end(), values.data(), values.data() + values.size());
        }
    }
    std::sort(out.begin(), out.end(), complex_less);
    return out;
}

Eigen::VectorXcd apply_pseudo_parity(const DiscretizedHamiltonian& h, const GeneralizedParity& p,
                                     const Eigen::VectorXcd& v) {
    if (p.channels() != h.k) {
        throw InvalidInput("pseudo-parity acts on " + std::to_string(p.channels()) +
                           " channels, Hamiltonian has " + std::to_string(h.k));
    }
    Eigen::VectorXcd out(v.size());
    for (int m = 0; m < h.k; ++m) {
        for (int j = 0; j < h.n; ++j) {
            out(h.index(p.image(m), h.n - 1 - j)) = v(h.index(m, j));
        }
    }
    return out;
}

double pseudo_hermiticity_residual(const DiscretizedHamiltonian& h, const GeneralizedParity& p) {
    if (p.channels() != h.k) {
        throw InvalidInput("pseudo_hermiticity_residual: parity acts on " +
                           std::to_string(p.channels()) + " channels, Hamiltonian has " +
                           std::to_string(h.k));
    }
    const int dim = h.k * h.n;
    // R e_c = e_{pi(c)} with pi(m, j) = (sigma(m), n - 1 - j).
    std::vector<int> pi(static_cast<std::size_t>(dim));
    std::vector<int> pi_inv(static_cast<std::size_t>(dim));
    for (int m = 0; m < h.k; ++m) {
        for (int j = 0; j < h.n; ++j) {
            const int from = h.index(m, j);
            const int to = h.index(p.image(m), h.n - 1 - j);
            pi[static_cast<std::size_t>(from)] = to;
            pi_inv[static_cast<std::size_t>(to)] = from;
        }
    }
    double worst = 0.0;
    for (int b = 0; b < dim; ++b) {
        for (int a = 0; a < dim; ++a) {
            const cd rh = h.matrix(pi_inv[static_cast<std::size_t>(a)], b);
            const cd hr = std::conj(h.matrix(pi[static_cast<std::size_t>(b)], a));
            worst = std::max(worst, std::abs(rh - hr));
        }
    }
    return worst;
}

double conjugate_pairing_defect(std::span<const cd> values, double scale) {
    double worst = 0.0;
    for (const cd& v : values) {
        if (v.imag() == 0.0) {
            continue;
        }
        double best = std::numeric_limits<double>::infinity();
        for (const cd& w : values) {
            best = std::min(best, std::abs(w - std::conj(v)));
        }
        worst = std::max(worst, best);
    }
    return worst / std::max(scale, std::numeric_limits<double>::min());
}

std::vector<BiorthogonalPair> biorthogonal_basis(const DiscretizedHamiltonian& h) {
    detail::ComplexEigenDecomposition dec = detail::complex_eigen(h.matrix, true);
    const double tol = kClusterTol * h.norm();
    for (const Cluster& c : cluster_values(dec.values, tol)) {
        const Eigen::MatrixXcd v = gather(dec.right, c.members);
        Eigen::MatrixXcd w = gather(dec.left, c.members);
        biorthonormalize(v, w, c.value);
        scatter(dec.left, c.members, w);
    }
    return assemble_pairs(dec.values, std::move(dec.right), std::move(dec.left));
}

std::vector<BiorthogonalPair> biorthogonal_basis(const DiscretizedHamiltonian& h,
                                                 const GeneralizedParity& p) {
    detail::ComplexEigenDecomposition dec = detail::complex_eigen(h.matrix, false);
    const double tol = kClusterTol * h.norm();
    const std::vector<Cluster> clusters = cluster_values(dec.values, tol);
    Eigen::MatrixXcd left(dec.right.rows(), dec.right.cols());
    for (const Cluster& c : clusters) {
        // R maps eigenvectors of H at E to eigenvectors of H^dagger at E, which pair
        // with the levels at conj(E).
        const cd partner_value = std::conj(c.value);
        const auto partner = std::find_if(clusters.begin(), clusters.end(), [&](const Cluster& o) {
            return std::abs(o.value - partner_value) <= tol && o.members.size() == c.members.size();
        });
        if (partner == clusters.end()) {
            throw NumericalFailure("biorthogonal_basis: no conjugate partner for E = (" +
                                   std::to_string(c.value.real()) + ", " +
                                   std::to_string(c.value.imag()) + ")");
        }
        const Eigen::MatrixXcd v = gather(dec.right, c.members);
        Eigen::MatrixXcd w(v.rows(), v.cols());
        for (std::size_t i = 0; i < partner->members.size(); ++i) {
            w.col(static_cast<Eigen::Index>(i)) =
                apply_pseudo_parity(h, p, dec.right.col(partner->members[i]));
        }
        biorthonormalize(v, w, c.value);
        scatter(left, c.members, w);
    }
    return assemble_pairs(dec.values, std::move(dec.right), std::move(left));
}

MetricTheta build_metric(std::span<const BiorthogonalPair> pairs, std::span<const double> weights) {
    if (pairs.empty()) {
        throw InvalidInput("build_metric: no biorthogonal pairs");
    }
    if (!weights.empty() && weights.size() != pairs.size()) {
        throw InvalidInput("build_metric: " + std::to_string(weights.size()) + " weights for " +
                           std::to_string(pairs.size()) + " pairs");
    }
    double scale = 0.0;
    for (const auto& pair : pairs) {
        scale = std::max(scale, std::abs(pair.energy));
    }
    for (const auto& pair : pairs) {
        if (std::abs(pair.energy.imag()) > kRealTol * std::max(1.0, scale)) {
            throw BrokenSymmetry("build_metric: complex energy (" + std::to_string(pair.energy.real()) +
                                 ", " + std::to_string(pair.energy.imag()) +
                                 "); no positive metric exists in the broken phase");
        }
    }
    MetricTheta theta;
    theta.weights.assign(pairs.size(), 1.0);
    if (!weights.empty()) {
        for (double c : weights) {
            if (!(c > 0.0) || !std::isfinite(c)) {
                throw InvalidInput("build_metric: weights must be positive and finite");
            }
        }
        theta.weights.assign(weights.begin(), weights.end());
    }
    const Eigen::Index dim = pairs.front().ketket.size();
    Eigen::MatrixXcd w(dim, static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        w.col(static_cast<Eigen::Index>(i)) = pairs[i].ketket * std::sqrt(theta.weights[i]);
    }
    theta.matrix = w * w.adjoint();
    return theta;
}

MetricDiagnostics metric_diagnostics(const MetricTheta& theta, const DiscretizedHamiltonian& h) {
    const Eigen::MatrixXcd& t = theta.matrix;
    const double tnorm = t.norm();
    MetricDiagnostics out;
    out.hermiticity = (t - t.adjoint()).norm() / tnorm;
    const Eigen::MatrixXcd sym = 0.5 * (t + t.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("metric_diagnostics: Hermitian eigensolver failed");
    }
    out.min_eigenvalue = solver.eigenvalues().minCoeff();
    out.quasi_hermiticity =
        (t * h.matrix - h.matrix.adjoint() * t).norm() / (tnorm * h.matrix.norm());
    return out;
}

double compare_spectra(const Spectrum& analytic, const DiscretizedHamiltonian& h, int n_levels) {
    if (analytic.k != h.k) {
        throw InvalidInput("compare_spectra: analytic spectrum has K = " + std::to_string(analytic.k) +
                           ", oracle has K = " + std::to_string(h.k));
    }
    const std::vector<cd> oracle = eigenvalues(h);
    return compare_spectra(analytic, oracle, n_levels);
}

double compare_spectra(const Spectrum& analytic, std::span<const cd> oracle, int n_levels) {
    if (n_levels < 1) {
        throw InvalidInput("compare_spectra: n_levels must be >= 1");
    }
    const std::vector<double> levels = analytic.level_energies();
    if (static_cast<int>(levels.size()) < n_levels) {
        if (!analytic.all_real) {
            throw BrokenSymmetry("compare_spectra: complex effective charges leave only " +
                                 std::to_string(levels.size()) + " real analytic levels");
        }
        throw InvalidInput("compare_spectra: only " + std::to_string(levels.size()) +
                           " analytic levels below s_max; raise s_max");
    }
    std::vector<cd> sorted(oracle.begin(), oracle.end());
    std::sort(sorted.begin(), sorted.end(), complex_less);

    // Window: up to the midpoint between the last compared level and the next distinct one.
    const double top = levels[static_cast<std::size_t>(n_levels - 1)];
    double cutoff = top + 0.01 * std::abs(top);
    for (std::size_t i = static_cast<std::size_t>(n_levels); i < levels.size(); ++i) {
        if (levels[i] > top + kEnergyMergeTol * std::abs(top)) {
            cutoff = 0.5 * (top + levels[i]);
            break;
        }
    }
    const auto analytic_count = std::count_if(levels.begin(), levels.end(),
                                              [cutoff](double e) { return e < cutoff; });
    const auto oracle_count =
        std::count_if(sorted.begin(), sorted.end(), [cutoff](const cd& e) { return e.real() < cutoff; });
    if (analytic_count != oracle_count) {
        throw NumericalFailure("compare_spectra: " + std::to_string(analytic_count) +
                               " analytic vs " + std::to_string(oracle_count) +
                               " oracle levels below E = " + std::to_string(cutoff));
    }
    double worst = 0.0;
    for (int i = 0; i < n_levels; ++i) {
        const cd e = sorted[static_cast<std::size_t>(i)];
        const double ref = levels[static_cast<std::size_t>(i)];
        if (std::abs(e.imag()) > 1e-6 * std::max(1.0, std::abs(e.real()))) {
            throw NumericalFailure("compare_spectra: oracle level " + std::to_string(i) +
                                   " is complex while the analytic level is real");
        }
        worst = std::max(worst, std::abs(e.real() - ref) / std::abs(ref));
    }
    return worst;
}

ValidationReport validate(const CouplingMatrix& a, const std::optional<GeneralizedParity>& parity,
                          const ValidationOptions& options) {
    if (options.convergence && (options.n / 2) % 2 != 0) {
        throw InvalidInput("validate: convergence check needs n divisible by 4");
    }
    ValidationReport report;
    report.k = a.channels();
    report.n = options.n;
    report.n_levels = options.n_levels;
    const Spectrum analytic = spectrum(a, options.s_max, options.tol);

    const DiscretizedHamiltonian h = discretize(a, options.n);
    const std::vector<cd> oracle = eigenvalues(h, options.solver);
    const double hnorm = h.norm();
    report.residuals["conjugate_pairing"] = conjugate_pairing_defect(oracle, hnorm);
    if (parity) {
        report.residuals["pseudo_hermiticity"] = pseudo_hermiticity_residual(h, *parity) / hnorm;
    }
    report.max_rel_error = compare_spectra(analytic, oracle, options.n_levels);
    if (options.convergence) {
        const DiscretizedHamiltonian coarse = discretize(a, options.n / 2);
        const double coarse_error = compare_spectra(analytic, eigenvalues(coarse, options.solver), options.n_levels);
        report.residuals["coarse_max_rel_error"] = coarse_error;
        report.convergence_ratio = coarse_error / report.max_rel_error;
    }
    return report;
}

}  // namespace ptwell
