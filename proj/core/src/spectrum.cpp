#include "ptwell/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "ptwell/error.hpp"

namespace ptwell {
namespace {

constexpr double kPi = std::numbers::pi;

bool complex_less(const std::complex<double>& a, const std::complex<double>& b) {
    if (a.real() != b.real()) {
        return a.real() < b.real();
    }
    return a.imag() < b.imag();
}

// g(u) = u sinh u and its first two derivatives.
struct GTerms {
    double g, g1, g2;
};

GTerms g_terms(double u) {
    const double sh = std::sinh(u);
    const double ch = std::cosh(u);
    return {u * sh, sh + u * ch, 2.0 * ch + u * sh};
}

double h_value(double s, double z) { return secular_on_hyperbola(s, z); }

double h_ds(double s, double z) {
    const double u = z / s;
    return 2.0 * std::sin(2.0 * s) + 4.0 * s * std::cos(2.0 * s) - (u / s) * g_terms(u).g1;
}

double h_dss(double s, double z) {
    const double u = z / s;
    const GTerms g = g_terms(u);
    return 8.0 * std::cos(2.0 * s) - 8.0 * s * std::sin(2.0 * s) +
           (2.0 * u * g.g1 + u * u * g.g2) / (s * s);
}

double h_dz(double s, double z) {
    const double u = z / s;
    return g_terms(u).g1 / s;
}

double h_dsz(double s, double z) {
    const double u = z / s;
    const GTerms g = g_terms(u);
    return -(g.g1 + u * g.g2) / (s * s);
}

// Root of f in [lo, hi] where f(lo) and f(hi) differ in sign: bisection down to
// `width`, then bracketed Newton until |f| <= tol.
template <class F, class DF>
double polish_root(F f, DF df, double lo, double hi, double width, double tol) {
    double flo = f(lo);
    if (flo == 0.0) {
        return lo;
    }
    double fhi = f(hi);
    if (fhi == 0.0) {
        return hi;
    }
    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) {
            return mid;
        }
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    double x = 0.5 * (lo + hi);
    for (int iter = 0; iter < 100; ++iter) {
        const double fx = f(x);
        if (std::abs(fx) <= tol) {
            return x;
        }
        if ((fx > 0.0) == (flo > 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        const double d = df(x);
        double next = (d != 0.0) ? x - fx / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (next == x || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x)) {
            break;
        }
        x = next;
    }
    if (std::abs(f(x)) <= tol) {
        return x;
    }
    throw NumericalFailure("root polish stalled at |h| = " + std::to_string(std::abs(f(x))) +
                           " above tol = " + std::to_string(tol));
}

// Minimizer of h(., z) inside [lo, hi], located as the zero of dh/ds.
double local_minimum(double z, double lo, double hi) {
    auto d1 = [z](double s) { return h_ds(s, z); };
    auto d2 = [z](double s) { return h_dss(s, z); };
    if (d1(lo) >= 0.0 || d1(hi) <= 0.0) {
        // Not bracketed; golden-section on h itself.
        const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
        double a = lo, b = hi;
        for (int i = 0; i < 200 && b - a > 1e-15 * b; ++i) {
            const double c = b - ratio * (b - a);
            const double d = a + ratio * (b - a);
            if (h_value(c, z) < h_value(d, z)) {
                b = d;
            } else {
                a = c;
            }
        }
        return 0.5 * (a + b);
    }
    double x = 0.5 * (lo + hi);
    for (int iter = 0; iter < 100; ++iter) {
        const double fx = d1(x);
        if (fx == 0.0) {
            return x;
        }
        if (fx < 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        const double d = d2(x);
        double next = (d != 0.0) ? x - fx / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - x) <= 1e-15 * x) {
            return next;
        }
        x = next;
    }
    return x;
}

Eigen::VectorXcd gauge_fixed(Eigen::VectorXcd v) {
    v.normalize();
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    const std::complex<double> phase = v(imax) / std::abs(v(imax));
    return v / phase;
}

}  // namespace

std::vector<EffectiveCharge> effective_charges(const CouplingMatrix& a) {
    const Eigen::MatrixXd& m = a.entries();
    const int k = a.channels();
    const double norm = m.norm();
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("effective_charges: eigenvalue iteration did not converge");
    }
    std::vector<std::complex<double>> values(solver.eigenvalues().data(),
                                             solver.eigenvalues().data() + k);

    // Union-find over eigenvalues closer than the merge tolerance.
    const double merge_tol = 1e-8 * std::max(1.0, norm);
    std::vector<int> parent(static_cast<std::size_t>(k));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&parent](int i) {
        while (parent[static_cast<std::size_t>(i)] != i) {
            i = parent[static_cast<std::size_t>(i)];
        }
        return i;
    };
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            if (std::abs(values[static_cast<std::size_t>(i)] - values[static_cast<std::size_t>(j)]) <=
                merge_tol) {
                parent[static_cast<std::size_t>(find(j))] = find(i);
            }
        }
    }

    std::vector<EffectiveCharge> charges;
    std::vector<int> seen_roots;
    for (int i = 0; i < k; ++i) {
        const int root = find(i);
        if (std::find(seen_roots.begin(), seen_roots.end(), root) != seen_roots.end()) {
            continue;
        }
        seen_roots.push_back(root);
        std::complex<double> sum = 0.0;
        int count = 0;
        for (int j = 0; j < k; ++j) {
            if (find(j) == root) {
                sum += values[static_cast<std::size_t>(j)];
                ++count;
            }
        }
        EffectiveCharge charge;
        charge.value = sum / static_cast<double>(count);
        charge.multiplicity = count;
        charge.is_real = std::abs(charge.value.imag()) <= 1e-9 * norm;
        if (charge.is_real) {
            charge.value = {charge.value.real(), 0.0};
            const Eigen::MatrixXd shifted =
                m - charge.value.real() * Eigen::MatrixXd::Identity(k, k);
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(shifted, Eigen::ComputeFullV);
            for (int c = 0; c < count; ++c) {
                Eigen::VectorXcd v = svd.matrixV().col(k - 1 - c).cast<std::complex<double>>();
                charge.channel_vectors.push_back(gauge_fixed(std::move(v)));
            }
        } else {
            const Eigen::MatrixXcd shifted = m.cast<std::complex<double>>() -
                                             charge.value * Eigen::MatrixXcd::Identity(k, k);
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted, Eigen::ComputeFullV);
            for (int c = 0; c < count; ++c) {
                charge.channel_vectors.push_back(gauge_fixed(svd.matrixV().col(k - 1 - c)));
            }
        }
        charges.push_back(std::move(charge));
    }
    std::sort(charges.begin(), charges.end(),
              [](const auto& x, const auto& y) { return complex_less(x.value, y.value); });
    return charges;
}

double secular_residual(double s, double t) {
    return 2.0 * s * std::sin(2.0 * s) + 2.0 * t * std::sinh(2.0 * t);
}

double secular_on_hyperbola(double s, double z) {
    const double u = z / s;
    return 2.0 * s * std::sin(2.0 * s) + u * std::sinh(u);
}

std::vector<RootPair> solve_roots(double z_eff, double s_max, double tol, const RootOptions& options) {
    if (!std::isfinite(z_eff)) {
        throw InvalidInput("solve_roots: z_eff is not finite");
    }
    if (!(s_max > 0.0) || !std::isfinite(s_max)) {
        throw InvalidInput("solve_roots: s_max must be positive and finite");
    }
    if (!(tol > 0.0)) {
        throw InvalidInput("solve_roots: tol must be positive");
    }
    if (!(options.grid_step > 0.0) || !(options.bisection_width > 0.0)) {
        throw InvalidInput("solve_roots: grid step and bisection width must be positive");
    }

    std::vector<RootPair> roots;
    if (z_eff == 0.0) {
        for (int n = 1; n * kPi / 2.0 <= s_max; ++n) {
            roots.push_back({n * kPi / 2.0, 0.0, false});
        }
        return roots;
    }

    auto f = [z_eff](double s) { return h_value(s, z_eff); };
    auto df = [z_eff](double s) { return h_ds(s, z_eff); };
    auto push = [&](double s, bool tangent) {
        roots.push_back({s, z_eff / (2.0 * s), tangent});
    };

    // Outside the ovals sin 2s > 0 and both terms of h are positive.
    for (int n = 1;; ++n) {
        const double a = kPi / 2.0 + (n - 1) * kPi;
        if (a > s_max) {
            break;
        }
        const double b = std::min(n * kPi, s_max);
        const int cells = std::max(2, static_cast<int>(std::ceil((b - a) / options.grid_step)));
        const double step = (b - a) / cells;
        std::vector<double> grid(static_cast<std::size_t>(cells + 1));
        std::vector<double> values(grid.size());
        for (int i = 0; i <= cells; ++i) {
            grid[static_cast<std::size_t>(i)] = (i == cells) ? b : a + i * step;
            values[static_cast<std::size_t>(i)] = f(grid[static_cast<std::size_t>(i)]);
        }
        for (int i = 0; i < cells; ++i) {
            const double v0 = values[static_cast<std::size_t>(i)];
            const double v1 = values[static_cast<std::size_t>(i + 1)];
            const double s0 = grid[static_cast<std::size_t>(i)];
            const double s1 = grid[static_cast<std::size_t>(i + 1)];
            if ((v0 > 0.0) != (v1 > 0.0)) {
                push(polish_root(f, df, s0, s1, options.bisection_width, tol), false);
            }
            // A positive grid minimum may hide a double root or a pair of roots
            // closer together than one cell.
            if (i >= 1 && v0 > 0.0 && v1 > 0.0 && values[static_cast<std::size_t>(i - 1)] > 0.0 &&
                v0 <= values[static_cast<std::size_t>(i - 1)] && v0 <= v1) {
                const double lo = grid[static_cast<std::size_t>(i - 1)];
                const double sm = local_minimum(z_eff, lo, s1);
                const double hm = f(sm);
                if (std::abs(hm) <= tol) {
                    push(sm, true);
                } else if (hm < 0.0) {
                    push(polish_root(f, df, lo, sm, options.bisection_width, tol), false);
                    push(polish_root(f, df, sm, s1, options.bisection_width, tol), false);
                }
            }
        }
    }
    std::sort(roots.begin(), roots.end(), [](const auto& x, const auto& y) { return x.s < y.s; });
    return roots;
}

int oval_index(double s, double t) {
    if (t == 0.0) {
        return 0;
    }
    return static_cast<int>(std::ceil(s / kPi));
}

SecularRoot make_root(const RootPair& pair, double z_eff, int degeneracy) {
    SecularRoot root;
    root.s = pair.s;
    root.t = pair.t;
    root.z_eff = z_eff;
    root.energy = pair.s * pair.s - pair.t * pair.t;
    root.oval_index = oval_index(pair.s, pair.t);
    root.degeneracy = degeneracy;
    root.tangent = pair.tangent;
    return root;
}

std::vector<double> Spectrum::level_energies() const {
    std::vector<double> out;
    for (const SecularRoot& root : roots) {
        out.insert(out.end(), static_cast<std::size_t>(root.degeneracy), root.energy);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Spectrum spectrum(const CouplingMatrix& a, double s_max, double tol) {
    Spectrum out;
    out.k = a.channels();
    out.s_max = s_max;
    out.tol = tol;
    out.charges = effective_charges(a);

    std::vector<SecularRoot> raw;
    for (const EffectiveCharge& charge : out.charges) {
        if (!charge.is_real) {
            out.all_real = false;
            out.complex_charges.push_back(charge.value);
            continue;
        }
        for (const RootPair& pair : solve_roots(charge.real_value(), s_max, tol)) {
            raw.push_back(make_root(pair, charge.real_value(), charge.multiplicity));
        }
    }
    std::stable_sort(raw.begin(), raw.end(), [](const auto& x, const auto& y) {
        if (x.energy != y.energy) {
            return x.energy < y.energy;
        }
        return x.z_eff < y.z_eff;
    });
    for (const SecularRoot& root : raw) {
        if (!out.roots.empty()) {
            SecularRoot& last = out.roots.back();
            const double scale = std::max(std::abs(last.energy), std::abs(root.energy));
            if (last.z_eff != root.z_eff && std::abs(last.energy - root.energy) <= kEnergyMergeTol * scale) {
                last.degeneracy += root.degeneracy;
                last.tangent = last.tangent || root.tangent;
                continue;
            }
        }
        out.roots.push_back(root);
    }
    return out;
}

Tangency first_oval_tangency() {
    // Coarse scan: the first z at which the first oval no longer dips below zero.
    const double lo = kPi / 2.0;
    const double hi = kPi;
    const int cells = 400;
    auto oval_min = [&](double z) {
        double best_s = lo;
        double best_h = h_value(lo, z);
        for (int i = 1; i <= cells; ++i) {
            const double s = lo + (hi - lo) * i / cells;
            const double v = h_value(s, z);
            if (v < best_h) {
                best_h = v;
                best_s = s;
            }
        }
        return std::pair{best_s, best_h};
    };
    double z = 0.0;
    double s = 0.0;
    for (double zc = 4.0; zc <= 5.0; zc += 0.01) {
        const auto [sm, hm] = oval_min(zc);
        if (hm > 0.0) {
            z = zc;
            s = sm;
            break;
        }
    }
    if (z == 0.0) {
        throw NumericalFailure("critical_coupling: coarse scan found no tangency in [4, 5]");
    }
    for (int iter = 1; iter <= 50; ++iter) {
        const double f1 = h_value(s, z);
        const double f2 = h_ds(s, z);
        const double j11 = h_ds(s, z), j12 = h_dz(s, z);
        const double j21 = h_dss(s, z), j22 = h_dsz(s, z);
        const double det = j11 * j22 - j12 * j21;
        if (det == 0.0 || !std::isfinite(det)) {
            break;
        }
        const double ds = (f1 * j22 - f2 * j12) / det;
        const double dz = (j11 * f2 - j21 * f1) / det;
        s -= ds;
        z -= dz;
        if (std::abs(dz) <= 1e-14 * z && std::abs(ds) <= 1e-14 * s) {
            return {s, z, iter};
        }
        if (iter >= 8 && std::abs(dz) <= 1e-8) {
            return {s, z, iter};
        }
    }
    throw NumericalFailure("critical_coupling: tangency Newton iteration did not converge");
}

double critical_coupling() {
    static const double value = first_oval_tangency().z;
    return value;
}

double critical_scaling(const CouplingMatrix& a) {
    double largest = 0.0;
    for (const EffectiveCharge& charge : effective_charges(a)) {
        if (!charge.is_real) {
            throw BrokenSymmetry("critical_scaling: coupling matrix has complex effective charges");
        }
        largest = std::max(largest, std::abs(charge.real_value()));
    }
    if (largest == 0.0) {
        throw InvalidInput("critical_scaling: every effective charge vanishes");
    }
    return critical_coupling() / largest;
}

BoundState bound_state(const CouplingMatrix& a, const SecularRoot& root,
                       const Eigen::VectorXcd& channel_vector) {
    const int k = a.channels();
    if (channel_vector.size() != k) {
        throw InvalidInput("bound_state: channel vector has wrong length");
    }
    const double vnorm = channel_vector.norm();
    if (!(vnorm > 0.0)) {
        throw InvalidInput("bound_state: channel vector is zero");
    }
    if (std::abs(2.0 * root.s * root.t - root.z_eff) > 1e-10 * (1.0 + std::abs(root.z_eff))) {
        throw InvalidInput("bound_state: root is not on the hyperbola 2st = z_eff");
    }
    if (std::abs(secular_residual(root.s, root.t)) > 1e-9) {
        throw InvalidInput("bound_state: root does not solve the secular equation");
    }
    const Eigen::VectorXcd av = a.entries().cast<std::complex<double>>() * channel_vector;
    const double anorm = std::max(1.0, a.entries().norm());
    if ((av - root.z_eff * channel_vector).norm() > 1e-8 * anorm * vnorm) {
        throw InvalidInput("bound_state: channel vector is not an eigenvector for z_eff");
    }

    BoundState state;
    state.root = root;
    state.amplitudes_left = channel_vector;
    const std::complex<double> sin_left = std::sin(state.kappa_left());
    const std::complex<double> sin_right = std::sin(state.kappa_right());
    if (std::abs(sin_right) < 1e-14) {
        throw InvalidInput("bound_state: sin(kappa_R) vanishes; inconsistent root");
    }
    state.amplitudes_right = channel_vector * (sin_left / sin_right);
    return state;
}

std::complex<double> evaluate_wavefunction(const BoundState& state, int m, double x) {
    if (m < 0 || m >= state.channels()) {
        throw InvalidInput("evaluate_wavefunction: channel index out of range");
    }
    if (!(x >= -1.0 && x <= 1.0)) {
        throw InvalidInput("evaluate_wavefunction: x outside [-1, 1]");
    }
    if (x <= 0.0) {
        return state.amplitudes_left(m) * std::sin(state.kappa_left() * (x + 1.0));
    }
    return state.amplitudes_right(m) * std::sin(state.kappa_right() * (1.0 - x));
}

ShiftedCharges shifted_charges(const CouplingMatrix& a) {
    const Eigen::MatrixXd& m = a.entries();
    const int k = a.channels();
    std::vector<double> distinct;
    for (int i = 0; i < k; ++i) {
        const double d = m(i, i);
        const bool known = std::any_of(distinct.begin(), distinct.end(), [d](double e) {
            return std::abs(d - e) <= 1e-12 * std::max(1.0, std::abs(e));
        });
        if (!known) {
            distinct.push_back(d);
        }
    }
    if (distinct.size() > 2) {
        throw InvalidInput("shifted_charges: diagonal carries more than two distinct values");
    }
    ShiftedCharges out;
    out.shift = std::accumulate(distinct.begin(), distinct.end(), 0.0) /
                static_cast<double>(distinct.size());
    const Eigen::MatrixXd shifted = m - out.shift * Eigen::MatrixXd::Identity(k, k);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(shifted, false);
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("shifted_charges: eigenvalue iteration did not converge");
    }
    out.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + k);
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), complex_less);
    return out;
}

}  // namespace ptwell
