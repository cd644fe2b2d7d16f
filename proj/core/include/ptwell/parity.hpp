#pragma once

#include <span>
#include <vector>

namespace ptwell {

/// Channel part r_(K,L) of the pseudo-parity R_(K,L) = P r_(K,L).
///
/// Stored as the permutation sigma of channel indices (0-based) with
/// r(i, j) = 1 iff i == sigma(j). For L = 1, sigma(j) = j + 1 mod K, which puts
/// the spatial parity in the first sub-diagonal and the top-right corner.
/// The spatial reflection factor is not stored; it squares to the identity
/// and commutes with every channel permutation.
class GeneralizedParity {
public:
    int channels() const noexcept { return k_; }
    int index() const noexcept { return l_; }

    /// sigma(j), 0-based.
    int image(int j) const { return perm_.at(static_cast<std::size_t>(j)); }
    std::span<const int> permutation() const noexcept { return perm_; }

    /// Entry (i, j) of the 0/1 permutation matrix.
    bool entry(int i, int j) const { return image(j) == i; }

    friend bool operator==(const GeneralizedParity&, const GeneralizedParity&) = default;

private:
    friend GeneralizedParity make_parity(int k, int l);
    GeneralizedParity(int k, int l, std::vector<int> perm)
        : k_(k), l_(l), perm_(std::move(perm)) {}

    int k_;
    int l_;
    std::vector<int> perm_;
};

/// L-fold cyclic shift on K channels. Throws InvalidInput unless K >= 1 and 0 <= L < K.
GeneralizedParity make_parity(int k, int l);

/// Matrix product a * b; the rotation indices add modulo K.
GeneralizedParity compose(const GeneralizedParity& a, const GeneralizedParity& b);

/// n-fold product of p with itself (n >= 0).
GeneralizedParity power(const GeneralizedParity& p, int n);

/// The permutation matrix is symmetric, i.e. L == 0 or 2L == K.
bool is_hermitian(const GeneralizedParity& p);

/// r_(K,K-L), the transpose (and inverse) of r_(K,L).
GeneralizedParity adjoint_index(const GeneralizedParity& p);

}  // namespace ptwell
