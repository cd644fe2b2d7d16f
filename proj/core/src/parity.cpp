#include "ptwell/parity.hpp"

#include <string>

#include "ptwell/error.hpp"

namespace ptwell {

GeneralizedParity make_parity(int k, int l) {
    if (k < 1) {
        throw InvalidInput("parity: channel count must be >= 1, got " + std::to_string(k));
    }
    if (l < 0 || l >= k) {
        throw InvalidInput("parity: rotation index must lie in [0, " + std::to_string(k) +
                           "), got " + std::to_string(l));
    }
    std::vector<int> perm(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        perm[static_cast<std::size_t>(j)] = (j + l) % k;
    }
    return GeneralizedParity(k, l, std::move(perm));
}

GeneralizedParity compose(const GeneralizedParity& a, const GeneralizedParity& b) {
    if (a.channels() != b.channels()) {
        throw InvalidInput("compose: channel counts differ (" + std::to_string(a.channels()) +
                           " vs " + std::to_string(b.channels()) + ")");
    }
    const int k = a.channels();
    GeneralizedParity out = make_parity(k, (a.index() + b.index()) % k);
    // (a b)(i, j) = 1 iff i = sigma_a(sigma_b(j)); the cyclic family is closed under it.
    for (int j = 0; j < k; ++j) {
        if (out.image(j) != a.image(b.image(j))) {
            throw NumericalFailure("compose: product left the cyclic family");
        }
    }
    return out;
}

GeneralizedParity power(const GeneralizedParity& p, int n) {
    if (n < 0) {
        throw InvalidInput("power: exponent must be non-negative");
    }
    GeneralizedParity out = make_parity(p.channels(), 0);
    for (int i = 0; i < n; ++i) {
        out = compose(out, p);
    }
    return out;
}

bool is_hermitian(const GeneralizedParity& p) {
    for (int j = 0; j < p.channels(); ++j) {
        if (p.image(p.image(j)) != j) {
            return false;
        }
    }
    return true;
}

GeneralizedParity adjoint_index(const GeneralizedParity& p) {
    const int k = p.channels();
    return make_parity(k, (k - p.index()) % k);
}

}  // namespace ptwell
