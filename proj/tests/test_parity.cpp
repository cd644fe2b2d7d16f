#include <doctest.h>

#include "ptwell/error.hpp"
#include "ptwell/parity.hpp"
#include "support.hpp"

using namespace ptwell;

TEST_CASE("parity matrix is the L-fold cyclic shift") {
    for (int k = 1; k <= 9; ++k) {
        for (int l = 0; l < k; ++l) {
            const GeneralizedParity p = make_parity(k, l);
            const Eigen::MatrixXi r = testing::shift_matrix(k, l);
            CHECK(p.channels() == k);
            CHECK(p.index() == l);
            for (int i = 0; i < k; ++i) {
                for (int j = 0; j < k; ++j) {
                    CHECK(p.entry(i, j) == (r(i, j) == 1));
                }
            }
        }
    }
}

TEST_CASE("first sub-diagonal and top-right corner for L = 1") {
    const GeneralizedParity p = make_parity(4, 1);
    CHECK(p.entry(1, 0));
    CHECK(p.entry(2, 1));
    CHECK(p.entry(3, 2));
    CHECK(p.entry(0, 3));
    CHECK_FALSE(p.entry(0, 1));
}

TEST_CASE("K-th power is the identity and indices add under composition") {
    for (int k = 1; k <= 8; ++k) {
        for (int l = 0; l < k; ++l) {
            const GeneralizedParity p = make_parity(k, l);
            CHECK(power(p, k) == make_parity(k, 0));
            CHECK(power(p, 0) == make_parity(k, 0));
            for (int m = 0; m < k; ++m) {
                const GeneralizedParity q = make_parity(k, m);
                const GeneralizedParity pq = compose(p, q);
                CHECK(pq == make_parity(k, (l + m) % k));
                const Eigen::MatrixXi product = testing::shift_matrix(k, l) * testing::shift_matrix(k, m);
                for (int i = 0; i < k; ++i) {
                    for (int j = 0; j < k; ++j) {
                        CHECK(pq.entry(i, j) == (product(i, j) == 1));
                    }
                }
            }
        }
    }
}

TEST_CASE("adjoint is the transpose and the inverse") {
    for (int k = 1; k <= 8; ++k) {
        for (int l = 0; l < k; ++l) {
            const GeneralizedParity p = make_parity(k, l);
            const GeneralizedParity a = adjoint_index(p);
            CHECK(a.index() == (k - l) % k);
            CHECK(compose(p, a) == make_parity(k, 0));
            for (int i = 0; i < k; ++i) {
                for (int j = 0; j < k; ++j) {
                    CHECK(a.entry(i, j) == p.entry(j, i));
                }
            }
        }
    }
}

TEST_CASE("Hermitian exactly for L = 0 and 2L = K") {
    for (int k = 1; k <= 10; ++k) {
        for (int l = 0; l < k; ++l) {
            const Eigen::MatrixXi r = testing::shift_matrix(k, l);
            const bool symmetric = r == r.transpose();
            CHECK(is_hermitian(make_parity(k, l)) == symmetric);
            CHECK(symmetric == (l == 0 || 2 * l == k));
        }
    }
}

TEST_CASE("invalid indices are rejected") {
    CHECK_THROWS_AS(make_parity(0, 0), InvalidInput);
    CHECK_THROWS_AS(make_parity(3, 3), InvalidInput);
    CHECK_THROWS_AS(make_parity(3, -1), InvalidInput);
    CHECK_THROWS_AS(compose(make_parity(3, 1), make_parity(4, 1)), InvalidInput);
    CHECK_THROWS_AS(power(make_parity(3, 1), -1), InvalidInput);
}
