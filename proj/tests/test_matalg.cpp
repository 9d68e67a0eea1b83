#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "tricons/error.hpp"
#include "tricons/matalg.hpp"

using namespace tricons;

namespace {

Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(rows.size(), rows.begin()->size());
    std::size_t i = 0;
    for (const auto& row : rows) {
        std::size_t j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

} // namespace

TEST_CASE("eig_sym on small closed forms") {
    SUBCASE("identity") {
        const auto s = eig_sym(Matrix::identity(3));
        for (double lam : s.eigenvalues) CHECK(lam == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(s.zero_multiplicity == 0);
    }
    SUBCASE("[[2,1],[1,2]] has eigenvalues 1 and 3") {
        const auto s = eig_sym(from_rows({{2, 1}, {1, 2}}));
        CHECK(s.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(s.eigenvalues[1] == doctest::Approx(3.0).epsilon(1e-12));
    }
    SUBCASE("zero matrix is all kernel") {
        const auto s = eig_sym(Matrix(2, 2));
        CHECK(s.zero_multiplicity == 2);
        CHECK(s.eigenvalues[0] == 0.0);
    }
    SUBCASE("asymmetric input is rejected") {
        CHECK_THROWS_AS(eig_sym(from_rows({{1, 2}, {0, 1}})), Error);
    }
}

TEST_CASE("eig_sym residual and orthonormality on random symmetric matrices") {
    testutil::Rng rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.integer(1, 12));
        const Matrix m = testutil::random_symmetric(rng, n, 5.0);
        const auto s = eig_sym(m);
        REQUIRE(s.eigenvalues.size() == n);
        const double scale = std::max(1.0, m.max_abs());
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                double mv = 0.0, ortho = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    mv += m(i, k) * s.eigenvectors(k, j);
                    ortho += s.eigenvectors(k, i) * s.eigenvectors(k, j);
                }
                CHECK(std::abs(mv - s.eigenvalues[j] * s.eigenvectors(i, j)) < 1e-11 * scale);
                CHECK(std::abs(ortho - (i == j ? 1.0 : 0.0)) < 1e-10);
            }
        }
    }
}

TEST_CASE("pd_certificate closed forms") {
    SUBCASE("2I - ones off-diagonal is PD with the uniform certificate") {
        const auto res = pd_certificate({2, 2}, from_rows({{0, 1}, {1, 0}}));
        CHECK(res.positive_definite);
        REQUIRE(res.certificate.has_value());
        for (double v : *res.certificate) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("I - [[0,2],[2,0]] has eigenvalues -1 and 3: not PD") {
        const auto res = pd_certificate({1, 1}, from_rows({{0, 2}, {2, 0}}));
        CHECK_FALSE(res.positive_definite);
        CHECK_FALSE(res.certificate.has_value());
    }
    SUBCASE("negative entry in A is rejected") {
        CHECK_THROWS_AS(pd_certificate({1, 1}, from_rows({{0, -1}, {-1, 0}})), Error);
    }
    SUBCASE("example-1 first diagonal block is PD at the reference gains") {
        const Matrix a11 = from_rows({{0, 4, 0, 0, 1},
                                      {4, 0, 3, 10, 2},
                                      {0, 3, 0, 1, 0},
                                      {0, 10, 1, 0, 1},
                                      {1, 2, 0, 1, 0}});
        const auto res = pd_certificate({54.5, 13, 19.5, 36, 74}, a11);
        CHECK(res.positive_definite);  // eigenvalue oracle: min lambda > 0
        CHECK(eig_sym(from_rows({{54.5, -4, 0, 0, -1},
                                 {-4, 13, -3, -10, -2},
                                 {0, -3, 19.5, -1, 0},
                                 {0, -10, -1, 36, -1},
                                 {-1, -2, 0, -1, 74}}))
                  .eigenvalues.front() > 0.0);
        REQUIRE(res.certificate.has_value());
        for (double v : *res.certificate) CHECK(v > 0.0);
    }
    SUBCASE("dimension mismatch is rejected") {
        CHECK_THROWS_AS(pd_certificate({1, 1, 1}, from_rows({{0, 1}, {1, 0}})), Error);
    }
}

TEST_CASE("pd_certificate agrees with the eigenvalue oracle on 500 random pairs") {
    testutil::Rng rng(500);
    int pd_count = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.integer(1, 8));
        auto [d, a] = testutil::random_da_pair(rng, n);
        const auto res = pd_certificate(d, a);

        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = (i == j ? d[i] : 0.0) - a(i, j);
        const bool oracle = eig_sym(m).eigenvalues.front() > 1e-9;
        CHECK(res.positive_definite == oracle);

        if (res.positive_definite) {
            ++pd_count;
            REQUIRE(res.certificate.has_value());
            const Vec& v = *res.certificate;
            for (double x : v) CHECK(x > 0.0);
            const Vec mv = m * v;
            for (double x : mv) CHECK(x > 0.0);
        }
    }
    CHECK(pd_count > 50);  // the draw must actually exercise both branches
    CHECK(pd_count < 450);
}

TEST_CASE("nonneg_inverse closed forms and guarantees") {
    SUBCASE("(2I - ones)^{-1} = (1/3)[[2,1],[1,2]]") {
        const Matrix inv = nonneg_inverse({2, 2}, from_rows({{0, 1}, {1, 0}}));
        CHECK(inv(0, 0) == doctest::Approx(2.0 / 3).epsilon(1e-12));
        CHECK(inv(0, 1) == doctest::Approx(1.0 / 3).epsilon(1e-12));
        CHECK(inv(1, 0) == doctest::Approx(1.0 / 3).epsilon(1e-12));
        CHECK(inv(1, 1) == doctest::Approx(2.0 / 3).epsilon(1e-12));
    }
    SUBCASE("A = 0 gives diag(1/d)") {
        const Matrix inv = nonneg_inverse({2, 4, 8}, Matrix(3, 3));
        CHECK(inv(0, 0) == doctest::Approx(0.5));
        CHECK(inv(1, 1) == doctest::Approx(0.25));
        CHECK(inv(2, 2) == doctest::Approx(0.125));
        CHECK(inv(0, 1) == 0.0);
    }
    SUBCASE("indefinite input throws") {
        CHECK_THROWS_AS(nonneg_inverse({1, 1}, from_rows({{0, 2}, {2, 0}})), Error);
    }
    SUBCASE("random PD instances: residual and nonnegativity") {
        testutil::Rng rng(77);
        int done = 0;
        while (done < 60) {
            const std::size_t n = static_cast<std::size_t>(rng.integer(1, 8));
            auto [d, a] = testutil::random_da_pair(rng, n);
            if (!pd_certificate(d, a).positive_definite) continue;
            ++done;
            const Matrix inv = nonneg_inverse(d, a);
            Matrix m(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) m(i, j) = (i == j ? d[i] : 0.0) - a(i, j);
            const Matrix prod = m * inv;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    CHECK(std::abs(prod(i, j) - (i == j ? 1.0 : 0.0)) < 1e-9);
                    CHECK(inv(i, j) >= -1e-12);
                }
        }
    }
}

TEST_CASE("schur_complement closed forms") {
    SUBCASE("[[2,1],[1,2]] head 1 -> 1.5") {
        const Matrix s = schur_complement(from_rows({{2, 1}, {1, 2}}), 1);
        CHECK(s(0, 0) == doctest::Approx(1.5).epsilon(1e-14));
    }
    SUBCASE("block-diagonal leaves the trailing block untouched") {
        const Matrix s = schur_complement(from_rows({{3, 0, 0}, {0, 5, 2}, {0, 2, 7}}), 1);
        CHECK(s(0, 0) == doctest::Approx(5.0));
        CHECK(s(0, 1) == doctest::Approx(2.0));
        CHECK(s(1, 1) == doctest::Approx(7.0));
    }
    SUBCASE("indefinite leading block throws") {
        CHECK_THROWS_AS(schur_complement(from_rows({{-1, 0}, {0, 2}}), 1), Error);
    }
}

TEST_CASE("Haynsworth inertia additivity on random symmetric matrices") {
    testutil::Rng rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.integer(2, 10));
        const std::size_t head = static_cast<std::size_t>(rng.integer(1, static_cast<int>(n) - 1));
        Matrix m = testutil::random_symmetric(rng, n, 3.0);
        // shift the leading block PD while keeping the rest arbitrary
        const Matrix m11 = m.block(0, 0, head, head);
        const double lam_min = eig_sym(m11).eigenvalues.front();
        for (std::size_t i = 0; i < head; ++i) m(i, i) += std::max(0.0, -lam_min) + 1.0;

        const auto total = testutil::inertia(m);
        const auto leading = testutil::inertia(m.block(0, 0, head, head));
        const auto tail = testutil::inertia(schur_complement(m, head));
        for (int k = 0; k < 3; ++k) CHECK(total[k] == leading[k] + tail[k]);
    }
}

TEST_CASE("metzler_summary closed forms") {
    SUBCASE("[[-1,2],[3,-4]] is irreducible Metzler with Frobenius (sqrt(33)-5)/2") {
        const auto s = metzler_summary(from_rows({{-1, 2}, {3, -4}}));
        CHECK(s.is_metzler);
        CHECK(s.is_irreducible);
        CHECK(s.frobenius_eig == doctest::Approx((std::sqrt(33.0) - 5.0) / 2.0).epsilon(1e-9));
    }
    SUBCASE("strictly triangular support is reducible") {
        const auto s = metzler_summary(from_rows({{0, 1}, {0, 0}}));
        CHECK(s.is_metzler);
        CHECK_FALSE(s.is_irreducible);
        CHECK(s.frobenius_eig == doctest::Approx(0.0));
    }
    SUBCASE("negative off-diagonal is not Metzler") {
        const auto s = metzler_summary(from_rows({{0, -1}, {-1, 0}}));
        CHECK_FALSE(s.is_metzler);
    }
    SUBCASE("diagonal matrix: Frobenius eigenvalue is the max diagonal") {
        const auto s = metzler_summary(from_rows({{-3, 0}, {0, -7}}));
        CHECK(s.is_metzler);
        CHECK(s.frobenius_eig == doctest::Approx(-3.0));
    }
}

TEST_CASE("Frobenius eigenvalue of an irreducible Metzler matrix is simple") {
    testutil::Rng rng(13);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.integer(2, 9));
        // symmetric irreducible Metzler: positive off-diagonal, random diagonal
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = rng.uniform(-5.0, 5.0);
            for (std::size_t j = i + 1; j < n; ++j) {
                const double v = rng.uniform(0.1, 4.0);
                m(i, j) = v;
                m(j, i) = v;
            }
        }
        const auto s = metzler_summary(m);
        REQUIRE(s.is_metzler);
        REQUIRE(s.is_irreducible);
        const auto spec = eig_sym(m);
        CHECK(s.frobenius_eig == doctest::Approx(spec.eigenvalues.back()).epsilon(1e-10));
        CHECK(spec.eigenvalues.back() - spec.eigenvalues[n - 2] > 1e-8);
    }
}

TEST_CASE("perron path matches the symmetric path") {
    // force the nonsymmetric branch with a similarity scaling D M D^{-1},
    // which preserves the spectrum of a symmetric Metzler matrix
    testutil::Rng rng(57);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.integer(2, 7));
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = rng.uniform(-3.0, 3.0);
            for (std::size_t j = i + 1; j < n; ++j) {
                const double v = rng.uniform(0.1, 2.0);
                m(i, j) = v;
                m(j, i) = v;
            }
        }
        Vec scale(n);
        for (double& v : scale) v = rng.uniform(0.5, 2.0);
        Matrix similar(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) similar(i, j) = scale[i] * m(i, j) / scale[j];
        const double expected = eig_sym(m).eigenvalues.back();
        const auto s = metzler_summary(similar);
        REQUIRE(s.is_metzler);
        CHECK(s.frobenius_eig == doctest::Approx(expected).epsilon(1e-8));
    }
}
