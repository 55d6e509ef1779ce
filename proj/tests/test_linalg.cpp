#include <doctest.h>

#include <algorithm>

#include "ringlab/linalg.hpp"
#include "ringlab/rng.hpp"

using namespace ringlab;

namespace {

ComplexMatrix random_matrix(std::size_t n, std::uint64_t seed) {
    SeededStream s(seed, 0);
    return ginibre(n, s);
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

}  // namespace

TEST_CASE("lu factorization reconstructs, inverts, and solves") {
    for (std::size_t n : {std::size_t(8), std::size_t(64)}) {
        const ComplexMatrix a = random_matrix(n, 100 + n);
        const LUFactors f = lu_factor(a);

        const ComplexMatrix inv = lu_invert(f);
        CHECK(max_abs_diff(matmul(a, inv), ComplexMatrix::identity(n)) < 1e-10);

        SeededStream s(5, 1);
        std::vector<cd> b(n);
        for (auto& x : b) x = s.next_complex_gaussian();
        const std::vector<cd> x = lu_solve(f, b);
        for (std::size_t i = 0; i < n; ++i) {
            cd r = 0.0;
            for (std::size_t j = 0; j < n; ++j) r += a(i, j) * x[j];
            CHECK(std::abs(r - b[i]) < 1e-10);
        }

        // det via LU against the product of eigenvalues
        cd eig_det = 1.0;
        for (const cd& z : eigenvalues(a)) eig_det *= z;
        CHECK(std::abs(lu_det(f) - eig_det) < 1e-8 * std::abs(eig_det) + 1e-12);
    }
}

TEST_CASE("lu rejects a singular matrix") {
    ComplexMatrix a(3, 3);  // rank 1
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) a(i, j) = cd(double(i + 1), 0) * cd(double(j + 1), 0);
    CHECK_THROWS_AS((void)lu_invert(lu_factor(a)), SingularMatrix);
}

TEST_CASE("qr factors are unitary and reconstruct the input") {
    const std::size_t n = 24;
    const ComplexMatrix a = random_matrix(n, 42);
    const auto [q, r] = qr_factor(a);

    CHECK(max_abs_diff(matmul(q.adjoint(), q), ComplexMatrix::identity(n)) < 1e-12);
    CHECK(max_abs_diff(matmul(q, r), a) < 1e-12);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) CHECK(std::abs(r(i, j)) < 1e-13);
}

TEST_CASE("factored unitary applies match the dense matrix") {
    const std::size_t n = 40;
    SeededStream s(9, 0);
    const FactoredUnitary q = haar_factored(n, s);
    const ComplexMatrix dense = q.dense();

    SeededStream sv(9, 1);
    std::vector<cd> x(n);
    for (auto& v : x) v = sv.next_complex_gaussian();

    auto y = x;
    q.apply(y);
    for (std::size_t i = 0; i < n; ++i) {
        cd r = 0.0;
        for (std::size_t j = 0; j < n; ++j) r += dense(i, j) * x[j];
        CHECK(std::abs(y[i] - r) < 1e-12);
    }

    // Q^* Q x == x
    q.apply_adjoint(y);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y[i] - x[i]) < 1e-12);
}

TEST_CASE("eigenvalues satisfy trace identities") {
    for (std::size_t n : {std::size_t(8), std::size_t(64)}) {
        const ComplexMatrix a = random_matrix(n, 77 + n);
        const std::vector<cd> eig = eigenvalues(a);
        REQUIRE(eig.size() == n);

        cd s1 = 0.0, s2 = 0.0;
        for (const cd& z : eig) {
            s1 += z;
            s2 += z * z;
        }
        CHECK(std::abs(s1 - trace(a)) < 1e-9);
        CHECK(std::abs(s2 - trace(matmul(a, a))) < 1e-8);
    }
}

TEST_CASE("nearest_eigenvalue refines to a true eigenvalue") {
    const std::size_t n = 32;
    const ComplexMatrix a = random_matrix(n, 321);
    const std::vector<cd> eig = eigenvalues(a);
    const cd target = eig[n / 2];
    const cd found = nearest_eigenvalue(a, target + cd(0.01, -0.02));
    CHECK(std::abs(found - target) < 1e-8);
}

TEST_CASE("power_traces agrees with explicit matrix powers") {
    const std::size_t n = 16;
    const ComplexMatrix a = random_matrix(n, 55);
    const auto traces = power_traces(a, 3, 2);

    ComplexMatrix p = a;
    CHECK(std::abs(traces.at(1) - trace(p)) < 1e-10);
    p = matmul(p, a);
    CHECK(std::abs(traces.at(2) - trace(p)) < 1e-10);
    p = matmul(p, a);
    CHECK(std::abs(traces.at(3) - trace(p)) < 1e-9);

    const ComplexMatrix inv = lu_invert(lu_factor(a));
    CHECK(std::abs(traces.at(-1) - trace(inv)) < 1e-9);
    CHECK(std::abs(traces.at(-2) - trace(matmul(inv, inv))) < 1e-8);
    CHECK(traces.find(0) == traces.end());
}
