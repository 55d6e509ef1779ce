#include <doctest.h>

#include "ringlab/weingarten.hpp"

using namespace ringlab;

TEST_CASE("permutation algebra") {
    const Permutation s({1, 2, 0, 3});  // 3-cycle on {0,1,2}
    CHECK(s.cycle_type() == std::vector<int>{3, 1});
    CHECK(s.num_cycles() == 2);
    CHECK(s.length() == 2);
    const Permutation t = s.inverse();
    CHECK(t.compose(s).cycle_type() == std::vector<int>{1, 1, 1, 1});
    CHECK(all_permutations(4).size() == 24);
}

TEST_CASE("moebius values") {
    CHECK(moebius(Permutation::identity(3)) == 1);
    CHECK(moebius(Permutation({1, 0, 2})) == -1);      // transposition
    CHECK(moebius(Permutation({1, 2, 0})) == 2);       // 3-cycle: Cat_2
    CHECK(moebius(Permutation({1, 0, 3, 2})) == 1);    // two transpositions
    CHECK(moebius(Permutation({1, 2, 3, 0})) == -5);   // 4-cycle: -Cat_3
}

TEST_CASE("weingarten table exact values") {
    const WgTable w2 = wg_table(2, 5);
    CHECK(w2(std::vector<int>{1, 1}) == rational(1, 24));
    CHECK(w2(std::vector<int>{2}) == rational(-1, 120));

    const WgTable w1 = wg_table(1, 7);
    CHECK(w1(std::vector<int>{1}) == rational(1, 7));

    // k = 3 at n = 4: closed forms from the Gram inverse
    const WgTable w3 = wg_table(3, 4);
    const long long n = 4;
    const rational den = rational(n) * (n * n - 1) * (n * n - 4);
    CHECK(w3(std::vector<int>{1, 1, 1}) == rational(n * n - 2) / den);
    CHECK(w3(std::vector<int>{2, 1}) == rational(-1) * n / den);
    CHECK(w3(std::vector<int>{3}) == rational(2) / den);
}

TEST_CASE("weingarten is a class function and the gram identity holds") {
    const int k = 3;
    const long long n = 6;
    const WgTable table = wg_table(k, n);
    const auto perms = all_permutations(k);
    // sum over tau of n^{#cycles(sigma tau^-1)} Wg(tau) = [sigma == id]
    for (const auto& sigma : perms) {
        rational sum = 0;
        for (const auto& tau : perms) {
            const int c = sigma.compose(tau.inverse()).num_cycles();
            rational p = 1;
            for (int i = 0; i < c; ++i) p *= n;
            sum += p * table(tau);
        }
        CHECK(sum == rational(sigma.length() == 0 ? 1 : 0));
    }
}

TEST_CASE("weingarten large-n factorization") {
    // Wg(sigma, n) ~ Moeb(sigma) / n^{2k - #cycles} with O(1/n^2) relative error
    const int k = 4;
    for (long long n : {50LL, 100LL}) {
        const WgTable table = wg_table(k, n);
        const Permutation sigma({1, 0, 3, 2});
        rational lead = moebius(sigma);
        for (int i = 0; i < 2 * k - sigma.num_cycles(); ++i) lead /= n;
        const double rel =
            std::abs(static_cast<double>(table(sigma) / lead) - 1.0);
        CHECK(rel < 30.0 / double(n * n));
    }
}

TEST_CASE("gram system is singular for small dimension") {
    CHECK_THROWS_AS((void)wg_table(3, 2), GramSingular);
    CHECK_NOTHROW((void)wg_table(3, 3));
    // n = k is the boundary case: the Gram system is still invertible there
    const WgTable w22 = wg_table(2, 2);
    CHECK(w22(std::vector<int>{1, 1}) == rational(1, 3));
    CHECK(w22(std::vector<int>{2}) == rational(-1, 6));
}

TEST_CASE("mixed moments from the table") {
    const long long n = 5;
    // E |u_00|^2 = 1/n
    CHECK(mixed_moment({0}, {0}, {0}, {0}, n) == rational(1, n));
    const WgTable w2 = wg_table(2, n);
    // distinct rows and columns admit only the identity matching
    CHECK(mixed_moment({0, 1}, {0, 1}, {0, 1}, {0, 1}, w2) == w2(std::vector<int>{1, 1}));
    // repeated rows admit both matchings: E|u_00|^2|u_01|^2 = Wg(id) + Wg((01))
    const rational want = w2(std::vector<int>{1, 1}) + w2(std::vector<int>{2});
    CHECK(mixed_moment({0, 0}, {0, 1}, {0, 0}, {0, 1}, w2) == want);
    CHECK(want == rational(1, 30));  // 1/(n(n+1)) at n = 5
    // index multisets that cannot be matched vanish
    CHECK(mixed_moment({0, 1}, {0, 1}, {0, 2}, {0, 1}, w2) == rational(0));
}

TEST_CASE("two-trace expectation: closed form equals brute force") {
    for (std::size_t n : {std::size_t(2), std::size_t(3)}) {
        RationalMatrix a(n), b(n), c(n), d(n);
        int v = 1;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) = rational(v++, 2);
                b(i, j) = rational(v++ % 5, 3);
                c(i, j) = rational((v++ % 4) - 1);
                d(i, j) = rational(v++ % 3, 7);
            }
        CHECK(exact_two_trace(a, b, c, d) == exact_two_trace_brute(a, b, c, d));
    }
}

TEST_CASE("two-trace with identity inner factors reduces to a product") {
    // E Tr(A V V*) Tr(C V V*) = Tr A Tr C
    const std::size_t n = 3;
    RationalMatrix a(n), c(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            a(i, j) = rational(int(3 * i + j) - 2, 2);
            c(i, j) = rational(int(i) * int(j) + 1, 5);
        }
    const RationalMatrix id = RationalMatrix::identity(n);
    CHECK(exact_two_trace(a, id, c, id) == rtrace(a) * rtrace(c));
}

TEST_CASE("exact trace moments for A = U diag(s)") {
    const std::vector<rational> s = {rational(1, 2), rational(1), rational(3, 2),
                                     rational(2)};
    const long long n = 4;
    // E Tr A conj(Tr A) = (1/n) sum s_i^2
    rational s2 = 0;
    for (const auto& v : s) s2 += v * v;
    TraceFactor plain{1, std::nullopt, false};
    TraceFactor conj{1, std::nullopt, true};
    CHECK(exact_trace_moment({plain, conj}, s) == s2 / n);
    // E Tr A Tr A^-1 = 1
    TraceFactor inv{-1, std::nullopt, false};
    CHECK(exact_trace_moment({plain, inv}, s) == rational(1));
    // odd words vanish by the phase symmetry of Haar measure
    CHECK(exact_trace_moment({plain}, s) == rational(0));
    CHECK(exact_trace_moment({plain, plain, conj}, s) == rational(0));
}

TEST_CASE("complexity budget trips on oversized words") {
    const std::vector<rational> s(30, rational(1));
    TraceFactor big{3, std::nullopt, false};
    TraceFactor bigc{3, std::nullopt, true};
    CHECK_THROWS_AS((void)exact_trace_moment({big, bigc}, s, 1000), ComplexityBudgetExceeded);
}
