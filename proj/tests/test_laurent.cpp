#include <doctest.h>

#include <cmath>

#include "ringlab/laurent.hpp"
#include "ringlab/model.hpp"

using namespace ringlab;

TEST_CASE("laurent arithmetic and degree bookkeeping") {
    LaurentPoly f = LaurentPoly::monomial(2, cd(1, 1)) + LaurentPoly::monomial(-3, 2.0);
    f += LaurentPoly::monomial(2, cd(0, -1));
    CHECK(f.coeff(2) == cd(1, 0));
    CHECK(f.coeff(-3) == cd(2, 0));
    CHECK(f.coeff(0) == cd(0, 0));
    CHECK(f.max_positive_degree() == 2);
    CHECK(f.max_negative_degree() == 3);
    CHECK(f.has_negative_powers());

    const LaurentPoly g = cd(2, 0) * f;
    CHECK(g.coeff(-3) == cd(4, 0));
}

TEST_CASE("white-noise basis round trip") {
    const double a = std::sqrt(2.0), b = 2.4664414311581243;
    for (int n : {1, 2, 3}) {
        const cd an{0.3, -0.8}, a_neg{1.1, 0.25};
        const auto [cp, cm] = white_noise_coeffs(an, a_neg, n, a, b);
        const auto [an2, a_neg2] = laurent_coeffs_from_white_noise(cp, cm, n, a, b);
        CHECK(std::abs(an2 - an) < 1e-12);
        CHECK(std::abs(a_neg2 - a_neg) < 1e-12);
    }
}

TEST_CASE("phi basis coefficients") {
    const double a = 1.5, b = 3.0;
    const LaurentPoly plus = phi_basis(2, +1, a, b);
    CHECK(std::abs(plus.coeff(2) - cd(1.0 / (b * b))) < 1e-15);
    CHECK(std::abs(plus.coeff(-2) - cd(a * a)) < 1e-15);
    const LaurentPoly minus = phi_basis(2, -1, a, b);
    CHECK(std::abs(minus.coeff(-2) + cd(a * a)) < 1e-15);

    // no-hole model keeps only the positive part
    const LaurentPoly edge = phi_basis(3, +1, 0.0, b);
    CHECK(edge.coeff(-3) == cd(0, 0));
}

TEST_CASE("statistic evaluation matches direct trace computation") {
    const auto model = SingleRingModel::make(SingularProfile::uniform(0.5, 4.0));
    SeededStream s(3, 0);
    const std::size_t n = 20;
    const ComplexMatrix a = sample_A(model, n, s);

    LaurentPoly f;
    f.set(1, cd(1, 0));
    f.set(2, cd(0, 2));
    f.set(-1, cd(0.5, -0.5));
    f.set(0, cd(9, 9));  // constant term must not contribute

    const cd got = eval_statistic(Observable::linear_statistic(f), a);
    const ComplexMatrix inv = lu_invert(lu_factor(a));
    const cd want = f.coeff(1) * trace(a) + f.coeff(2) * trace(matmul(a, a)) +
                    f.coeff(-1) * trace(inv);
    CHECK(std::abs(got - want) < 1e-9);
}

TEST_CASE("scaled dyad observable equals a corner entry") {
    const auto model = SingleRingModel::make(SingularProfile::identity());
    SeededStream s(4, 0);
    const std::size_t n = 12;
    const ComplexMatrix a = sample_A(model, n, s);

    std::vector<cd> e0(n, 0.0), e1(n, 0.0);
    e0[0] = 1.0;
    e1[1] = 1.0;
    // M = sqrt(N) e1 e0^*: Tr(A M) = sqrt(N) A_{01}
    const cd got = eval_statistic(
        Observable::scaled_dyad(LaurentPoly::monomial(1), /*left=*/e0, /*right=*/e1), a);
    CHECK(std::abs(got - std::sqrt(double(n)) * a(0, 1)) < 1e-10);
}

TEST_CASE("evaluator caches are consistent across observables") {
    const auto model = SingleRingModel::make(SingularProfile::uniform(0.5, 4.0));
    SeededStream s(8, 0);
    StatisticEvaluator ev(sample_A(model, 16, s));
    const cd t2 = ev.trace_power(2);
    const cd t2_again = ev.trace_power(2);
    CHECK(t2 == t2_again);
    const cd tm1 = ev.trace_power(-1);
    const ComplexMatrix inv = lu_invert(lu_factor(ev.matrix()));
    CHECK(std::abs(tm1 - trace(inv)) < 1e-9);
}

TEST_CASE("resolvent trace rejects points near the ring") {
    const auto model = SingleRingModel::make(SingularProfile::uniform(0.5, 4.0));
    SeededStream s(6, 0);
    const ComplexMatrix a = sample_A(model, 16, s);
    CHECK_THROWS_AS((void)resolvent_trace(a, cd(1.5, 0), model), RingProximity);
    CHECK_THROWS_AS((void)resolvent_trace(a, cd(0, 2.5), model), RingProximity);
    CHECK_NOTHROW((void)resolvent_trace(a, cd(3.0, 0), model));
    CHECK_NOTHROW((void)resolvent_trace(a, cd(0.2, 0), model));
}

TEST_CASE("negative powers require an inner radius") {
    const auto profile = SingularProfile::discrete({{0.0, 0.5}, {2.0, 0.5}});
    CHECK(!profile.supports_negative_powers());
    const auto model = SingleRingModel::make(profile);
    CHECK(model.inner_radius == 0.0);
}
