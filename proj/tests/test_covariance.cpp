#include <doctest.h>

#include <cmath>

#include "ringlab/covariance.hpp"
#include "ringlab/model.hpp"

using namespace ringlab;

namespace {
const double kA = std::sqrt(2.0);
const double kB = std::sqrt((64.0 - 0.125) / 10.5);  // Uniform(0.5, 4) outer radius
}  // namespace

TEST_CASE("identity-weight covariance of simple observables") {
    const LaurentPoly z1 = LaurentPoly::monomial(1);
    const LaurentPoly zm1 = LaurentPoly::monomial(-1);
    const auto p = PairParams::identity_weight();

    // Var Tr A: hermitian = b^2, pseudo = 0
    const auto r1 = theorem_covariance(z1, z1, p, kA, kB);
    CHECK(std::abs(r1.hermitian - cd(kB * kB)) < 1e-12);
    CHECK(std::abs(r1.pseudo) < 1e-12);

    // Var Tr A^-1: hermitian = 1/a^2
    const auto r2 = theorem_covariance(zm1, zm1, p, kA, kB);
    CHECK(std::abs(r2.hermitian - cd(1.0 / (kA * kA))) < 1e-12);

    // f = z + 1/z: pseudo picks up the n=1 cross term, value 2
    const LaurentPoly f = z1 + zm1;
    const auto r3 = theorem_covariance(f, f, p, kA, kB);
    CHECK(std::abs(r3.pseudo - cd(2.0)) < 1e-12);
    CHECK(std::abs(r3.hermitian - cd(kB * kB + 1.0 / (kA * kA))) < 1e-12);

    // the pair (Tr A, Tr A^-1) has pseudo covariance 1 and no hermitian part
    const auto r4 = theorem_covariance(z1, zm1, p, kA, kB);
    CHECK(std::abs(r4.pseudo - cd(1.0)) < 1e-12);
    CHECK(std::abs(r4.hermitian) < 1e-12);
}

TEST_CASE("white-noise covariance values") {
    for (int n : {1, 2, 3}) {
        for (int sign : {+1, -1}) {
            const auto direct = theorem_covariance(phi_basis(n, sign, kA, kB),
                                                   phi_basis(n, sign, kA, kB),
                                                   PairParams::identity_weight(), kA, kB);
            const auto closed = white_noise_covariance(n, sign, kA, kB);
            CHECK(std::abs(direct.hermitian - closed.hermitian) < 1e-12);
            CHECK(std::abs(direct.pseudo - closed.pseudo) < 1e-12);
            CHECK(std::abs(closed.hermitian - cd(2.0 * n)) < 1e-12);
            const double want = 2.0 * sign * n * std::pow(kA / kB, n);
            CHECK(std::abs(closed.pseudo - cd(want)) < 1e-12);
        }
    }
    // distinct basis elements are uncorrelated
    const auto cross = theorem_covariance(phi_basis(1, +1, kA, kB), phi_basis(2, +1, kA, kB),
                                          PairParams::identity_weight(), kA, kB);
    CHECK(std::abs(cross.hermitian) < 1e-12);
    CHECK(std::abs(cross.pseudo) < 1e-12);
}

TEST_CASE("resolvent kernel closed forms match the series") {
    struct Point {
        cd z, zp;
        Region rz, rzp;
    };
    const std::vector<Point> pts = {
        {cd(3.1, 0.4), cd(4.0, -1.0), Region::Outside, Region::Outside},
        {cd(0.4, 0.3), cd(-0.2, 0.5), Region::InsideHole, Region::InsideHole},
        {cd(0.5, 0.0), cd(3.5, 1.0), Region::InsideHole, Region::Outside},
        {cd(4.2, 0.0), cd(0.3, -0.4), Region::Outside, Region::InsideHole},
    };
    for (const auto& p : pts) {
        const auto closed = resolvent_kernel(p.z, p.zp, p.rz, p.rzp, kA, kB);
        const auto series = resolvent_kernel_series(p.z, p.zp, p.rz, p.rzp, kA, kB, 200);
        CHECK(std::abs(closed.hermitian - series.hermitian) < 1e-8);
        CHECK(std::abs(closed.pseudo - series.pseudo) < 1e-8);
    }
}

TEST_CASE("resolvent kernel region structure") {
    const auto oo = resolvent_kernel(cd(3, 0), cd(4, 0), Region::Outside, Region::Outside, kA, kB);
    const double b2 = kB * kB;
    CHECK(std::abs(oo.hermitian - cd(b2 / ((12.0 - b2) * (12.0 - b2)))) < 1e-12);
    CHECK(std::abs(oo.pseudo) < 1e-12);  // same-side pairs have no pseudo part

    const auto ii = resolvent_kernel(cd(0.3, 0), cd(0.5, 0), Region::InsideHole,
                                     Region::InsideHole, kA, kB);
    const double a2 = kA * kA;
    const double d = a2 - 0.15;
    CHECK(std::abs(ii.hermitian - cd(a2 / (d * d))) < 1e-12);
    CHECK(std::abs(ii.pseudo) < 1e-12);

    const auto io = resolvent_kernel(cd(0.5, 0), cd(4, 0), Region::InsideHole, Region::Outside,
                                     kA, kB);
    CHECK(std::abs(io.hermitian) < 1e-12);  // cross pairs have no hermitian part
    CHECK(std::abs(io.pseudo - cd(-1.0 / (3.5 * 3.5))) < 1e-12);
}

TEST_CASE("resolvent kernel validates regions") {
    CHECK_THROWS_AS((void)resolvent_kernel(cd(3, 0), cd(4, 0), Region::InsideHole,
                                           Region::Outside, kA, kB),
                    RegionViolation);
    CHECK_THROWS_AS((void)resolvent_kernel(cd(0.5, 0), cd(4, 0), Region::InsideHole,
                                           Region::Outside, 0.0, kB),
                    RegionViolation);
}

TEST_CASE("logdet kernel values") {
    // identity profile, z = z' = 2: -log(1 - 1/4)/2
    const double v = logdet_kernel(cd(2, 0), cd(2, 0), Region::Outside, Region::Outside, 1.0, 1.0);
    CHECK(v == doctest::Approx(-0.5 * std::log(0.75)).epsilon(1e-12));

    const double inside = logdet_kernel(cd(0.3, 0), cd(0.4, 0), Region::InsideHole,
                                        Region::InsideHole, kA, kB);
    CHECK(inside == doctest::Approx(-0.5 * std::log(std::abs(1.0 - 0.12 / 2.0))).epsilon(1e-12));
}

TEST_CASE("dyad covariance reproduces corner-entry limits") {
    // X = sqrt(N) (A)_{01} with T = I: variance 1, pseudo 0
    std::vector<cd> e0(4, 0.0), e1(4, 0.0);
    e0[0] = 1.0;
    e1[1] = 1.0;
    const auto kappa = kappa_from_vectors(e0, e1, e0, e1);
    const auto r = dyad_covariance(LaurentPoly::monomial(1), LaurentPoly::monomial(1), kappa,
                                   1.0, 1.0);
    CHECK(std::abs(r.hermitian - cd(1.0)) < 1e-12);
    CHECK(std::abs(r.pseudo) < 1e-12);

    // opposite corner pair (i,j) vs (j,i): pseudo couples through both kappas
    const auto kappa_cross = kappa_from_vectors(e0, e1, e1, e0);
    const LaurentPoly f = std::pow(2.0, -0.5) * phi_basis(1, +1, kA, kB);
    const auto rc = dyad_covariance(f, f, kappa_cross, kA, kB);
    CHECK(std::abs(rc.pseudo - cd(kA / kB)) < 1e-12);
    CHECK(std::abs(rc.hermitian) < 1e-12);
}

TEST_CASE("elliptic rho and its normalization gate") {
    const LaurentPoly f = std::pow(2.0, -0.5) * phi_basis(1, +1, kA, kB);
    CHECK(std::abs(elliptic_rho(f, kA, kB) - cd(kA / kB)) < 1e-12);
    CHECK_THROWS_AS((void)elliptic_rho(phi_basis(1, +1, kA, kB), kA, kB), NormalizationError);
}
