#include <doctest.h>

#include <cmath>

#include "ringlab/outliers.hpp"
#include "ringlab/linalg.hpp"

using namespace ringlab;

namespace {

const SingleRingModel kModel = SingleRingModel::make(SingularProfile::uniform(0.5, 4.0));

PerturbationSpec figure_spec(PerturbationVariant variant) {
    PerturbationSpec spec;
    spec.p_eigenvalues = {cd(-2.0, 0.0), 1.0 / cd(0.8, 0.5), cd(1.0 / 3.0, 0.0)};
    spec.variant = variant;
    return spec;
}

}  // namespace

TEST_CASE("outlier prediction arithmetic") {
    const OutlierPrediction pred = predict(figure_spec(PerturbationVariant::APlusAP), kModel);
    REQUIRE(pred.items.size() == 2);  // |1/3| < 1/a is subcritical
    CHECK(std::abs(pred.items[0].location - cd(0.5, 0.0)) < 1e-12);
    CHECK(std::abs(pred.items[1].location - cd(-0.8, -0.5)) < 1e-12);
    for (const auto& item : pred.items) {
        CHECK(std::abs(item.location) < kModel.inner_radius);
        CHECK(item.multiplicity == 1);
    }
}

TEST_CASE("additive-in-P variant predicts no outliers") {
    const OutlierPrediction pred = predict(figure_spec(PerturbationVariant::APlusP), kModel);
    CHECK(pred.items.empty());
}

TEST_CASE("repeated perturbation eigenvalues merge into multiplicity") {
    PerturbationSpec spec;
    spec.p_eigenvalues = {cd(-2, 0), cd(-2, 0)};
    const OutlierPrediction pred = predict(spec, kModel);
    REQUIRE(pred.items.size() == 1);
    CHECK(pred.items[0].multiplicity == 2);
}

TEST_CASE("zero perturbation leaves the matrix unchanged") {
    PerturbationSpec spec;
    spec.variant = PerturbationVariant::APlusAP;
    SeededStream s(1, 0);
    const ComplexMatrix a = sample_A(kModel, 12, s);
    CHECK(build_perturbed(a, spec) == a);
    CHECK(predict(spec, kModel).items.empty());
}

TEST_CASE("perturbed matrix matches the dense construction") {
    const PerturbationSpec spec = figure_spec(PerturbationVariant::APlusAP);
    SeededStream s(2, 0);
    const std::size_t n = 10;
    const ComplexMatrix a = sample_A(kModel, n, s);

    // P = diag(lambda, ..., 0): perturbed = A (I + A P)
    ComplexMatrix p(n, n);
    for (std::size_t j = 0; j < spec.p_eigenvalues.size(); ++j) p(j, j) = spec.p_eigenvalues[j];
    ComplexMatrix want = matmul(a, ComplexMatrix::identity(n) + matmul(a, p));
    const ComplexMatrix got = build_perturbed(a, spec);
    CHECK(frobenius_norm(got - want) < 1e-12);

    PerturbationSpec add = figure_spec(PerturbationVariant::APlusP);
    ComplexMatrix want2 = matmul(a, ComplexMatrix::identity(n) + p);
    CHECK(frobenius_norm(build_perturbed(a, add) - want2) < 1e-12);
}

TEST_CASE("rank cap is enforced") {
    PerturbationSpec spec;
    spec.p_eigenvalues.assign(9, cd(2, 0));
    CHECK_THROWS(spec.validate());
}

TEST_CASE("detect requires a large enough matrix") {
    const PerturbationSpec spec = figure_spec(PerturbationVariant::APlusAP);
    SeededStream s(5, 0);
    CHECK_THROWS((void)detect(spec, kModel, 64, s));
}

TEST_CASE("fast location matches the full eigensolve at moderate size") {
    const PerturbationSpec spec = figure_spec(PerturbationVariant::APlusAP);
    const std::size_t n = 256;
    SeededStream s_fast(3, 0);
    const std::vector<cd> fast = locate_outliers_fast(spec, kModel, n, s_fast);
    REQUIRE(fast.size() == 2);

    SeededStream s_dense(3, 0);
    const ComplexMatrix perturbed = build_perturbed(sample_A(kModel, n, s_dense), spec);
    const std::vector<cd> eig = eigenvalues(perturbed);
    for (const cd& located : fast) {
        double best = 1e9;
        for (const cd& z : eig) best = std::min(best, std::abs(z - located));
        CHECK(best < 1e-8);
    }
}

TEST_CASE("fluctuation scale demands a supercritical perturbation") {
    PerturbationSpec spec;
    spec.p_eigenvalues = {cd(0.1, 0.0)};  // below threshold: nothing to track
    CHECK_THROWS_AS(
        (void)fluctuation_scale(spec, kModel, {64, 96}, 4, 0), MissingOutlier);
}
