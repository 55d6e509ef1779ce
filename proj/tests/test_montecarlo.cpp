#include <doctest.h>

#include <cmath>

#include "ringlab/montecarlo.hpp"

using namespace ringlab;

namespace {

ExperimentPlan small_plan() {
    ExperimentPlan plan;
    plan.model = SingleRingModel::make(SingularProfile::uniform(0.5, 4.0));
    plan.observables = {Observable::linear_statistic(LaurentPoly::monomial(1)),
                        Observable::linear_statistic(LaurentPoly::monomial(-1))};
    plan.n = 16;
    plan.trials = 64;
    plan.seed = 42;
    return plan;
}

}  // namespace

TEST_CASE("results are bit-identical for any thread count") {
    ExperimentPlan plan = small_plan();
    plan.threads = 1;
    const EnsembleStats one = run(plan);
    plan.threads = 4;
    const EnsembleStats four = run(plan);
    REQUIRE(one.samples.size() == four.samples.size());
    for (std::size_t t = 0; t < one.samples.size(); ++t)
        for (std::size_t i = 0; i < one.samples[t].size(); ++i)
            CHECK(one.samples[t][i] == four.samples[t][i]);
    CHECK(one.pairs[0][1].pseudo == four.pairs[0][1].pseudo);
    CHECK(one.moments[0].at({2, 1}).value == four.moments[0].at({2, 1}).value);
}

TEST_CASE("changing the seed changes the samples") {
    ExperimentPlan plan = small_plan();
    const EnsembleStats a = run(plan);
    plan.seed = 43;
    const EnsembleStats b = run(plan);
    CHECK(a.samples[0][0] != b.samples[0][0]);
}

TEST_CASE("standard errors shrink like one over sqrt trials") {
    ExperimentPlan plan = small_plan();
    plan.trials = 128;
    const double se128 = run(plan).pairs[0][0].hermitian_se;
    plan.trials = 512;
    const double se512 = run(plan).pairs[0][0].hermitian_se;
    CHECK(se512 < se128);
    CHECK(se512 / se128 == doctest::Approx(0.5).epsilon(0.5));
}

TEST_CASE("plan validation") {
    ExperimentPlan plan = small_plan();
    plan.trials = 0;
    CHECK_THROWS(plan.validate());
    plan = small_plan();
    plan.model = SingleRingModel::make(SingularProfile::discrete({{0.0, 0.5}, {2.0, 0.5}}));
    CHECK_THROWS_AS(plan.validate(), NegativePowersWithZeroInnerRadius);
}

TEST_CASE("parallel driver reports the failing trial") {
    try {
        parallel_for_trials(8, 2, [](std::size_t t) {
            if (t == 5) throw Error("boom");
        });
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("trial 5") != std::string::npos);
    }
}

TEST_CASE("gaussianity diagnostics accept synthetic gaussian data") {
    SeededStream s(9, 0);
    const std::size_t trials = 4000;
    std::vector<std::vector<cd>> samples(trials);
    for (auto& row : samples) {
        const cd x = s.next_complex_gaussian();
        row = {x, std::conj(x) + 0.25 * s.next_complex_gaussian()};
    }
    const EnsembleStats stats = stats_from_samples(std::move(samples), {1, -1});
    const GaussianityReport report = gaussianity_report(stats);
    CHECK(!report.flagged());
    CHECK(!report.checks.empty());
}

TEST_CASE("gaussianity diagnostics flag a non-gaussian sample") {
    SeededStream s(10, 0);
    const std::size_t trials = 4000;
    std::vector<std::vector<cd>> samples(trials);
    for (auto& row : samples) {
        const cd z = s.next_complex_gaussian();
        // heavy-tailed modulus breaks the moment recursion
        row = {z * std::norm(z)};
    }
    const EnsembleStats stats = stats_from_samples(std::move(samples), {1});
    CHECK(gaussianity_report(stats).flagged());
}

TEST_CASE("gaussianity diagnostics need enough trials") {
    std::vector<std::vector<cd>> samples(100, {cd(0.0, 0.0)});
    const EnsembleStats stats = stats_from_samples(std::move(samples), {1});
    CHECK_THROWS_AS((void)gaussianity_report(stats), InsufficientTrials);
}
