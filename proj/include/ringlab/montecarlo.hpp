#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>

#include "ringlab/covariance.hpp"
#include "ringlab/laurent.hpp"
#include "ringlab/model.hpp"

namespace ringlab {

struct ExperimentPlan {
    SingleRingModel model;
    std::vector<Observable> observables;
    std::size_t n = 256;
    std::size_t trials = 2000;
    std::uint64_t seed = 0;
    int threads = 0;  // 0 = hardware concurrency

    void validate() const;
};

struct PairStats {
    cd pseudo, hermitian;
    double pseudo_se = 0.0, hermitian_se = 0.0;
};

struct Moment {
    cd value;
    double se = 0.0;
};

// m_hat[{p,q}] = (1/T) sum_t X_t^p conj(X_t)^q for 1 <= p + q <= 6.
using MomentTable = std::map<std::pair<int, int>, Moment>;

struct EnsembleStats {
    std::size_t trials = 0;
    std::size_t dim = 0;
    std::vector<std::vector<cd>> samples;              // [trial][observable]
    std::vector<std::vector<PairStats>> pairs;         // full matrix
    std::vector<MomentTable> moments;                  // per observable
    std::vector<std::optional<int>> single_powers;     // phase-test gate
};

// Runs the plan: per-trial RNG streams, results reduced in trial order, so
// the output is identical for any thread count.
EnsembleStats run(const ExperimentPlan& plan);

// Builds EnsembleStats from externally supplied per-trial samples (used to
// feed synthetic data into the diagnostics).
EnsembleStats stats_from_samples(std::vector<std::vector<cd>> samples,
                                 std::vector<std::optional<int>> single_powers);

struct GaussianityCheck {
    std::string name;
    double z = 0.0;  // |residual| / jackknife SE
    bool flagged = false;
};

struct GaussianityReport {
    std::vector<GaussianityCheck> checks;
    bool flagged() const;
};

// Moment-recursion and phase diagnostics for asymptotic Gaussianity; checks
// are gated to observables whose Laurent support is a single power.
GaussianityReport gaussianity_report(const EnsembleStats& stats);

struct EllipticReport {
    std::size_t k = 0;
    std::size_t trials = 0;
    Moment hermitian;    // E X_ij conj(X_ij), i != j  (target 1)
    Moment cross;        // E X_ij X_ji, i < j         (target rho)
    Moment square;       // E X_ij^2, i != j           (target 0)
    Moment diag_square;  // E X_ii^2                   (target rho)
};

// Moments of the k x k corner of sqrt(N)(f(A) - a_0 I).
EllipticReport elliptic_submatrix_experiment(const SingleRingModel& model,
                                             const LaurentPoly& f, std::size_t k,
                                             std::size_t n, std::size_t trials,
                                             std::uint64_t seed, int threads = 0);

// Shared trial-parallel driver: runs body(t) for t in [0, trials) on up to
// `threads` workers; rethrows the first failure with its trial index.
void parallel_for_trials(std::size_t trials, int threads,
                         const std::function<void(std::size_t)>& body);

}  // namespace ringlab
