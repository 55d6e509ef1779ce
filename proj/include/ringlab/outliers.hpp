#pragma once

#include <cstdint>
#include <vector>

#include "ringlab/model.hpp"

namespace ringlab {

// Finite-rank multiplicative perturbation, P realized as a diagonal
// top-left block (sufficient by unitary invariance of the model).
enum class PerturbationVariant {
    APlusP,   // A~ = A(I + P)
    APlusAP,  // A^ = A(I + AP)
};

struct PerturbationSpec {
    std::vector<cd> p_eigenvalues;
    PerturbationVariant variant = PerturbationVariant::APlusAP;

    void validate() const;  // rank <= 8
    std::size_t rank() const;
};

struct OutlierPrediction {
    struct Item {
        cd location;       // -1/lambda
        cd source;         // eigenvalue lambda of P
        int multiplicity = 1;
    };
    std::vector<Item> items;
};

// A~ has no outliers; A^ gets one outlier at -1/lambda per eigenvalue of P
// with |lambda| > 1/a. All predictions lie strictly inside the hole.
OutlierPrediction predict(const PerturbationSpec& spec, const SingleRingModel& model);

// Dense perturbed matrix from a sample of A.
ComplexMatrix build_perturbed(const ComplexMatrix& a, const PerturbationSpec& spec);

// Samples A, builds the perturbation, computes the full spectrum, and returns
// the eigenvalues outside the annulus margin (modulus < a - delta or
// > b + delta with delta = 0.05 (b - a)).
std::vector<cd> detect(const PerturbationSpec& spec, const SingleRingModel& model,
                       std::size_t n, SeededStream& stream);

// Annulus-margin filter used by detect, exposed for spectrum post-processing.
std::vector<cd> filter_outliers(const std::vector<cd>& eigenvalues,
                                const SingleRingModel& model);

struct FluctuationScale {
    std::vector<std::size_t> dims;
    std::vector<std::size_t> trials_used;
    std::vector<double> rms;  // per dim, over all trials and predictions
    double slope = 0.0;       // weighted LS fit of log rms against log N
};

// RMS distance of the detected outliers to their predicted locations across
// a list of dimensions; the paper's claim corresponds to slope -1/2. Large-N
// trials use factored Haar sampling and subspace iteration on the inverse of
// the perturbed matrix, so no O(N^3) eigensolve is needed.
FluctuationScale fluctuation_scale(const PerturbationSpec& spec,
                                   const SingleRingModel& model,
                                   const std::vector<std::size_t>& dims, std::size_t trials,
                                   std::uint64_t seed, int threads = 0);

// Outlier locations of one sampled perturbed matrix obtained by subspace
// iteration (matching radius 10/sqrt(N) around each prediction).
std::vector<cd> locate_outliers_fast(const PerturbationSpec& spec,
                                     const SingleRingModel& model, std::size_t n,
                                     SeededStream& stream);

}  // namespace ringlab
