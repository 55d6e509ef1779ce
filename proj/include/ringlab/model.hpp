#pragma once

#include <utility>
#include <vector>

#include "ringlab/complex_matrix.hpp"
#include "ringlab/rng.hpp"

namespace ringlab {

// Limiting singular-value law of T together with its finite-N realization.
struct SingularProfile {
    enum class Kind { Identity, UniformInterval, Atoms };

    Kind kind = Kind::Identity;
    double lo = 0.0, hi = 0.0;                       // UniformInterval
    std::vector<std::pair<double, double>> atoms;    // (value, weight)

    static SingularProfile identity();
    static SingularProfile uniform(double lo, double hi);
    static SingularProfile discrete(std::vector<std::pair<double, double>> atoms);

    void validate() const;
    // true iff the support is bounded away from 0, so negative powers exist
    bool supports_negative_powers() const;
    // quantile of the law at p in (0, 1)
    double quantile(double p) const;
};

// (a, b) of the limiting annulus; a = 0 when the x^-2 integral diverges.
std::pair<double, double> annulus_radii(const SingularProfile& profile);

// Deterministic diagonal T: profile quantiles at midpoints (i - 1/2)/N.
std::vector<double> realize_singular_values(const SingularProfile& profile, std::size_t n);
ComplexMatrix realize_T(const SingularProfile& profile, std::size_t n);

enum class Composition { UTV, UT };

struct SingleRingModel {
    SingularProfile profile;
    double inner_radius = 0.0;
    double outer_radius = 0.0;
    Composition composition = Composition::UTV;

    static SingleRingModel make(SingularProfile profile,
                                Composition composition = Composition::UTV);
};

// A = U T V (or U T), with fresh Haar factors from the stream.
ComplexMatrix sample_A(const SingleRingModel& model, std::size_t n, SeededStream& stream);

}  // namespace ringlab
