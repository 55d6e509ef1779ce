#pragma once

#include <cstdint>
#include <random>

#include "ringlab/complex_matrix.hpp"
#include "ringlab/linalg.hpp"

namespace ringlab {

// Deterministic per-trial random stream: identical (seed, index) pairs give
// bit-identical sequences, distinct indices give independent streams.
// Gaussian variates are produced by an in-house Box-Muller so that output
// does not depend on the standard library's distribution implementation.
class SeededStream {
public:
    SeededStream(std::uint64_t master_seed, std::uint64_t stream_index);

    std::uint64_t master_seed() const { return seed_; }
    std::uint64_t stream_index() const { return index_; }

    std::uint64_t next_u64();
    // uniform in (0, 1]
    double next_unit();
    // standard complex Gaussian: Re, Im independent N(0, 1/2), E|z|^2 = 1
    cd next_complex_gaussian();

private:
    std::uint64_t seed_, index_;
    std::mt19937_64 gen_;
};

// i.i.d. entries N_C(0, 1/N)
ComplexMatrix ginibre(std::size_t n, SeededStream& stream);

// Haar-distributed unitary: QR of a Ginibre sample with the R-diagonal
// phase correction Q <- Q diag(conj(r_ii)/|r_ii|).
ComplexMatrix haar_unitary(std::size_t n, SeededStream& stream);

// Same distribution in Householder-factored form (O(n^2) vector applies).
FactoredUnitary haar_factored(std::size_t n, SeededStream& stream);

}  // namespace ringlab
