#include "ringlab/rng.hpp"

#include <cmath>

#include "ringlab/linalg.hpp"

namespace ringlab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

SeededStream::SeededStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : seed_(master_seed), index_(stream_index) {
    const std::uint64_t mixed =
        splitmix64(splitmix64(master_seed) ^ splitmix64(stream_index ^ 0xA5A5A5A5A5A5A5A5ULL));
    gen_.seed(mixed);
}

std::uint64_t SeededStream::next_u64() { return gen_(); }

double SeededStream::next_unit() {
    // 53-bit mantissa, shifted into (0, 1]
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

cd SeededStream::next_complex_gaussian() {
    const double u = next_unit();
    const double v = next_unit();
    const double r = std::sqrt(-std::log(u));
    const double theta = 2.0 * M_PI * v;
    return cd(r * std::cos(theta), r * std::sin(theta));
}

ComplexMatrix ginibre(std::size_t n, SeededStream& stream) {
    if (n < 1) throw Error("ginibre: dimension must be >= 1");
    ComplexMatrix m(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    cd* p = m.data();
    for (std::size_t i = 0; i < n * n; ++i) p[i] = scale * stream.next_complex_gaussian();
    return m;
}

FactoredUnitary haar_factored(std::size_t n, SeededStream& stream) {
    ComplexMatrix r = ginibre(n, stream);
    FactoredUnitary q = householder_qr(r);
    // Without this phase fix the map Ginibre -> Q is not Haar.
    for (std::size_t j = 0; j < n; ++j) {
        const cd d = r(j, j);
        const double m = std::abs(d);
        q.phase[j] = (m == 0.0) ? cd(1.0) : std::conj(d) / m;
    }
    return q;
}

ComplexMatrix haar_unitary(std::size_t n, SeededStream& stream) {
    return haar_factored(n, stream).dense();
}

}  // namespace ringlab
