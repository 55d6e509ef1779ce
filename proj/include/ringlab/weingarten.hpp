#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ringlab/errors.hpp"

namespace ringlab {

using rational = boost::multiprecision::cpp_rational;

// Element of S_k in one-line notation on {0..k-1}.
class Permutation {
public:
    explicit Permutation(std::vector<int> images);
    static Permutation identity(int k);

    int k() const { return static_cast<int>(images_.size()); }
    int operator()(int i) const { return images_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& images() const { return images_; }

    Permutation inverse() const;
    Permutation compose(const Permutation& other) const;  // (this o other)(i)

    std::vector<int> cycle_type() const;  // partition of k, sorted descending
    int num_cycles() const;
    int length() const { return k() - num_cycles(); }  // |sigma|

private:
    std::vector<int> images_;
};

std::vector<Permutation> all_permutations(int k);

// Moeb(sigma) = prod over cycles of (-1)^{len-1} Cat_{len-1}.
long long moebius(const Permutation& sigma);

// Exact Weingarten values for S_k at dimension n, keyed by cycle type.
struct WgTable {
    int k = 0;
    long long n = 0;
    std::map<std::vector<int>, rational> values;

    const rational& operator()(const Permutation& sigma) const;
    const rational& operator()(const std::vector<int>& cycle_type) const;
};

// Solves sum_tau N^{#cycles(sigma tau^-1)} Wg(tau) = delta_{sigma,id} in
// exact rational arithmetic, collapsed to cycle-type classes.
WgTable wg_table(int k, long long n);

// E[u_{i1 j1}...u_{ik jk} conj(u)_{i'1 j'1}...conj(u)_{i'k j'k}] per eq. of
// Haar moments: sum over matching permutation pairs weighted by Wg.
rational mixed_moment(const std::vector<int>& i, const std::vector<int>& j,
                      const std::vector<int>& ip, const std::vector<int>& jp,
                      const WgTable& table);
rational mixed_moment(const std::vector<int>& i, const std::vector<int>& j,
                      const std::vector<int>& ip, const std::vector<int>& jp, long long n);

// Dense square matrix over the rationals, just enough for the exact oracle.
class RationalMatrix {
public:
    explicit RationalMatrix(std::size_t n) : n_(n), data_(n * n) {}
    static RationalMatrix identity(std::size_t n);

    std::size_t dim() const { return n_; }
    rational& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    const rational& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

private:
    std::size_t n_;
    std::vector<rational> data_;
};

rational rtrace(const RationalMatrix& a);
rational rtrace_product(const RationalMatrix& a, const RationalMatrix& b);  // Tr(AB)

// E Tr(A V B V*) Tr(C V D V*) for Haar V, closed form:
//   (Tr A Tr C Tr B Tr D + Tr AC Tr BD)/(N^2-1)
// - (Tr A Tr C Tr BD + Tr AC Tr B Tr D)/(N(N^2-1)).
rational exact_two_trace(const RationalMatrix& a, const RationalMatrix& b,
                         const RationalMatrix& c, const RationalMatrix& d);

// Same expectation by brute-force index summation over the Haar moment sum.
rational exact_two_trace_brute(const RationalMatrix& a, const RationalMatrix& b,
                               const RationalMatrix& c, const RationalMatrix& d);

// One trace factor of a moment word: Tr(A^power M) or its conjugate, A = UT.
struct TraceFactor {
    int power = 1;                          // nonzero; negative uses T^{-1}U*
    std::optional<RationalMatrix> weight;   // nullopt means M = I
    bool conjugated = false;
};

// Exact E[prod_t Tr(A^{n_t} M_t)^{(conj)}] for A = U diag(s), by brute-force
// index summation with multiset pruning. Throws ComplexityBudgetExceeded when
// the index sum would exceed max_assignments.
rational exact_trace_moment(const std::vector<TraceFactor>& word,
                            const std::vector<rational>& s,
                            std::uint64_t max_assignments = 50'000'000);

}  // namespace ringlab
