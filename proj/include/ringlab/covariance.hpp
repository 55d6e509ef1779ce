#pragma once

#include "ringlab/laurent.hpp"

namespace ringlab {

// Limit data for one observable pair (i, j).
struct PairParams {
    cd tau_i = 1.0, tau_j = 1.0;  // N^-1 Tr M limits
    cd alpha = 1.0;               // N^-1 Tr M_i M_j^* limit
    cd beta = 1.0;                // N^-1 Tr M_i M_j limit

    static PairParams identity_weight() { return {}; }
};

struct CovarianceReport {
    cd pseudo;     // E G_i G_j
    cd hermitian;  // E G_i conj(G_j)
};

// Limit covariance of (Tr f_i(A)M_i - a_0 Tr M_i, Tr f_j(A)M_j - a_0 Tr M_j).
CovarianceReport theorem_covariance(const LaurentPoly& fi, const LaurentPoly& fj,
                                    const PairParams& params, double a, double b);

// Covariance of the white-noise statistic Tr phi_n^{+-}(A):
// hermitian = 2n, pseudo = +-2n(a/b)^n.
CovarianceReport white_noise_covariance(int n, int sign, double a, double b);

enum class Region { InsideHole, Outside };

// Closed-form kernels of the resolvent process Tr (z - A)^{-1}. The
// inside-hole hermitian kernel is a^2/(a^2 - z conj(z'))^2 and the outside
// one b^2/(b^2 - z conj(z'))^2, as obtained by summing the linear-statistics
// covariance series of the resolvent's Laurent expansion.
CovarianceReport resolvent_kernel(cd z, cd zp, Region region_z, Region region_zp, double a,
                                  double b);

// Same kernels from the truncated series (the oracle route).
CovarianceReport resolvent_kernel_series(cd z, cd zp, Region region_z, Region region_zp,
                                         double a, double b, int truncation);

// Covariance kernel of the centered real process log|det(z - A)| - centering.
double logdet_kernel(cd z, cd zp, Region region_z, Region region_zp, double a, double b);

// kappa inner-product limits of a ScaledDyad pair (M = sqrt(N) a b^*).
struct KappaPair {
    cd aa_ji;  // a_j^* a_i
    cd bb_ij;  // b_i^* b_j
    cd ba_ij;  // b_i^* a_j
    cd ba_ji;  // b_j^* a_i
};

KappaPair kappa_from_vectors(const std::vector<cd>& left_i, const std::vector<cd>& right_i,
                             const std::vector<cd>& left_j, const std::vector<cd>& right_j);

CovarianceReport dyad_covariance(const LaurentPoly& fi, const LaurentPoly& fj,
                                 const KappaPair& kappa, double a, double b);

// Elliptic parameter rho = 2 sum_{n>=1} a_n(f) a_{-n}(f); f must satisfy
// sum |a_n|^2 b^{2n} + |a_{-n}|^2 a^{-2n} = 1.
cd elliptic_rho(const LaurentPoly& f, double a, double b);

}  // namespace ringlab
