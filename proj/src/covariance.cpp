#include "ringlab/covariance.hpp"

#include <cmath>

namespace ringlab {

namespace {

void check_radii(double a, double b) {
    if (!(b > 0.0) || a < 0.0 || a > b)
        throw ConfigError("annulus radii require 0 <= a <= b, b > 0");
}

void check_negative_support(const LaurentPoly& f, double a) {
    if (a == 0.0 && f.has_negative_powers())
        throw NegativePowersWithZeroInnerRadius(
            "negative Laurent powers need an inner radius a > 0");
}

// Shared sum structure of the limit theorem: per-n coefficients
//   pseudo_n    = a_n(f_i) a_{-n}(f_j) + a_{-n}(f_i) a_n(f_j)
//   hermitian_n = a_n(f_i) conj(a_n(f_j)) b^{2n} + a_{-n}(f_i) conj(a_{-n}(f_j)) a^{-2n}
// combined with pair weights w_pseudo(n), w_hermitian(n).
template <class WP, class WH>
CovarianceReport sum_covariance(const LaurentPoly& fi, const LaurentPoly& fj, double a,
                                double b, WP w_pseudo, WH w_hermitian) {
    check_radii(a, b);
    check_negative_support(fi, a);
    check_negative_support(fj, a);
    const int nmax = std::max(std::max(fi.max_positive_degree(), fi.max_negative_degree()),
                              std::max(fj.max_positive_degree(), fj.max_negative_degree()));
    CovarianceReport r{0.0, 0.0};
    for (int n = 1; n <= nmax; ++n) {
        const cd ain = fi.coeff(n), aim = fi.coeff(-n);
        const cd ajn = fj.coeff(n), ajm = fj.coeff(-n);
        r.pseudo += w_pseudo(n) * (ain * ajm + aim * ajn);
        cd h = ain * std::conj(ajn) * std::pow(b, 2 * n);
        if (a > 0.0) h += aim * std::conj(ajm) * std::pow(a, -2 * n);
        r.hermitian += w_hermitian(n) * h;
    }
    return r;
}

}  // namespace

CovarianceReport theorem_covariance(const LaurentPoly& fi, const LaurentPoly& fj,
                                    const PairParams& p, double a, double b) {
    return sum_covariance(
        fi, fj, a, b,
        [&](int n) { return cd(n - 1.0) * p.tau_i * p.tau_j + p.beta; },
        [&](int n) { return cd(n - 1.0) * p.tau_i * std::conj(p.tau_j) + p.alpha; });
}

CovarianceReport white_noise_covariance(int n, int sign, double a, double b) {
    check_radii(a, b);
    if (n < 1) throw Error("white_noise_covariance: n must be >= 1");
    if (sign != 1 && sign != -1) throw Error("white_noise_covariance: sign must be +1 or -1");
    // Tr phi_n has hermitian variance 2n: the n = 1 weight of the limit
    // covariance acts on both the b^{2n} and a^{-2n} halves of the basis.
    const double ratio = a == 0.0 ? 0.0 : std::pow(a / b, n);
    return {cd(sign * 2.0 * n * ratio), cd(2.0 * n)};
}

namespace {

void check_region(cd z, Region region, double a, double b) {
    const double m = std::abs(z);
    if (region == Region::InsideHole) {
        if (!(m < a)) throw RegionViolation("point declared inside the hole has |z| >= a");
    } else {
        if (!(m > b)) throw RegionViolation("point declared outside has |z| <= b");
    }
}

// Laurent expansion of w -> 1/(z - w) on the annulus:
//   |z| > b: f_z(w) = sum_{k>=0} z^{-k-1} w^k, so a_k(f_z) = z^{-k-1};
//   |z| < a: f_z(w) = -sum_{m>=1} z^{m-1} w^{-m}, so a_{-m}(f_z) = -z^{m-1}.
LaurentPoly resolvent_series_poly(cd z, Region region, int truncation) {
    LaurentPoly f;
    if (region == Region::Outside) {
        cd c = 1.0 / (z * z);  // a_1
        for (int k = 1; k <= truncation; ++k, c /= z) f.set(k, c);
    } else {
        cd c = -1.0;  // a_{-1}
        for (int m = 1; m <= truncation; ++m, c *= z) f.set(-m, c);
    }
    return f;
}

}  // namespace

CovarianceReport resolvent_kernel(cd z, cd zp, Region region_z, Region region_zp, double a,
                                  double b) {
    check_radii(a, b);
    check_region(z, region_z, a, b);
    check_region(zp, region_zp, a, b);
    if (region_z == region_zp) {
        cd h;
        if (region_z == Region::InsideHole) {
            if (a == 0.0)
                throw RegionViolation("no hole: a = 0 admits no inside evaluation points");
            const cd d = a * a - z * std::conj(zp);
            h = a * a / (d * d);
        } else {
            const cd d = b * b - z * std::conj(zp);
            h = b * b / (d * d);
        }
        return {cd(0.0), h};
    }
    // one point per side: only the pseudo-covariance survives
    const cd d = z - zp;
    return {-1.0 / (d * d), cd(0.0)};
}

CovarianceReport resolvent_kernel_series(cd z, cd zp, Region region_z, Region region_zp,
                                         double a, double b, int truncation) {
    check_radii(a, b);
    check_region(z, region_z, a, b);
    check_region(zp, region_zp, a, b);
    if (truncation < 1) throw ConfigError("series truncation must be >= 1");
    if (region_z == Region::InsideHole || region_zp == Region::InsideHole) {
        if (a == 0.0)
            throw RegionViolation("no hole: a = 0 admits no inside evaluation points");
    }
    const LaurentPoly fz = resolvent_series_poly(z, region_z, truncation);
    const LaurentPoly fzp = resolvent_series_poly(zp, region_zp, truncation);
    return theorem_covariance(fz, fzp, PairParams::identity_weight(), a, b);
}

double logdet_kernel(cd z, cd zp, Region region_z, Region region_zp, double a, double b) {
    check_radii(a, b);
    check_region(z, region_z, a, b);
    check_region(zp, region_zp, a, b);
    if (region_z == region_zp) {
        if (region_z == Region::InsideHole) {
            if (a == 0.0)
                throw RegionViolation("no hole: a = 0 admits no inside evaluation points");
            return -0.5 * std::log(std::abs(1.0 - z * std::conj(zp) / (a * a)));
        }
        return -0.5 * std::log(std::abs(1.0 - b * b / (z * std::conj(zp))));
    }
    const cd inside = region_z == Region::InsideHole ? z : zp;
    const cd outside = region_z == Region::InsideHole ? zp : z;
    if (a == 0.0) throw RegionViolation("no hole: a = 0 admits no inside evaluation points");
    return -0.5 * std::log(std::abs(1.0 - inside / outside));
}

KappaPair kappa_from_vectors(const std::vector<cd>& left_i, const std::vector<cd>& right_i,
                             const std::vector<cd>& left_j, const std::vector<cd>& right_j) {
    const std::size_t n = left_i.size();
    if (right_i.size() != n || left_j.size() != n || right_j.size() != n)
        throw DimensionMismatch("dyad vectors must share a dimension");
    auto dot = [n](const std::vector<cd>& x, const std::vector<cd>& y) {
        cd s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += std::conj(x[k]) * y[k];
        return s;
    };
    return {dot(right_j, right_i), dot(left_i, left_j), dot(left_i, right_j),
            dot(left_j, right_i)};
}

CovarianceReport dyad_covariance(const LaurentPoly& fi, const LaurentPoly& fj,
                                 const KappaPair& kappa, double a, double b) {
    // ScaledDyad weights have tau = 0; the remaining theorem weights are
    // beta = kappa^{b,a}_{ij} kappa^{b,a}_{ji} and
    // alpha = kappa^{b,b}_{ij} kappa^{a,a}_{ji}.
    const cd beta = kappa.ba_ij * kappa.ba_ji;
    const cd alpha = kappa.bb_ij * kappa.aa_ji;
    return sum_covariance(
        fi, fj, a, b, [&](int) { return beta; }, [&](int) { return alpha; });
}

cd elliptic_rho(const LaurentPoly& f, double a, double b) {
    check_radii(a, b);
    check_negative_support(f, a);
    const int nmax = std::max(f.max_positive_degree(), f.max_negative_degree());
    double norm = 0.0;
    cd rho = 0.0;
    for (int n = 1; n <= nmax; ++n) {
        const cd an = f.coeff(n), am = f.coeff(-n);
        norm += std::norm(an) * std::pow(b, 2 * n);
        if (a > 0.0) norm += std::norm(am) * std::pow(a, -2 * n);
        rho += 2.0 * an * am;
    }
    if (std::abs(norm - 1.0) > 1e-10)
        throw NormalizationError("elliptic_rho: hermitian variance of f must equal 1");
    return rho;
}

}  // namespace ringlab
