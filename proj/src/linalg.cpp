#include "ringlab/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "ringlab/kernels.hpp"

namespace ringlab {

namespace {

constexpr double kPivotTol = 1e-14;        // relative to ||A||_F
constexpr double kDeflateTol = 1e-12;      // relative subdiagonal threshold

void require_square(const ComplexMatrix& a, const char* what) {
    if (!a.square()) throw DimensionMismatch(std::string(what) + ": matrix must be square");
    if (!a.all_finite()) throw Error(std::string(what) + ": non-finite input");
}

}  // namespace

LUFactors lu_factor(const ComplexMatrix& a) {
    require_square(a, "lu_factor");
    const std::size_t n = a.rows();
    LUFactors f;
    f.lu = a;
    f.source_norm = frobenius_norm(a);
    f.perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;

    ComplexMatrix& lu = f.lu;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(lu(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = std::abs(lu(i, k));
            if (m > best) { best = m; p = i; }
        }
        if (best < kPivotTol * f.source_norm)
            throw SingularMatrix("lu_factor: matrix singular to working precision");
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(p, j));
            std::swap(f.perm[k], f.perm[p]);
            f.sign = -f.sign;
        }
        const cd pivot = lu(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const cd l = lu(i, k) / pivot;
            lu(i, k) = l;
            if (l != cd(0.0))
                kernels::caxpy(n - k - 1, -l, lu.row(k) + k + 1, lu.row(i) + k + 1);
        }
    }
    return f;
}

cd lu_det(const LUFactors& f) {
    cd d = static_cast<double>(f.sign);
    for (std::size_t i = 0; i < f.lu.rows(); ++i) d *= f.lu(i, i);
    return d;
}

ComplexMatrix lu_solve(const LUFactors& f, const ComplexMatrix& b) {
    const std::size_t n = f.lu.rows();
    if (b.rows() != n) throw DimensionMismatch("lu_solve: RHS row count mismatch");
    const std::size_t m = b.cols();
    ComplexMatrix y(n, m);
    for (std::size_t i = 0; i < n; ++i)
        std::copy(b.row(f.perm[i]), b.row(f.perm[i]) + m, y.row(i));
    // L y = P b
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = k + 1; i < n; ++i) {
            const cd l = f.lu(i, k);
            if (l != cd(0.0)) kernels::caxpy(m, -l, y.row(k), y.row(i));
        }
    // U x = y
    for (std::size_t k = n; k-- > 0;) {
        kernels::cscal(m, 1.0 / f.lu(k, k), y.row(k));
        for (std::size_t i = 0; i < k; ++i) {
            const cd u = f.lu(i, k);
            if (u != cd(0.0)) kernels::caxpy(m, -u, y.row(k), y.row(i));
        }
    }
    return y;
}

std::vector<cd> lu_solve(const LUFactors& f, const std::vector<cd>& b) {
    const std::size_t n = f.lu.rows();
    if (b.size() != n) throw DimensionMismatch("lu_solve: RHS size mismatch");
    std::vector<cd> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = b[f.perm[i]];
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = k + 1; i < n; ++i) y[i] -= f.lu(i, k) * y[k];
    for (std::size_t k = n; k-- > 0;) {
        y[k] /= f.lu(k, k);
        for (std::size_t i = 0; i < k; ++i) y[i] -= f.lu(i, k) * y[k];
    }
    return y;
}

ComplexMatrix lu_invert(const LUFactors& f) {
    return lu_solve(f, ComplexMatrix::identity(f.lu.rows()));
}

FactoredUnitary householder_qr(ComplexMatrix& a) {
    require_square(a, "householder_qr");
    const std::size_t n = a.rows();
    ComplexMatrix& r = a;
    FactoredUnitary q;
    q.v.resize(n);
    q.tau.assign(n, 0.0);
    q.phase.assign(n, cd(1.0));
    std::vector<cd> w(n);

    for (std::size_t k = 0; k < n; ++k) {
        double colnorm2 = 0.0;
        for (std::size_t i = k; i < n; ++i) colnorm2 += std::norm(r(i, k));
        const double colnorm = std::sqrt(colnorm2);
        std::vector<cd>& v = q.v[k];
        v.assign(n - k, cd(0.0));
        if (colnorm == 0.0) continue;
        const cd alpha = r(k, k);
        const cd phase = (alpha == cd(0.0)) ? cd(1.0) : alpha / std::abs(alpha);
        const cd beta = -phase * colnorm;
        v[0] = alpha - beta;
        double vnorm2 = std::norm(v[0]);
        for (std::size_t i = k + 1; i < n; ++i) {
            v[i - k] = r(i, k);
            vnorm2 += std::norm(v[i - k]);
        }
        if (vnorm2 == 0.0) continue;
        q.tau[k] = 2.0 / vnorm2;
        // w = v^* R[k:, k:]
        const std::size_t m = n - k;
        std::fill(w.begin(), w.begin() + m, cd(0.0));
        for (std::size_t i = k; i < n; ++i)
            kernels::caxpy(m, std::conj(v[i - k]), r.row(i) + k, w.data());
        for (std::size_t i = k; i < n; ++i)
            kernels::caxpy(m, -q.tau[k] * v[i - k], w.data(), r.row(i) + k);
        r(k, k) = beta;
        for (std::size_t i = k + 1; i < n; ++i) r(i, k) = 0.0;
    }
    return q;
}

void FactoredUnitary::apply(std::vector<cd>& x) const {
    const std::size_t n = dim();
    if (x.size() != n) throw DimensionMismatch("FactoredUnitary::apply: size mismatch");
    for (std::size_t i = 0; i < n; ++i) x[i] *= phase[i];
    for (std::size_t k = n; k-- > 0;) {
        if (tau[k] == 0.0) continue;
        const std::vector<cd>& vk = v[k];
        const cd dot = kernels::cdotc(vk.size(), vk.data(), x.data() + k);
        kernels::caxpy(vk.size(), -tau[k] * dot, vk.data(), x.data() + k);
    }
}

void FactoredUnitary::apply_adjoint(std::vector<cd>& x) const {
    const std::size_t n = dim();
    if (x.size() != n)
        throw DimensionMismatch("FactoredUnitary::apply_adjoint: size mismatch");
    for (std::size_t k = 0; k < n; ++k) {
        if (tau[k] == 0.0) continue;
        const std::vector<cd>& vk = v[k];
        const cd dot = kernels::cdotc(vk.size(), vk.data(), x.data() + k);
        kernels::caxpy(vk.size(), -tau[k] * dot, vk.data(), x.data() + k);
    }
    for (std::size_t i = 0; i < n; ++i) x[i] *= std::conj(phase[i]);
}

ComplexMatrix FactoredUnitary::dense() const {
    const std::size_t n = dim();
    ComplexMatrix q = ComplexMatrix::identity(n);
    std::vector<cd> w(n);
    for (std::size_t k = n; k-- > 0;) {
        if (tau[k] == 0.0) continue;
        const std::vector<cd>& vk = v[k];
        const std::size_t m = n - k;
        std::fill(w.begin(), w.begin() + m, cd(0.0));
        for (std::size_t i = k; i < n; ++i)
            kernels::caxpy(m, std::conj(vk[i - k]), q.row(i) + k, w.data());
        for (std::size_t i = k; i < n; ++i)
            kernels::caxpy(m, -tau[k] * vk[i - k], w.data(), q.row(i) + k);
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (phase[j] == cd(1.0)) continue;
        for (std::size_t i = 0; i < n; ++i) q(i, j) *= phase[j];
    }
    return q;
}

std::pair<ComplexMatrix, ComplexMatrix> qr_factor(const ComplexMatrix& a) {
    ComplexMatrix r = a;
    const FactoredUnitary q = householder_qr(r);
    return {q.dense(), std::move(r)};
}

ComplexMatrix hessenberg(const ComplexMatrix& a) {
    require_square(a, "hessenberg");
    const std::size_t n = a.rows();
    ComplexMatrix h = a;
    if (n < 3) return h;
    std::vector<cd> v(n), vbar(n), w(n), t(n);

    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t base = k + 1;
        double colnorm2 = 0.0;
        for (std::size_t i = base; i < n; ++i) colnorm2 += std::norm(h(i, k));
        const double colnorm = std::sqrt(colnorm2);
        if (colnorm == 0.0) continue;
        const cd alpha = h(base, k);
        const cd phase = (alpha == cd(0.0)) ? cd(1.0) : alpha / std::abs(alpha);
        const cd beta = -phase * colnorm;
        const std::size_t m = n - base;
        v[0] = alpha - beta;
        double vnorm2 = std::norm(v[0]);
        for (std::size_t i = base + 1; i < n; ++i) {
            v[i - base] = h(i, k);
            vnorm2 += std::norm(v[i - base]);
        }
        if (vnorm2 == 0.0) continue;
        const double tau = 2.0 / vnorm2;
        for (std::size_t i = 0; i < m; ++i) vbar[i] = std::conj(v[i]);

        // Left: H[base:, k:] -= tau v (v^* H[base:, k:])
        const std::size_t width = n - k;
        std::fill(w.begin(), w.begin() + width, cd(0.0));
        for (std::size_t i = base; i < n; ++i)
            kernels::caxpy(width, vbar[i - base], h.row(i) + k, w.data());
        for (std::size_t i = base; i < n; ++i)
            kernels::caxpy(width, -tau * v[i - base], w.data(), h.row(i) + k);
        // Right: H[:, base:] -= tau (H[:, base:] v) v^*
        for (std::size_t i = 0; i < n; ++i)
            t[i] = kernels::cdotu(m, h.row(i) + base, v.data());
        for (std::size_t i = 0; i < n; ++i)
            kernels::caxpy(m, -tau * t[i], vbar.data(), h.row(i) + base);

        h(base, k) = beta;
        for (std::size_t i = base + 1; i < n; ++i) h(i, k) = 0.0;
    }
    return h;
}

namespace {

// Eigenvalues of [[a, b], [c, d]]; returns the pair, second one closest to d.
std::pair<cd, cd> eig2x2(cd a, cd b, cd c, cd d) {
    const cd tr = a + d;
    const cd det = a * d - b * c;
    const cd disc = std::sqrt(tr * tr - 4.0 * det);
    cd l1 = (tr + disc) / 2.0;
    cd l2 = (tr - disc) / 2.0;
    if (std::abs(l1 - d) < std::abs(l2 - d)) std::swap(l1, l2);
    return {l1, l2};
}

}  // namespace

std::vector<cd> eigenvalues(const ComplexMatrix& a) {
    require_square(a, "eigenvalues");
    const std::size_t n = a.rows();
    ComplexMatrix h = hessenberg(a);
    std::vector<cd> eig(n);
    if (n == 1) { eig[0] = h(0, 0); return eig; }

    std::size_t hi = n - 1;
    std::size_t iters = 0, since_deflation = 0;
    const std::size_t max_iters = 30 * n;

    while (true) {
        // zero out negligible subdiagonals in the active part
        for (std::size_t k = hi; k >= 1; --k) {
            if (std::abs(h(k, k - 1)) <=
                kDeflateTol * (std::abs(h(k - 1, k - 1)) + std::abs(h(k, k))))
                h(k, k - 1) = 0.0;
            if (k == 1) break;
        }
        if (hi == 0) { eig[0] = h(0, 0); break; }
        if (h(hi, hi - 1) == cd(0.0)) {
            eig[hi] = h(hi, hi);
            --hi;
            since_deflation = 0;
            continue;
        }
        std::size_t lo = hi;
        while (lo > 0 && h(lo, lo - 1) != cd(0.0)) --lo;
        if (hi - lo == 1) {
            auto [l1, l2] = eig2x2(h(lo, lo), h(lo, hi), h(hi, lo), h(hi, hi));
            eig[lo] = l1;
            eig[hi] = l2;
            if (lo == 0) break;
            hi = lo - 1;
            since_deflation = 0;
            continue;
        }

        if (++iters > max_iters)
            throw NoConvergence("eigenvalues: shifted QR did not converge", n - 1 - hi);
        ++since_deflation;

        cd shift;
        if (since_deflation % 20 == 0) {
            // exceptional shift to break symmetry stalls
            shift = h(hi, hi) + std::abs(h(hi, hi - 1)) * cd(0.75, 0.4);
        } else {
            shift = eig2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi)).second;
        }

        for (std::size_t i = lo; i <= hi; ++i) h(i, i) -= shift;
        // QR by Givens on the Hessenberg block, then RQ
        std::vector<std::array<cd, 2>> rots(hi - lo);
        for (std::size_t k = lo; k < hi; ++k) {
            const cd x = h(k, k), y = h(k + 1, k);
            const double r = std::hypot(std::abs(x), std::abs(y));
            cd c(1.0), s(0.0);
            if (r > 0.0) { c = x / r; s = y / r; }
            rots[k - lo] = {c, s};
            // rows k, k+1, columns k..hi
            for (std::size_t j = k; j <= hi; ++j) {
                const cd t1 = h(k, j), t2 = h(k + 1, j);
                h(k, j) = std::conj(c) * t1 + std::conj(s) * t2;
                h(k + 1, j) = -s * t1 + c * t2;
            }
        }
        for (std::size_t k = lo; k < hi; ++k) {
            const cd c = rots[k - lo][0], s = rots[k - lo][1];
            const std::size_t top = std::min(k + 2, hi);
            for (std::size_t i = lo; i <= top; ++i) {
                const cd t1 = h(i, k), t2 = h(i, k + 1);
                h(i, k) = t1 * c + t2 * s;
                h(i, k + 1) = -t1 * std::conj(s) + t2 * std::conj(c);
            }
        }
        for (std::size_t i = lo; i <= hi; ++i) h(i, i) += shift;
    }
    return eig;
}

cd nearest_eigenvalue(const ComplexMatrix& a, cd shift) {
    require_square(a, "nearest_eigenvalue");
    const std::size_t n = a.rows();

    auto matvec = [&](const std::vector<cd>& v) {
        std::vector<cd> out(n);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = kernels::cdotu(n, a.row(i), v.data());
        return out;
    };
    auto normalize = [](std::vector<cd>& v) {
        double s = 0.0;
        for (const cd& z : v) s += std::norm(z);
        s = std::sqrt(s);
        for (cd& z : v) z /= s;
    };
    auto rayleigh = [&](const std::vector<cd>& v) {
        const std::vector<cd> av = matvec(v);
        return kernels::cdotc(n, v.data(), av.data());  // v normalized
    };

    std::vector<cd> v(n, cd(1.0, 0.0));
    normalize(v);
    cd mu = shift;
    for (int round = 0; round < 2; ++round) {
        ComplexMatrix b = ComplexMatrix::identity(n);
        b *= cd(-1.0) * mu;
        b += a;
        LUFactors f;
        try {
            f = lu_factor(b);
        } catch (const SingularMatrix&) {
            return mu;  // shift already is an eigenvalue to working precision
        }
        for (int it = 0; it < 6; ++it) {
            v = lu_solve(f, v);
            normalize(v);
        }
        mu = rayleigh(v);
    }
    return mu;
}

std::map<int, cd> power_traces(const ComplexMatrix& a, int n_plus, int n_minus) {
    require_square(a, "power_traces");
    if (n_plus < 0 || n_minus < 0) throw Error("power_traces: negative truncation degree");
    std::map<int, cd> result;

    if (n_plus >= 1) {
        result[1] = trace(a);
        ComplexMatrix power = a;  // holds A^{n-1} at loop entry
        for (int n = 2; n <= n_plus; ++n) {
            result[n] = trace_of_product(power, a);
            if (n < n_plus) power = matmul(power, a);
        }
    }
    if (n_minus >= 1) {
        const ComplexMatrix inv = lu_invert(lu_factor(a));
        result[-1] = trace(inv);
        ComplexMatrix power = inv;
        for (int n = 2; n <= n_minus; ++n) {
            result[-n] = trace_of_product(power, inv);
            if (n < n_minus) power = matmul(power, inv);
        }
    }
    return result;
}

}  // namespace ringlab
