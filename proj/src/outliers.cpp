#include "ringlab/outliers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ringlab/kernels.hpp"
#include "ringlab/montecarlo.hpp"

namespace ringlab {

namespace {

constexpr double kDetectMarginFactor = 0.05;  // delta = 0.05 (b - a)
constexpr double kMatchRadiusFactor = 10.0;   // radius = 10 / sqrt(N)

}  // namespace

void PerturbationSpec::validate() const {
    if (p_eigenvalues.size() > 8)
        throw ConfigError("perturbation rank must stay <= 8 (fixed rank, N-independent)");
}

std::size_t PerturbationSpec::rank() const { return p_eigenvalues.size(); }

OutlierPrediction predict(const PerturbationSpec& spec, const SingleRingModel& model) {
    spec.validate();
    OutlierPrediction pred;
    if (spec.variant == PerturbationVariant::APlusP) return pred;  // no outliers

    const double a = model.inner_radius;
    bool any_nonzero = false;
    for (const cd& lambda : spec.p_eigenvalues) any_nonzero |= lambda != cd(0.0);
    if (!any_nonzero) return pred;
    if (a <= 0.0)
        throw ConfigError("outlier prediction needs an inner radius a > 0");

    for (const cd& lambda : spec.p_eigenvalues) {
        if (std::abs(lambda) <= 1.0 / a) continue;  // below threshold: absorbed
        const cd loc = -1.0 / lambda;
        bool merged = false;
        for (auto& item : pred.items)
            if (item.source == lambda) {
                ++item.multiplicity;
                merged = true;
                break;
            }
        if (!merged) pred.items.push_back({loc, lambda, 1});
    }
    return pred;
}

ComplexMatrix build_perturbed(const ComplexMatrix& a, const PerturbationSpec& spec) {
    spec.validate();
    if (!a.square()) throw DimensionMismatch("build_perturbed: matrix must be square");
    const std::size_t n = a.rows();
    const std::size_t r = spec.rank();
    if (r > n) throw DimensionMismatch("build_perturbed: rank exceeds dimension");

    ComplexMatrix out = a;
    if (spec.variant == PerturbationVariant::APlusP) {
        // A(I + P): column j scaled by 1 + lambda_j
        for (std::size_t j = 0; j < r; ++j) {
            const cd f = 1.0 + spec.p_eigenvalues[j];
            for (std::size_t i = 0; i < n; ++i) out(i, j) *= f;
        }
        return out;
    }
    // A(I + AP): column j gains lambda_j A^2 e_j
    for (std::size_t j = 0; j < r; ++j) {
        const cd lambda = spec.p_eigenvalues[j];
        if (lambda == cd(0.0)) continue;
        for (std::size_t i = 0; i < n; ++i) {
            cd acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) acc += a(i, k) * a(k, j);
            out(i, j) += lambda * acc;
        }
    }
    return out;
}

std::vector<cd> filter_outliers(const std::vector<cd>& eigenvalues,
                                const SingleRingModel& model) {
    const double a = model.inner_radius, b = model.outer_radius;
    const double delta = kDetectMarginFactor * (b - a);
    std::vector<cd> out;
    for (const cd& z : eigenvalues) {
        const double m = std::abs(z);
        if ((a > 0.0 && m < a - delta) || m > b + delta) out.push_back(z);
    }
    return out;
}

std::vector<cd> detect(const PerturbationSpec& spec, const SingleRingModel& model,
                       std::size_t n, SeededStream& stream) {
    if (n < 200) throw ConfigError("detect: N must be >= 200 for a stable annulus");
    const ComplexMatrix a = sample_A(model, n, stream);
    const ComplexMatrix perturbed = build_perturbed(a, spec);
    return filter_outliers(eigenvalues(perturbed), model);
}

namespace {

// A = U diag(s) V (or U diag(s)) with factored Haar pieces: O(N^2) applies.
struct FactoredSample {
    FactoredUnitary u, v;
    std::vector<double> s;
    bool has_v = true;

    std::size_t dim() const { return s.size(); }

    void apply(std::vector<cd>& x) const {  // x := A x
        if (has_v) v.apply(x);
        for (std::size_t i = 0; i < s.size(); ++i) x[i] *= s[i];
        u.apply(x);
    }
    void apply_inverse(std::vector<cd>& x) const {  // x := A^{-1} x
        u.apply_adjoint(x);
        for (std::size_t i = 0; i < s.size(); ++i) x[i] /= s[i];
        if (has_v) v.apply_adjoint(x);
    }
};

FactoredSample sample_factored(const SingleRingModel& model, std::size_t n,
                               SeededStream& stream) {
    FactoredSample fs;
    fs.s = realize_singular_values(model.profile, n);
    fs.u = haar_factored(n, stream);
    fs.has_v = model.composition == Composition::UTV;
    if (fs.has_v) fs.v = haar_factored(n, stream);
    return fs;
}

// Woodbury applier for (A(I + AP))^{-1} = (I + W)^{-1} A^{-1}, W = AP rank r.
struct PerturbedInverse {
    const FactoredSample* a = nullptr;
    std::vector<std::vector<cd>> w_cols;  // lambda_j A e_j
    std::optional<LUFactors> small_lu;    // of I_r + V_r^T W

    void init(const FactoredSample& fs, const std::vector<cd>& lambdas) {
        a = &fs;
        const std::size_t n = fs.dim();
        const std::size_t r = lambdas.size();
        w_cols.clear();
        for (std::size_t j = 0; j < r; ++j) {
            std::vector<cd> col(n, 0.0);
            col[j] = 1.0;
            fs.apply(col);
            for (cd& z : col) z *= lambdas[j];
            w_cols.push_back(std::move(col));
        }
        ComplexMatrix m = ComplexMatrix::identity(r);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) m(i, j) += w_cols[j][i];
        small_lu = lu_factor(m);
    }

    void apply(std::vector<cd>& x) const {  // x := (A(I+AP))^{-1} x
        a->apply_inverse(x);
        const std::size_t r = w_cols.size();
        if (r == 0) return;
        std::vector<cd> t(r);
        for (std::size_t i = 0; i < r; ++i) t[i] = x[i];
        t = lu_solve(*small_lu, t);
        for (std::size_t j = 0; j < r; ++j)
            kernels::caxpy(x.size(), -t[j], w_cols[j].data(), x.data());
    }
};

// Ritz values of the dominant invariant subspace of op (subspace iteration
// with modified Gram-Schmidt re-orthonormalization).
std::vector<cd> dominant_ritz_values(const PerturbedInverse& op, std::size_t n,
                                     std::size_t block, SeededStream& stream) {
    std::vector<std::vector<cd>> q(block, std::vector<cd>(n));
    for (auto& col : q)
        for (cd& z : col) z = stream.next_complex_gaussian();

    auto orthonormalize = [&]() {
        for (std::size_t j = 0; j < block; ++j) {
            for (std::size_t i = 0; i < j; ++i) {
                const cd dot = kernels::cdotc(n, q[i].data(), q[j].data());
                kernels::caxpy(n, -dot, q[i].data(), q[j].data());
            }
            double norm = 0.0;
            for (const cd& z : q[j]) norm += std::norm(z);
            norm = std::sqrt(norm);
            if (norm == 0.0) {
                q[j][j % n] = 1.0;  // degenerate start; re-seed the direction
                norm = 1.0;
            }
            for (cd& z : q[j]) z /= norm;
        }
    };

    auto ritz = [&]() {
        ComplexMatrix h(block, block);
        for (std::size_t j = 0; j < block; ++j) {
            std::vector<cd> bj = q[j];
            op.apply(bj);
            for (std::size_t i = 0; i < block; ++i)
                h(i, j) = kernels::cdotc(n, q[i].data(), bj.data());
        }
        std::vector<cd> vals = eigenvalues(h);
        std::sort(vals.begin(), vals.end(),
                  [](cd x, cd y) { return std::abs(x) > std::abs(y); });
        return vals;
    };

    orthonormalize();
    std::vector<cd> prev;
    for (int it = 0; it < 500; ++it) {
        for (auto& col : q) op.apply(col);
        orthonormalize();
        if (it >= 10 && it % 10 == 0) {
            std::vector<cd> cur = ritz();
            if (!prev.empty()) {
                double change = 0.0;
                for (std::size_t i = 0; i < cur.size(); ++i)
                    change = std::max(change,
                                      std::abs(cur[i] - prev[i]) / (1.0 + std::abs(cur[i])));
                if (change < 1e-10) return cur;
            }
            prev = std::move(cur);
        }
    }
    return ritz();
}

std::vector<cd> locate_against_predictions(const OutlierPrediction& pred,
                                           const PerturbationSpec& spec,
                                           const SingleRingModel& model, std::size_t n,
                                           SeededStream& stream) {
    if (pred.items.empty()) return {};
    const FactoredSample fs = sample_factored(model, n, stream);
    PerturbedInverse inv;
    inv.init(fs, spec.p_eigenvalues);

    const std::size_t block = std::min<std::size_t>(pred.items.size() + 2, n);
    const std::vector<cd> ritz = dominant_ritz_values(inv, n, block, stream);

    const double radius = kMatchRadiusFactor / std::sqrt(static_cast<double>(n));
    std::vector<cd> located;
    for (const auto& item : pred.items) {
        cd best = 0.0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (const cd& theta : ritz) {
            if (theta == cd(0.0)) continue;
            const cd z = 1.0 / theta;
            const double d = std::abs(z - item.location);
            if (d < best_dist) {
                best_dist = d;
                best = z;
            }
        }
        if (best_dist > radius)
            throw MissingOutlier("no eigenvalue within the matching radius of " +
                                 std::to_string(item.location.real()) + "+" +
                                 std::to_string(item.location.imag()) + "i");
        located.push_back(best);
    }
    return located;
}

}  // namespace

std::vector<cd> locate_outliers_fast(const PerturbationSpec& spec,
                                     const SingleRingModel& model, std::size_t n,
                                     SeededStream& stream) {
    spec.validate();
    return locate_against_predictions(predict(spec, model), spec, model, n, stream);
}

FluctuationScale fluctuation_scale(const PerturbationSpec& spec,
                                   const SingleRingModel& model,
                                   const std::vector<std::size_t>& dims, std::size_t trials,
                                   std::uint64_t seed, int threads) {
    spec.validate();
    if (dims.empty()) throw ConfigError("fluctuation_scale: empty dimension list");
    if (trials < 2) throw ConfigError("fluctuation_scale: trials must be >= 2");
    const OutlierPrediction pred = predict(spec, model);
    if (pred.items.empty())
        throw MissingOutlier("fluctuation_scale: the perturbation predicts no outlier");
    for (const auto& item : pred.items)
        if (item.multiplicity != 1)
            throw ConfigError(
                "fluctuation_scale: only simple (multiplicity 1) outliers are supported");

    FluctuationScale result;
    result.dims = dims;
    for (std::size_t di = 0; di < dims.size(); ++di) {
        const std::size_t n = dims[di];
        // equalize cost across dimensions: O(N^3) per trial, so shrink trials
        const double ratio = static_cast<double>(dims[0]) / static_cast<double>(n);
        const std::size_t t_n = std::max<std::size_t>(
            8, static_cast<std::size_t>(std::llround(trials * std::sqrt(ratio))));
        std::vector<double> sq(t_n, 0.0);
        parallel_for_trials(t_n, threads, [&](std::size_t t) {
            SeededStream stream(seed, (static_cast<std::uint64_t>(n) << 24) + t);
            const std::vector<cd> located =
                locate_against_predictions(pred, spec, model, n, stream);
            double acc = 0.0;
            for (std::size_t i = 0; i < located.size(); ++i)
                acc += std::norm(located[i] - pred.items[i].location);
            sq[t] = acc / static_cast<double>(located.size());
        });
        double mean_sq = 0.0;
        for (double v : sq) mean_sq += v;
        mean_sq /= static_cast<double>(t_n);
        result.trials_used.push_back(t_n);
        result.rms.push_back(std::sqrt(mean_sq));
    }

    // weighted least-squares slope of log rms vs log N
    double sw = 0.0, sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        const double w = static_cast<double>(result.trials_used[i]);
        sw += w;
        sx += w * std::log(static_cast<double>(dims[i]));
        sy += w * std::log(result.rms[i]);
    }
    const double xbar = sx / sw, ybar = sy / sw;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        const double w = static_cast<double>(result.trials_used[i]);
        const double dx = std::log(static_cast<double>(dims[i])) - xbar;
        num += w * dx * (std::log(result.rms[i]) - ybar);
        den += w * dx * dx;
    }
    result.slope = den > 0.0 ? num / den : 0.0;
    return result;
}

}  // namespace ringlab
