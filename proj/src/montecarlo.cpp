#include "ringlab/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "ringlab/kernels.hpp"

namespace ringlab {

void parallel_for_trials(std::size_t trials, int threads,
                         const std::function<void(std::size_t)>& body) {
    unsigned workers = threads > 0 ? static_cast<unsigned>(threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, trials));
    if (workers <= 1) {
        for (std::size_t t = 0; t < trials; ++t) {
            try {
                body(t);
            } catch (const std::exception& e) {
                std::ostringstream msg;
                msg << "trial " << t << ": " << e.what();
                throw Error(msg.str());
            }
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::mutex fail_mutex;
    std::string fail_msg;
    std::atomic<bool> failed{false};

    auto worker = [&]() {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t t = next.fetch_add(1);
            if (t >= trials) return;
            try {
                body(t);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(fail_mutex);
                if (!failed.exchange(true)) {
                    std::ostringstream msg;
                    msg << "trial " << t << ": " << e.what();
                    fail_msg = msg.str();
                }
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
    if (failed) throw Error(fail_msg);
}

void ExperimentPlan::validate() const {
    if (trials < 2) throw ConfigError("plan requires trials >= 2");
    if (n < 1) throw ConfigError("plan requires N >= 1");
    for (const Observable& obs : observables) {
        if (obs.f.has_negative_powers() && !model.profile.supports_negative_powers())
            throw NegativePowersWithZeroInnerRadius(
                "observable uses negative powers but the profile touches 0");
        if (obs.weight == Observable::Weight::ScaledDyad &&
            (obs.dyad_left.size() != n || obs.dyad_right.size() != n))
            throw DimensionMismatch("dyad vectors must have length N");
        if (obs.weight == Observable::Weight::Custom &&
            (!obs.custom.square() || obs.custom.rows() != n))
            throw DimensionMismatch("custom weight must be N x N");
    }
}

namespace {

// mean and SE of the mean of a per-trial sequence
Moment reduce_mean(const std::vector<cd>& v) {
    const std::size_t t = v.size();
    cd sum = 0.0;
    for (const cd& x : v) sum += x;
    const cd mean = sum / static_cast<double>(t);
    double ss = 0.0;
    for (const cd& x : v) ss += std::norm(x - mean);
    const double se = t > 1 ? std::sqrt(ss / (static_cast<double>(t) * (t - 1.0))) : 0.0;
    return {mean, se};
}

EnsembleStats finalize(std::vector<std::vector<cd>> samples,
                       std::vector<std::optional<int>> single_powers, std::size_t dim) {
    EnsembleStats stats;
    stats.trials = samples.size();
    stats.dim = dim;
    const std::size_t k = samples.empty() ? 0 : samples[0].size();
    for (const auto& row : samples)
        if (row.size() != k) throw DimensionMismatch("ragged sample table");
    if (single_powers.size() != k)
        throw DimensionMismatch("single_powers size must match observable count");

    stats.pairs.assign(k, std::vector<PairStats>(k));
    std::vector<cd> scratch(stats.trials);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t t = 0; t < stats.trials; ++t)
                scratch[t] = samples[t][i] * samples[t][j];
            const Moment ps = reduce_mean(scratch);
            for (std::size_t t = 0; t < stats.trials; ++t)
                scratch[t] = samples[t][i] * std::conj(samples[t][j]);
            const Moment hs = reduce_mean(scratch);
            stats.pairs[i][j] = {ps.value, hs.value, ps.se, hs.se};
        }

    stats.moments.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        for (int p = 0; p <= 6; ++p)
            for (int q = 0; p + q <= 6; ++q) {
                if (p + q < 1) continue;
                for (std::size_t t = 0; t < stats.trials; ++t) {
                    const cd x = samples[t][i];
                    cd m = 1.0;
                    for (int e = 0; e < p; ++e) m *= x;
                    for (int e = 0; e < q; ++e) m *= std::conj(x);
                    scratch[t] = m;
                }
                stats.moments[i][{p, q}] = reduce_mean(scratch);
            }
    }

    stats.samples = std::move(samples);
    stats.single_powers = std::move(single_powers);
    return stats;
}

}  // namespace

EnsembleStats run(const ExperimentPlan& plan) {
    plan.validate();
    const std::size_t k = plan.observables.size();
    std::vector<std::vector<cd>> samples(plan.trials, std::vector<cd>(k));

    parallel_for_trials(plan.trials, plan.threads, [&](std::size_t t) {
        SeededStream stream(plan.seed, t);
        StatisticEvaluator ev(sample_A(plan.model, plan.n, stream));
        for (std::size_t i = 0; i < k; ++i) samples[t][i] = ev.eval(plan.observables[i]);
    });

    std::vector<std::optional<int>> powers(k);
    for (std::size_t i = 0; i < k; ++i) powers[i] = plan.observables[i].single_power();
    return finalize(std::move(samples), std::move(powers), plan.n);
}

EnsembleStats stats_from_samples(std::vector<std::vector<cd>> samples,
                                 std::vector<std::optional<int>> single_powers) {
    return finalize(std::move(samples), std::move(single_powers), 0);
}

bool GaussianityReport::flagged() const {
    for (const GaussianityCheck& c : checks)
        if (c.flagged) return true;
    return false;
}

namespace {

constexpr double kFlagThreshold = 4.0;

// Jackknife z-score of a smooth function of monomial means: cols[m][t] holds
// the t-th trial value of the m-th monomial; f maps monomial means to the
// residual being tested.
GaussianityCheck jackknife_check(const std::string& name,
                                 const std::vector<std::vector<cd>>& cols,
                                 const std::function<cd(const std::vector<cd>&)>& f) {
    const std::size_t t = cols.at(0).size();
    const std::size_t m = cols.size();
    std::vector<cd> sums(m, 0.0), means(m);
    for (std::size_t c = 0; c < m; ++c)
        for (const cd& v : cols[c]) sums[c] += v;
    for (std::size_t c = 0; c < m; ++c) means[c] = sums[c] / static_cast<double>(t);
    const cd full = f(means);

    std::vector<cd> loo(m);
    cd loo_sum = 0.0;
    std::vector<cd> loo_vals(t);
    for (std::size_t i = 0; i < t; ++i) {
        for (std::size_t c = 0; c < m; ++c)
            loo[c] = (sums[c] - cols[c][i]) / static_cast<double>(t - 1);
        loo_vals[i] = f(loo);
        loo_sum += loo_vals[i];
    }
    const cd loo_mean = loo_sum / static_cast<double>(t);
    double ss = 0.0;
    for (const cd& v : loo_vals) ss += std::norm(v - loo_mean);
    const double se = std::sqrt((static_cast<double>(t) - 1.0) / static_cast<double>(t) * ss);

    GaussianityCheck check;
    check.name = name;
    if (se > 0.0)
        check.z = std::abs(full) / se;
    else
        check.z = std::abs(full) == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    check.flagged = check.z > kFlagThreshold;
    return check;
}

std::vector<cd> monomial_column(const std::vector<std::vector<cd>>& samples, std::size_t i,
                                int p, int q) {
    std::vector<cd> col(samples.size());
    for (std::size_t t = 0; t < samples.size(); ++t) {
        const cd x = samples[t][i];
        cd m = 1.0;
        for (int e = 0; e < p; ++e) m *= x;
        for (int e = 0; e < q; ++e) m *= std::conj(x);
        col[t] = m;
    }
    return col;
}

std::vector<cd> product_column(const std::vector<std::vector<cd>>& samples, std::size_t i,
                               std::size_t j, int p) {
    std::vector<cd> col(samples.size());
    for (std::size_t t = 0; t < samples.size(); ++t) {
        const cd xy = samples[t][i] * samples[t][j];
        cd m = 1.0;
        for (int e = 0; e < p; ++e) m *= xy;
        col[t] = m;
    }
    return col;
}

}  // namespace

GaussianityReport gaussianity_report(const EnsembleStats& stats) {
    if (stats.trials < 500)
        throw InsufficientTrials("gaussianity_report needs at least 500 trials");
    GaussianityReport report;
    const std::size_t k = stats.samples.empty() ? 0 : stats.samples[0].size();

    for (std::size_t i = 0; i < k; ++i) {
        if (!stats.single_powers[i] || *stats.single_powers[i] == 0) continue;
        std::ostringstream prefix;
        prefix << "obs" << i;

        // phase test: rotation invariance kills every moment with p != q
        for (int p = 0; p <= 6; ++p)
            for (int q = 0; p + q <= 6; ++q) {
                if (p == q || p + q < 1) continue;
                const Moment m = stats.moments[i].at({p, q});
                GaussianityCheck check;
                check.name = prefix.str() + " phase m(" + std::to_string(p) + "," +
                             std::to_string(q) + ")";
                if (m.se > 0.0)
                    check.z = std::abs(m.value) / m.se;
                else
                    check.z = std::abs(m.value) == 0.0
                                  ? 0.0
                                  : std::numeric_limits<double>::infinity();
                check.flagged = check.z > kFlagThreshold;
                report.checks.push_back(check);
            }

        // moment recursion m_{p,p} = p sigma m_{p-1,p-1} with plug-in sigma
        for (int p = 2; 2 * p <= 6; ++p) {
            std::vector<std::vector<cd>> cols{monomial_column(stats.samples, i, p, p),
                                              monomial_column(stats.samples, i, p - 1, p - 1),
                                              monomial_column(stats.samples, i, 1, 1)};
            const double pp = p;
            report.checks.push_back(jackknife_check(
                prefix.str() + " recursion m(" + std::to_string(p) + "," +
                    std::to_string(p) + ")",
                cols, [pp](const std::vector<cd>& m) { return m[0] - pp * m[2] * m[1]; }));
        }
    }

    // pair checks for the lemma's (X, Y) structure: opposite single powers
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j || !stats.single_powers[i] || !stats.single_powers[j]) continue;
            const int ni = *stats.single_powers[i], nj = *stats.single_powers[j];
            if (ni <= 0 || ni != -nj) continue;
            std::ostringstream prefix;
            prefix << "pair(" << i << "," << j << ")";

            // E (XY)^p = p! sigma_XY^p
            double factorial = 1.0;
            for (int p = 2; p <= 3; ++p) {
                factorial *= p;
                std::vector<std::vector<cd>> cols{product_column(stats.samples, i, j, p),
                                                  product_column(stats.samples, i, j, 1)};
                const double fp = factorial;
                const int pp = p;
                report.checks.push_back(
                    jackknife_check(prefix.str() + " E(XY)^" + std::to_string(p), cols,
                                    [fp, pp](const std::vector<cd>& m) {
                                        cd s = 1.0;
                                        for (int e = 0; e < pp; ++e) s *= m[1];
                                        return m[0] - fp * s;
                                    }));
            }

            // m_{1,1,1,1} = sigma_X sigma_Y + |sigma_XY|^2
            std::vector<cd> xxyy(stats.trials);
            for (std::size_t t = 0; t < stats.trials; ++t)
                xxyy[t] = std::norm(stats.samples[t][i]) * std::norm(stats.samples[t][j]);
            std::vector<std::vector<cd>> cols{std::move(xxyy),
                                              monomial_column(stats.samples, i, 1, 1),
                                              monomial_column(stats.samples, j, 1, 1),
                                              product_column(stats.samples, i, j, 1)};
            report.checks.push_back(
                jackknife_check(prefix.str() + " m(1,1,1,1)", cols,
                                [](const std::vector<cd>& m) {
                                    return m[0] - m[1] * m[2] - m[3] * std::conj(m[3]);
                                }));
        }

    return report;
}

EllipticReport elliptic_submatrix_experiment(const SingleRingModel& model,
                                             const LaurentPoly& f, std::size_t k,
                                             std::size_t n, std::size_t trials,
                                             std::uint64_t seed, int threads) {
    if (k < 1 || k > n) throw ConfigError("corner size must satisfy 1 <= k <= N");
    if (trials < 2) throw ConfigError("trials must be >= 2");
    if (f.has_negative_powers() && !model.profile.supports_negative_powers())
        throw NegativePowersWithZeroInnerRadius(
            "f uses negative powers but the profile touches 0");

    std::vector<cd> herm(trials), cross(trials), square(trials), diag(trials);
    parallel_for_trials(trials, threads, [&](std::size_t t) {
        SeededStream stream(seed, t);
        const ComplexMatrix a = sample_A(model, n, stream);
        std::optional<LUFactors> lu;
        const double scale = std::sqrt(static_cast<double>(n));
        const int np = f.max_positive_degree(), nm = f.max_negative_degree();

        // corner columns of sqrt(N) (f(A) - a_0 I)
        std::vector<std::vector<cd>> x(k, std::vector<cd>(k, 0.0));
        for (std::size_t j = 0; j < k; ++j) {
            std::vector<cd> pos(n, 0.0), neg;
            pos[j] = 1.0;
            neg = pos;
            for (int m = 1; m <= std::max(np, nm); ++m) {
                if (m <= np) {
                    std::vector<cd> out(n);
                    for (std::size_t r = 0; r < n; ++r)
                        out[r] = kernels::cdotu(n, a.row(r), pos.data());
                    pos = std::move(out);
                    const cd c = f.coeff(m);
                    if (c != cd(0.0))
                        for (std::size_t r = 0; r < k; ++r) x[r][j] += scale * c * pos[r];
                }
                if (m <= nm) {
                    if (!lu) lu = lu_factor(a);
                    neg = lu_solve(*lu, neg);
                    const cd c = f.coeff(-m);
                    if (c != cd(0.0))
                        for (std::size_t r = 0; r < k; ++r) x[r][j] += scale * c * neg[r];
                }
            }
        }

        cd h = 0.0, cr = 0.0, sq = 0.0, dg = 0.0;
        std::size_t off = 0, unord = 0;
        for (std::size_t i = 0; i < k; ++i) {
            dg += x[i][i] * x[i][i];
            for (std::size_t j = 0; j < k; ++j) {
                if (i == j) continue;
                h += x[i][j] * std::conj(x[i][j]);
                sq += x[i][j] * x[i][j];
                ++off;
                if (i < j) {
                    cr += x[i][j] * x[j][i];
                    ++unord;
                }
            }
        }
        diag[t] = dg / static_cast<double>(k);
        herm[t] = off ? h / static_cast<double>(off) : cd(0.0);
        square[t] = off ? sq / static_cast<double>(off) : cd(0.0);
        cross[t] = unord ? cr / static_cast<double>(unord) : cd(0.0);
    });

    EllipticReport report;
    report.k = k;
    report.trials = trials;
    report.hermitian = reduce_mean(herm);
    report.cross = reduce_mean(cross);
    report.square = reduce_mean(square);
    report.diag_square = reduce_mean(diag);
    return report;
}

}  // namespace ringlab
