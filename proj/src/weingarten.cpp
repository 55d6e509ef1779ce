#include "ringlab/weingarten.hpp"

#include <algorithm>
#include <numeric>

namespace ringlab {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (int v : images_) {
        if (v < 0 || v >= k() || seen[static_cast<std::size_t>(v)])
            throw Error("Permutation: images are not a bijection on {0..k-1}");
        seen[static_cast<std::size_t>(v)] = true;
    }
}

Permutation Permutation::identity(int k) {
    std::vector<int> im(static_cast<std::size_t>(k));
    std::iota(im.begin(), im.end(), 0);
    return Permutation(std::move(im));
}

Permutation Permutation::inverse() const {
    std::vector<int> im(images_.size());
    for (int i = 0; i < k(); ++i) im[static_cast<std::size_t>(images_[i])] = i;
    return Permutation(std::move(im));
}

Permutation Permutation::compose(const Permutation& other) const {
    if (other.k() != k()) throw DimensionMismatch("Permutation::compose: size mismatch");
    std::vector<int> im(images_.size());
    for (int i = 0; i < k(); ++i) im[static_cast<std::size_t>(i)] = (*this)(other(i));
    return Permutation(std::move(im));
}

std::vector<int> Permutation::cycle_type() const {
    std::vector<bool> seen(images_.size(), false);
    std::vector<int> type;
    for (int i = 0; i < k(); ++i) {
        if (seen[static_cast<std::size_t>(i)]) continue;
        int len = 0, j = i;
        while (!seen[static_cast<std::size_t>(j)]) {
            seen[static_cast<std::size_t>(j)] = true;
            j = (*this)(j);
            ++len;
        }
        type.push_back(len);
    }
    std::sort(type.begin(), type.end(), std::greater<int>());
    return type;
}

int Permutation::num_cycles() const { return static_cast<int>(cycle_type().size()); }

std::vector<Permutation> all_permutations(int k) {
    if (k < 1 || k > 6) throw Error("all_permutations: k must be in [1, 6]");
    std::vector<int> im(static_cast<std::size_t>(k));
    std::iota(im.begin(), im.end(), 0);
    std::vector<Permutation> out;
    do {
        out.emplace_back(im);
    } while (std::next_permutation(im.begin(), im.end()));
    return out;
}

long long moebius(const Permutation& sigma) {
    static constexpr long long catalan[] = {1, 1, 2, 5, 14, 42};
    long long m = 1;
    for (int len : sigma.cycle_type()) {
        const long long cat = catalan[len - 1];
        m *= (len % 2 == 0) ? -cat : cat;
    }
    return m;
}

const rational& WgTable::operator()(const std::vector<int>& cycle_type) const {
    const auto it = values.find(cycle_type);
    if (it == values.end()) throw Error("WgTable: unknown cycle type");
    return it->second;
}

const rational& WgTable::operator()(const Permutation& sigma) const {
    return (*this)(sigma.cycle_type());
}

WgTable wg_table(int k, long long n) {
    if (k < 1 || k > 6) throw Error("wg_table: k must be in [1, 6]");
    if (n < k) throw GramSingular("wg_table: requires N >= k");

    const std::vector<Permutation> perms = all_permutations(k);
    std::vector<std::vector<int>> classes;  // cycle types, discovery order
    std::vector<std::size_t> class_of(perms.size());
    for (std::size_t p = 0; p < perms.size(); ++p) {
        const std::vector<int> type = perms[p].cycle_type();
        auto it = std::find(classes.begin(), classes.end(), type);
        if (it == classes.end()) {
            classes.push_back(type);
            it = std::prev(classes.end());
        }
        class_of[p] = static_cast<std::size_t>(it - classes.begin());
    }
    const std::size_t m = classes.size();

    // representative per class
    std::vector<std::size_t> rep(m);
    for (std::size_t p = perms.size(); p-- > 0;) rep[class_of[p]] = p;

    std::vector<rational> npow(static_cast<std::size_t>(k) + 1);
    npow[0] = 1;
    for (std::size_t e = 1; e <= static_cast<std::size_t>(k); ++e) npow[e] = npow[e - 1] * n;

    // class-collapsed Gram system: G[c][d] = sum_{tau in d} N^{#cycles(sigma_c tau^-1)}
    std::vector<std::vector<rational>> g(m, std::vector<rational>(m + 1));
    const std::vector<int> id_type(static_cast<std::size_t>(k), 1);
    for (std::size_t c = 0; c < m; ++c) {
        const Permutation& sc = perms[rep[c]];
        for (std::size_t p = 0; p < perms.size(); ++p) {
            const int cyc = sc.compose(perms[p].inverse()).num_cycles();
            g[c][class_of[p]] += npow[static_cast<std::size_t>(cyc)];
        }
        g[c][m] = classes[c] == id_type ? 1 : 0;
    }

    // rational Gaussian elimination
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        while (piv < m && g[piv][col] == 0) ++piv;
        if (piv == m) throw GramSingular("wg_table: Gram matrix is singular");
        std::swap(g[col], g[piv]);
        for (std::size_t r = 0; r < m; ++r) {
            if (r == col || g[r][col] == 0) continue;
            const rational f = g[r][col] / g[col][col];
            for (std::size_t cc = col; cc <= m; ++cc) g[r][cc] -= f * g[col][cc];
        }
    }

    WgTable table;
    table.k = k;
    table.n = n;
    for (std::size_t c = 0; c < m; ++c) table.values[classes[c]] = g[c][m] / g[c][c];
    return table;
}

namespace {

bool same_multiset(std::vector<int> x, std::vector<int> y) {
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    return x == y;
}

// Precomputed S_k data for repeated mixed-moment evaluation.
struct MomentEvaluator {
    std::vector<Permutation> perms;
    std::vector<const rational*> wg;  // wg[s * k! + t] = Wg(tau_t o sigma_s^-1)

    MomentEvaluator(int k, const WgTable& table) : perms(all_permutations(k)) {
        const std::size_t nf = perms.size();
        wg.resize(nf * nf);
        for (std::size_t s = 0; s < nf; ++s) {
            const Permutation inv = perms[s].inverse();
            for (std::size_t t = 0; t < nf; ++t)
                wg[s * nf + t] = &table(perms[t].compose(inv));
        }
    }

    rational eval(const std::vector<int>& i, const std::vector<int>& j,
                  const std::vector<int>& ip, const std::vector<int>& jp) const {
        const int k = perms[0].k();
        rational sum = 0;
        const std::size_t nf = perms.size();
        for (std::size_t s = 0; s < nf; ++s) {
            const Permutation& sigma = perms[s];
            bool ok = true;
            for (int a = 0; a < k && ok; ++a)
                ok = i[static_cast<std::size_t>(a)] ==
                     ip[static_cast<std::size_t>(sigma(a))];
            if (!ok) continue;
            for (std::size_t t = 0; t < nf; ++t) {
                const Permutation& tau = perms[t];
                bool okt = true;
                for (int a = 0; a < k && okt; ++a)
                    okt = j[static_cast<std::size_t>(a)] ==
                          jp[static_cast<std::size_t>(tau(a))];
                if (okt) sum += *wg[s * nf + t];
            }
        }
        return sum;
    }
};

}  // namespace

rational mixed_moment(const std::vector<int>& i, const std::vector<int>& j,
                      const std::vector<int>& ip, const std::vector<int>& jp,
                      const WgTable& table) {
    const std::size_t k = i.size();
    if (j.size() != k || ip.size() != k || jp.size() != k)
        throw DimensionMismatch("mixed_moment: index tuples must share a length");
    if (k == 0) return 1;
    if (static_cast<int>(k) != table.k) throw Error("mixed_moment: table order mismatch");
    if (!same_multiset(i, ip) || !same_multiset(j, jp)) return 0;
    return MomentEvaluator(table.k, table).eval(i, j, ip, jp);
}

rational mixed_moment(const std::vector<int>& i, const std::vector<int>& j,
                      const std::vector<int>& ip, const std::vector<int>& jp, long long n) {
    if (i.empty()) return 1;
    return mixed_moment(i, j, ip, jp, wg_table(static_cast<int>(i.size()), n));
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
    RationalMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

rational rtrace(const RationalMatrix& a) {
    rational t = 0;
    for (std::size_t i = 0; i < a.dim(); ++i) t += a(i, i);
    return t;
}

rational rtrace_product(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("rtrace_product: size mismatch");
    rational t = 0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) t += a(i, j) * b(j, i);
    return t;
}

rational exact_two_trace(const RationalMatrix& a, const RationalMatrix& b,
                         const RationalMatrix& c, const RationalMatrix& d) {
    const std::size_t n = a.dim();
    if (b.dim() != n || c.dim() != n || d.dim() != n)
        throw DimensionMismatch("exact_two_trace: size mismatch");
    const rational ta = rtrace(a), tb = rtrace(b), tc = rtrace(c), td = rtrace(d);
    const rational tac = rtrace_product(a, c), tbd = rtrace_product(b, d);
    const rational nn = static_cast<long long>(n);
    const rational denom = nn * nn - 1;
    return (ta * tc * tb * td + tac * tbd) / denom -
           (ta * tc * tbd + tac * tb * td) / (nn * denom);
}

rational exact_two_trace_brute(const RationalMatrix& a, const RationalMatrix& b,
                               const RationalMatrix& c, const RationalMatrix& d) {
    const std::size_t n = a.dim();
    if (b.dim() != n || c.dim() != n || d.dim() != n)
        throw DimensionMismatch("exact_two_trace_brute: size mismatch");
    const WgTable table = wg_table(2, static_cast<long long>(n));
    const MomentEvaluator ev(2, table);
    rational sum = 0;
    // Tr(AVBV*) = sum A_{ij} v_{jk} B_{kl} conj(v_{il});
    // Tr(CVDV*) = sum C_{pq} v_{qr} D_{rt} conj(v_{pt})
    const int m = static_cast<int>(n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (a(i, j) == 0) continue;
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l) {
                    if (b(k, l) == 0) continue;
                    const rational w1 = a(i, j) * b(k, l);
                    for (int p = 0; p < m; ++p)
                        for (int q = 0; q < m; ++q) {
                            if (c(p, q) == 0) continue;
                            for (int r = 0; r < m; ++r)
                                for (int t = 0; t < m; ++t) {
                                    if (d(r, t) == 0) continue;
                                    const std::vector<int> ui{j, q}, uj{k, r};
                                    const std::vector<int> ci{i, p}, cj{l, t};
                                    if (!same_multiset(ui, ci) || !same_multiset(uj, cj))
                                        continue;
                                    sum += w1 * c(p, q) * d(r, t) * ev.eval(ui, uj, ci, cj);
                                }
                        }
                }
        }
    return sum;
}

rational exact_trace_moment(const std::vector<TraceFactor>& word,
                            const std::vector<rational>& s,
                            std::uint64_t max_assignments) {
    const std::size_t n = s.size();
    if (n == 0) throw ConfigError("exact_trace_moment: empty singular value list");

    int ku = 0, kc = 0;  // total u and conj(u) factor counts
    std::size_t free_count = 0;
    for (const TraceFactor& f : word) {
        if (f.power == 0) throw ConfigError("exact_trace_moment: zero power");
        const int m = std::abs(f.power);
        const bool u_side = (f.power > 0) != f.conjugated;
        (u_side ? ku : kc) += m;
        free_count += static_cast<std::size_t>(m) + (f.weight ? 1 : 0);
        if (f.weight && f.weight->dim() != n)
            throw DimensionMismatch("exact_trace_moment: weight size mismatch");
        if (f.power < 0)
            for (const rational& v : s)
                if (v == 0)
                    throw ConfigError("exact_trace_moment: negative power of singular T");
    }
    if (ku != kc) return 0;  // phase asymmetry: every Haar moment vanishes
    if (ku == 0) {
        rational prod = 1;  // no Haar factors at all cannot occur (powers nonzero)
        return prod;
    }
    if (ku > 6) throw ComplexityBudgetExceeded("exact_trace_moment: moment order above 6");

    double cost = 1.0;
    for (std::size_t f = 0; f < free_count; ++f) cost *= static_cast<double>(n);
    if (cost > static_cast<double>(max_assignments))
        throw ComplexityBudgetExceeded("exact_trace_moment: index sum too large");

    const WgTable table = wg_table(ku, static_cast<long long>(n));
    const MomentEvaluator ev(ku, table);

    std::vector<int> idx(free_count, 0);
    std::vector<int> ui, uj, ci, cj;
    rational total = 0;
    while (true) {
        rational coeff = 1;
        ui.clear();
        uj.clear();
        ci.clear();
        cj.clear();
        std::size_t base = 0;
        bool zero = false;
        for (const TraceFactor& f : word) {
            const int m = std::abs(f.power);
            const std::size_t mm = static_cast<std::size_t>(m);
            const int closing = f.weight ? idx[base + mm] : idx[base];
            if (f.weight) {
                const rational& w =
                    (*f.weight)(static_cast<std::size_t>(closing),
                                static_cast<std::size_t>(idx[base]));
                if (w == 0) {
                    zero = true;
                    break;
                }
                coeff *= w;
            }
            auto path = [&](std::size_t t) {
                return t == mm ? closing : idx[base + t];
            };
            std::vector<int>&ri = f.conjugated ? ci : ui, &rj = f.conjugated ? cj : uj;
            std::vector<int>&qi = f.conjugated ? ui : ci, &qj = f.conjugated ? uj : cj;
            if (f.power > 0) {
                // prod_t u_{i_t, i_{t+1}} s_{i_{t+1}}
                for (std::size_t t = 0; t < mm; ++t) {
                    ri.push_back(path(t));
                    rj.push_back(path(t + 1));
                    coeff *= s[static_cast<std::size_t>(path(t + 1))];
                }
            } else {
                // prod_t s_{i_t}^{-1} conj(u)_{i_{t+1}, i_t}
                for (std::size_t t = 0; t < mm; ++t) {
                    qi.push_back(path(t + 1));
                    qj.push_back(path(t));
                    coeff /= s[static_cast<std::size_t>(path(t))];
                }
            }
            base += mm + (f.weight ? 1 : 0);
        }
        if (!zero && same_multiset(ui, ci) && same_multiset(uj, cj))
            total += coeff * ev.eval(ui, uj, ci, cj);

        std::size_t d = 0;
        while (d < free_count && ++idx[d] == static_cast<int>(n)) idx[d++] = 0;
        if (d == free_count) break;
    }
    return total;
}

}  // namespace ringlab
