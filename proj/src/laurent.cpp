#include "ringlab/laurent.hpp"

#include <cmath>

#include "ringlab/kernels.hpp"

namespace ringlab {

cd LaurentPoly::coeff(int n) const {
    const auto it = coeffs_.find(n);
    return it == coeffs_.end() ? cd(0.0) : it->second;
}

void LaurentPoly::set(int n, cd value) {
    if (value == cd(0.0))
        coeffs_.erase(n);
    else
        coeffs_[n] = value;
}

int LaurentPoly::max_positive_degree() const {
    int d = 0;
    for (const auto& [n, c] : coeffs_)
        if (n > d) d = n;
    return d;
}

int LaurentPoly::max_negative_degree() const {
    int d = 0;
    for (const auto& [n, c] : coeffs_)
        if (-n > d) d = -n;
    return d;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& other) {
    for (const auto& [n, c] : other.coeffs_) set(n, coeff(n) + c);
    return *this;
}

LaurentPoly& LaurentPoly::operator*=(cd s) {
    if (s == cd(0.0)) {
        coeffs_.clear();
        return *this;
    }
    for (auto& [n, c] : coeffs_) c *= s;
    return *this;
}

LaurentPoly LaurentPoly::monomial(int n, cd a) {
    LaurentPoly p;
    p.set(n, a);
    return p;
}

LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
LaurentPoly operator*(cd s, LaurentPoly a) { return a *= s; }

LaurentPoly phi_basis(int n, int sign, double a, double b) {
    if (n < 1) throw Error("phi_basis: n must be >= 1");
    if (b <= 0.0) throw Error("phi_basis: b must be positive");
    if (sign != 1 && sign != -1) throw Error("phi_basis: sign must be +1 or -1");
    LaurentPoly p;
    p.set(n, std::pow(b, -n));
    if (a > 0.0) p.set(-n, static_cast<double>(sign) * std::pow(a, n));
    return p;
}

std::pair<cd, cd> white_noise_coeffs(cd a_n, cd a_neg_n, int n, double a, double b) {
    const double bn = std::pow(b, n);
    const double an = std::pow(a, -n);
    return {0.5 * (bn * a_n + an * a_neg_n), 0.5 * (bn * a_n - an * a_neg_n)};
}

std::pair<cd, cd> laurent_coeffs_from_white_noise(cd c_plus, cd c_minus, int n, double a,
                                                  double b) {
    const double bn = std::pow(b, -n);
    const double an = std::pow(a, n);
    return {bn * (c_plus + c_minus), an * (c_plus - c_minus)};
}

Observable Observable::linear_statistic(LaurentPoly f) {
    Observable o;
    o.f = std::move(f);
    return o;
}

Observable Observable::scaled_dyad(LaurentPoly f, std::vector<cd> left,
                                   std::vector<cd> right) {
    Observable o;
    o.f = std::move(f);
    o.weight = Weight::ScaledDyad;
    o.dyad_left = std::move(left);
    o.dyad_right = std::move(right);
    return o;
}

Observable Observable::custom_weight(LaurentPoly f, ComplexMatrix m) {
    Observable o;
    o.f = std::move(f);
    o.weight = Weight::Custom;
    o.custom = std::move(m);
    return o;
}

std::optional<int> Observable::single_power() const {
    std::optional<int> power;
    for (const auto& [n, c] : f.coefficients()) {
        if (n == 0 || c == cd(0.0)) continue;
        if (power) return std::nullopt;
        power = n;
    }
    return power;
}

StatisticEvaluator::StatisticEvaluator(ComplexMatrix a) : a_(std::move(a)) {
    if (!a_.square()) throw DimensionMismatch("StatisticEvaluator: matrix must be square");
}

const LUFactors& StatisticEvaluator::lu() {
    if (!lu_) lu_ = lu_factor(a_);
    return *lu_;
}

const ComplexMatrix& StatisticEvaluator::matrix_power(int n) {
    if (n == 0) throw Error("matrix_power: n must be nonzero");
    const auto it = powers_.find(n);
    if (it != powers_.end()) return it->second;
    ComplexMatrix result;
    if (n == 1) {
        result = a_;
    } else if (n == -1) {
        result = lu_invert(lu());
    } else {
        const int step = n > 0 ? 1 : -1;
        result = matmul(matrix_power(n - step), matrix_power(step));
    }
    return powers_.emplace(n, std::move(result)).first->second;
}

cd StatisticEvaluator::trace_power(int n) {
    if (n == 0) throw Error("trace_power: n must be nonzero");
    const auto it = trace_cache_.find(n);
    if (it != trace_cache_.end()) return it->second;
    cd t;
    if (n == 1) {
        t = trace(a_);
    } else if (n == -1) {
        t = trace(matrix_power(-1));
    } else {
        const int step = n > 0 ? 1 : -1;
        t = trace_of_product(matrix_power(n - step), matrix_power(step));
    }
    trace_cache_[n] = t;
    return t;
}

cd StatisticEvaluator::eval(const Observable& obs) {
    const std::size_t n = a_.rows();
    cd result = 0.0;

    switch (obs.weight) {
        case Observable::Weight::Identity: {
            for (const auto& [k, c] : obs.f.coefficients()) {
                if (k == 0) continue;
                result += c * trace_power(k);
            }
            return result;
        }
        case Observable::Weight::ScaledDyad: {
            if (obs.dyad_left.size() != n || obs.dyad_right.size() != n)
                throw DimensionMismatch("dyad vector size mismatch");
            const double scale = std::sqrt(static_cast<double>(n));
            // ladders A^k right for k > 0 and k < 0
            std::vector<cd> pos = obs.dyad_right, neg = obs.dyad_right;
            int pos_k = 0, neg_k = 0;
            const int np = obs.f.max_positive_degree();
            const int nm = obs.f.max_negative_degree();
            auto matvec = [&](const std::vector<cd>& v) {
                std::vector<cd> out(n);
                for (std::size_t i = 0; i < n; ++i)
                    out[i] = kernels::cdotu(n, a_.row(i), v.data());
                return out;
            };
            for (int k = 1; k <= std::max(np, nm); ++k) {
                if (k <= np) {
                    pos = matvec(pos);
                    pos_k = k;
                    const cd c = obs.f.coeff(k);
                    if (c != cd(0.0))
                        result += c * scale * kernels::cdotc(n, obs.dyad_left.data(), pos.data());
                }
                if (k <= nm) {
                    neg = lu_solve(lu(), neg);
                    neg_k = k;
                    const cd c = obs.f.coeff(-k);
                    if (c != cd(0.0))
                        result += c * scale * kernels::cdotc(n, obs.dyad_left.data(), neg.data());
                }
            }
            (void)pos_k;
            (void)neg_k;
            return result;
        }
        case Observable::Weight::Custom: {
            if (!obs.custom.square() || obs.custom.rows() != n)
                throw DimensionMismatch("custom weight size mismatch");
            for (const auto& [k, c] : obs.f.coefficients()) {
                if (k == 0 || c == cd(0.0)) continue;
                result += c * trace_of_product(matrix_power(k), obs.custom);
            }
            return result;
        }
    }
    return result;
}

cd eval_statistic(const Observable& obs, const ComplexMatrix& a) {
    StatisticEvaluator ev(a);
    return ev.eval(obs);
}

namespace {

void check_off_ring(cd z, const SingleRingModel& model) {
    const double delta = 0.1 * (model.outer_radius - model.inner_radius);
    const double m = std::abs(z);
    if (m >= model.inner_radius - delta && m <= model.outer_radius + delta)
        throw RingProximity("point too close to the limiting annulus");
}

}  // namespace

cd resolvent_trace(const ComplexMatrix& a, cd z, const SingleRingModel& model) {
    check_off_ring(z, model);
    const std::size_t n = a.rows();
    ComplexMatrix zma = cd(-1.0) * a;
    for (std::size_t i = 0; i < n; ++i) zma(i, i) += z;
    return trace(lu_invert(lu_factor(zma)));
}

double logdet_statistic(const ComplexMatrix& a, cd z, const SingleRingModel& model) {
    check_off_ring(z, model);
    const std::size_t n = a.rows();
    ComplexMatrix zma = cd(-1.0) * a;
    for (std::size_t i = 0; i < n; ++i) zma(i, i) += z;
    const LUFactors f = lu_factor(zma);
    double logdet = 0.0;
    for (std::size_t i = 0; i < n; ++i) logdet += std::log(std::abs(f.lu(i, i)));

    double centering;
    if (std::abs(z) < model.inner_radius) {
        centering = 0.0;  // Tr log T
        for (double s : realize_singular_values(model.profile, n)) centering += std::log(s);
    } else {
        centering = static_cast<double>(n) * std::log(std::abs(z));
    }
    return logdet - centering;
}

}  // namespace ringlab
