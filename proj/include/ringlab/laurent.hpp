#pragma once

#include <map>
#include <optional>
#include <vector>

#include "ringlab/linalg.hpp"
#include "ringlab/model.hpp"

namespace ringlab {

// Finite Laurent polynomial f(z) = sum a_n z^n. The n = 0 coefficient is
// stored but never contributes to statistics: centering by omission.
class LaurentPoly {
public:
    LaurentPoly() = default;

    cd coeff(int n) const;
    void set(int n, cd value);
    int max_positive_degree() const;  // n_plus
    int max_negative_degree() const;  // n_minus (as a positive number)
    bool has_negative_powers() const { return max_negative_degree() > 0; }

    const std::map<int, cd>& coefficients() const { return coeffs_; }

    LaurentPoly& operator+=(const LaurentPoly& other);
    LaurentPoly& operator*=(cd s);

    static LaurentPoly monomial(int n, cd a = 1.0);

private:
    std::map<int, cd> coeffs_;
};

LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b);
LaurentPoly operator*(cd s, LaurentPoly a);

// phi_n^{+-}(z) = (z/b)^n +- (a/z)^n; a = 0 keeps only the (z/b)^n part.
LaurentPoly phi_basis(int n, int sign, double a, double b);

// Change of basis (a_n, a_{-n}) <-> (c_n^+, c_n^-).
std::pair<cd, cd> white_noise_coeffs(cd a_n, cd a_neg_n, int n, double a, double b);
std::pair<cd, cd> laurent_coeffs_from_white_noise(cd c_plus, cd c_minus, int n, double a,
                                                  double b);

struct Observable {
    enum class Weight { Identity, ScaledDyad, Custom };

    LaurentPoly f;
    Weight weight = Weight::Identity;
    // ScaledDyad: M = sqrt(N) * right * left^dagger, so Tr(A^n M) = sqrt(N) left^* A^n right
    std::vector<cd> dyad_left;   // b
    std::vector<cd> dyad_right;  // a
    ComplexMatrix custom;        // Custom weight matrix

    static Observable linear_statistic(LaurentPoly f);
    static Observable scaled_dyad(LaurentPoly f, std::vector<cd> left, std::vector<cd> right);
    static Observable custom_weight(LaurentPoly f, ComplexMatrix m);

    // true iff the Laurent support is the single power n (phase test applies)
    std::optional<int> single_power() const;
};

// Caches LU/inverse/power ladders of one sample so several observables can
// be evaluated against the same matrix cheaply.
class StatisticEvaluator {
public:
    explicit StatisticEvaluator(ComplexMatrix a);

    const ComplexMatrix& matrix() const { return a_; }
    cd trace_power(int n);                // Tr A^n, n != 0
    const ComplexMatrix& matrix_power(int n);  // A^n, n != 0
    const LUFactors& lu();

    cd eval(const Observable& obs);

private:
    ComplexMatrix a_;
    std::optional<LUFactors> lu_;
    std::map<int, ComplexMatrix> powers_;
    std::map<int, cd> trace_cache_;
};

// Centered statistic Tr f(A) M - a_0(f) Tr M (the n = 0 term is dropped).
cd eval_statistic(const Observable& obs, const ComplexMatrix& a);

// Tr (z - A)^{-1}; z must stay away from the annulus of the model.
cd resolvent_trace(const ComplexMatrix& a, cd z, const SingleRingModel& model);

// log|det(z - A)| minus the centering Tr log T (|z| < a) or N log|z| (|z| > b).
double logdet_statistic(const ComplexMatrix& a, cd z, const SingleRingModel& model);

}  // namespace ringlab
