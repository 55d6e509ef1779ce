#include "ringlab/model.hpp"

#include <algorithm>
#include <cmath>

namespace ringlab {

SingularProfile SingularProfile::identity() { return SingularProfile{}; }

SingularProfile SingularProfile::uniform(double lo, double hi) {
    SingularProfile p;
    p.kind = Kind::UniformInterval;
    p.lo = lo;
    p.hi = hi;
    p.validate();
    return p;
}

SingularProfile SingularProfile::discrete(std::vector<std::pair<double, double>> atoms) {
    SingularProfile p;
    p.kind = Kind::Atoms;
    p.atoms = std::move(atoms);
    std::sort(p.atoms.begin(), p.atoms.end());
    p.validate();
    return p;
}

void SingularProfile::validate() const {
    switch (kind) {
        case Kind::Identity:
            return;
        case Kind::UniformInterval:
            if (!(lo >= 0.0 && lo < hi))
                throw ConfigError("uniform profile requires 0 <= lo < hi");
            return;
        case Kind::Atoms: {
            if (atoms.empty()) throw ConfigError("atom profile requires at least one atom");
            double total = 0.0;
            for (const auto& [s, w] : atoms) {
                if (s < 0.0) throw ConfigError("atom values must be >= 0");
                if (w <= 0.0) throw ConfigError("atom weights must be positive");
                total += w;
            }
            if (std::abs(total - 1.0) > 1e-12)
                throw ConfigError("atom weights must sum to 1");
            return;
        }
    }
}

bool SingularProfile::supports_negative_powers() const {
    switch (kind) {
        case Kind::Identity: return true;
        case Kind::UniformInterval: return lo > 0.0;
        case Kind::Atoms:
            return std::all_of(atoms.begin(), atoms.end(),
                               [](const auto& a) { return a.first > 0.0; });
    }
    return false;
}

double SingularProfile::quantile(double p) const {
    switch (kind) {
        case Kind::Identity:
            return 1.0;
        case Kind::UniformInterval:
            return lo + (hi - lo) * p;
        case Kind::Atoms: {
            double cum = 0.0;
            for (const auto& [s, w] : atoms) {
                cum += w;
                if (p <= cum) return s;
            }
            return atoms.back().first;
        }
    }
    return 1.0;
}

std::pair<double, double> annulus_radii(const SingularProfile& profile) {
    profile.validate();
    double second_moment = 0.0;      // int x^2 dTheta
    double inv_second_moment = 0.0;  // int x^-2 dTheta (inf when touching 0)
    bool touches_zero = !profile.supports_negative_powers();
    switch (profile.kind) {
        case SingularProfile::Kind::Identity:
            second_moment = 1.0;
            inv_second_moment = 1.0;
            break;
        case SingularProfile::Kind::UniformInterval: {
            const double len = profile.hi - profile.lo;
            second_moment =
                (profile.hi * profile.hi * profile.hi - profile.lo * profile.lo * profile.lo) /
                (3.0 * len);
            if (!touches_zero)
                inv_second_moment = (1.0 / profile.lo - 1.0 / profile.hi) / len;
            break;
        }
        case SingularProfile::Kind::Atoms:
            for (const auto& [s, w] : profile.atoms) {
                second_moment += w * s * s;
                if (!touches_zero) inv_second_moment += w / (s * s);
            }
            break;
    }
    const double b = std::sqrt(second_moment);
    const double a = touches_zero ? 0.0 : 1.0 / std::sqrt(inv_second_moment);
    return {a, b};
}

std::vector<double> realize_singular_values(const SingularProfile& profile, std::size_t n) {
    profile.validate();
    if (n < 1) throw ConfigError("dimension must be >= 1");
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i)
        s[i] = profile.quantile((static_cast<double>(i) + 0.5) / static_cast<double>(n));
    return s;
}

ComplexMatrix realize_T(const SingularProfile& profile, std::size_t n) {
    return ComplexMatrix::diagonal(realize_singular_values(profile, n));
}

SingleRingModel SingleRingModel::make(SingularProfile profile, Composition composition) {
    SingleRingModel m;
    m.profile = std::move(profile);
    m.composition = composition;
    const auto [a, b] = annulus_radii(m.profile);
    m.inner_radius = a;
    m.outer_radius = b;
    return m;
}

ComplexMatrix sample_A(const SingleRingModel& model, std::size_t n, SeededStream& stream) {
    const std::vector<double> s = realize_singular_values(model.profile, n);
    ComplexMatrix ut = haar_unitary(n, stream);
    ut.scale_cols(s);  // U * diag(s)
    if (model.composition == Composition::UT) return ut;
    const ComplexMatrix v = haar_unitary(n, stream);
    return matmul(ut, v);
}

}  // namespace ringlab
