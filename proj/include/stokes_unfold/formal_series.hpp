#pragma once

#include <cmath>
#include <vector>

#include "complex_core.hpp"

namespace stokes_unfold {

// Psi: 1 + nu x + nu(nu+1) x^2 + ...   Phi: same with alternating signs
enum class SeriesKind { Psi, Phi };

inline const char* to_string(SeriesKind k) { return k == SeriesKind::Psi ? "psi" : "phi"; }

struct AsymptoticSeries {
    Complex nu;
    SeriesKind kind;
    std::vector<Complex> coefficients;

    int order() const { return static_cast<int>(coefficients.size()) - 1; }

    Complex partial_sum(Complex x, int terms) const {
        Complex s = 0.0, p = 1.0;
        for (int n = 0; n < terms && n < static_cast<int>(coefficients.size()); ++n) {
            s += coefficients[n] * p;
            p *= x;
        }
        return s;
    }
};

inline constexpr int default_series_length = 60;

inline AsymptoticSeries build_series(Complex nu, SeriesKind kind, int N = default_series_length) {
    if (N < 0) throw Error(ErrorKind::Domain, "build_series: N < 0");
    AsymptoticSeries s{nu, kind, {}};
    s.coefficients.resize(N + 1);
    s.coefficients[0] = 1.0;
    double sign = kind == SeriesKind::Psi ? 1.0 : -1.0;
    for (int n = 0; n < N; ++n) s.coefficients[n + 1] = sign * (nu + double(n)) * s.coefficients[n];
    return s;
}

// A = 1 for |nu| <= 1, else |nu| + 1; C = 1
inline double gevrey_constant(Complex nu) { return std::abs(nu) <= 1.0 ? 1.0 : std::abs(nu) + 1.0; }

inline bool gevrey_bound_check(const AsymptoticSeries& s) {
    double A = gevrey_constant(s.nu);
    double bound = 1.0;  // A^n n!
    for (int n = 0; n <= s.order(); ++n) {
        if (n > 0) bound *= A * n;
        if (std::abs(s.coefficients[n]) > bound * (1.0 + 1e-14)) return false;
    }
    return true;
}

// coefficients of x^2 u' + (nu x -+ 1) u +- 1 for u the truncated series, degrees 0..N+1
inline std::vector<Complex> ode_residual_coefficients(const AsymptoticSeries& s) {
    const auto& c = s.coefficients;
    int N = s.order();
    double sgn = s.kind == SeriesKind::Psi ? -1.0 : 1.0;  // the "-+ 1" factor
    std::vector<Complex> r(N + 2, 0.0);
    for (int n = 0; n <= N; ++n) {
        r[n] += sgn * c[n];
        r[n + 1] += (s.nu + double(n)) * c[n];  // same rounding as the recursion
    }
    r[0] -= sgn;  // rhs: +1 for Psi, -1 for Phi
    return r;
}

// (1 - zeta)^{-nu} for Psi, (1 + zeta)^{-nu} for Phi, principal branch
inline Complex borel_transform_value(Complex nu, SeriesKind kind, Complex zeta) {
    Complex base = kind == SeriesKind::Psi ? 1.0 - zeta : 1.0 + zeta;
    if (std::abs(base.imag()) < 1e-12 && base.real() < 1e-12)
        throw Error(ErrorKind::BranchCut, "borel_transform_value: on the branch cut");
    return std::exp(-nu * std::log(base));
}

}  // namespace stokes_unfold
