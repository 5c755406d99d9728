#pragma once

#include <vector>

#include "formal_series.hpp"

namespace stokes_unfold {

enum class StokesDirection { Zero, Pi };

// entries of the formal transformation H(x) truncated at order N in x
struct FormalH {
    AsymptoticSeries phi, psi;

    // coefficient of x^k in entry (i, j), zero-based
    Complex coefficient(int i, int j, int k) const {
        if (i == j) return k == 0 ? 1.0 : 0.0;
        if (i > j) return 0.0;
        if (i == 0 && j == 1) {  // x^2 phi(x)
            int m = k - 2;
            return (m >= 0 && m <= phi.order()) ? phi.coefficients[m] : Complex(0.0);
        }
        if (i == 0 && j == 2) {  // x^4 psi(x) / 2
            int m = k - 4;
            return (m >= 0 && m <= psi.order()) ? 0.5 * psi.coefficients[m] : Complex(0.0);
        }
        return k == 2 ? -0.5 : 0.0;  // (2,3) = -x^2/2
    }

    // truncated H at a point
    Matrix3 evaluate(Complex x) const {
        Matrix3 h = Matrix3::identity();
        h(0, 1) = x * x * phi.partial_sum(x, phi.order() + 1);
        h(0, 2) = 0.5 * x * x * x * x * psi.partial_sum(x, psi.order() + 1);
        h(1, 2) = -0.5 * x * x;
        return h;
    }
};

struct FormalData {
    Matrix3 Lambda;
    Matrix3 Q;
    FormalH H_hat;
};

inline FormalData formal_data(Complex nu, int N = default_series_length) {
    return {Matrix3::diagonal(0.0, nu - 2.0, nu - 4.0), Matrix3::diagonal(1.0, 2.0, 0.0),
            {build_series(nu, SeriesKind::Phi, N), build_series(nu, SeriesKind::Psi, N)}};
}

inline Matrix3 formal_monodromy(Complex nu) {
    return exp_diagonal(Matrix3::diagonal(0.0, nu - 2.0, nu - 4.0), 2.0 * pi * I_unit);
}

inline bool is_nonpositive_integer(Complex nu, double tol = 1e-12) {
    return nu.imag() == 0.0 && near_nonpositive_integer(nu, tol);
}

inline std::vector<double> singular_directions(Complex nu) {
    if (is_nonpositive_integer(nu)) return {};
    return {0.0, pi};
}

inline Matrix3 stokes_matrix(Complex nu, StokesDirection d) {
    Matrix3 s = Matrix3::identity();
    Complex rg = reciprocal_gamma(nu);
    if (d == StokesDirection::Zero) s(0, 2) = -pi * I_unit * rg;
    else s(0, 1) = -2.0 * pi * I_unit * exp_i_pi(-nu) * rg;
    return s;
}

inline Matrix3 monodromy_origin(Complex nu) {
    return stokes_matrix(nu, StokesDirection::Pi) * stokes_matrix(nu, StokesDirection::Zero) *
           formal_monodromy(nu);
}

}  // namespace stokes_unfold
