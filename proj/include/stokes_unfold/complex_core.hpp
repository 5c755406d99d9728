#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace stokes_unfold {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr Complex I_unit{0.0, 1.0};

// sin(pi x), cos(pi x) with exact zeros at integers / half-integers
inline double sinpi(double x) {
    double r = std::remainder(x, 2.0);  // [-1, 1]
    if (r > 0.5) r = 1.0 - r;
    else if (r < -0.5) r = -1.0 - r;
    if (r == 0.0) return 0.0;
    return std::sin(pi * r);
}

inline double cospi(double x) { return sinpi(x + 0.5); }

inline Complex sinpi(Complex z) {
    double a = z.real(), b = z.imag();
    return {sinpi(a) * std::cosh(pi * b), cospi(a) * std::sinh(pi * b)};
}

// exp(i pi a)
inline Complex exp_i_pi(Complex a) {
    double damp = std::exp(-pi * a.imag());
    return {damp * cospi(a.real()), damp * sinpi(a.real())};
}

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// integer k <= 0 with |z - k| < tol, or false
inline bool near_nonpositive_integer(Complex z, double tol, long* k_out = nullptr) {
    double k = std::round(z.real());
    if (k > 0.0) return false;
    if (std::abs(z - Complex(k, 0.0)) >= tol) return false;
    if (k_out) *k_out = static_cast<long>(k);
    return true;
}

inline bool near_integer(double x, double tol = 1e-9) { return std::abs(x - std::round(x)) < tol; }

namespace detail {

inline constexpr double lanczos_g = 7.0;
inline constexpr std::array<double, 9> lanczos_p = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Lanczos sum and t = z + g - 1/2 for Re z >= 1/2
inline void lanczos_parts(Complex z, Complex& series, Complex& t) {
    z -= 1.0;
    series = lanczos_p[0];
    for (int i = 1; i < 9; ++i) series += lanczos_p[i] / (z + double(i));
    t = z + lanczos_g + 0.5;
}

inline Complex log_gamma_right(Complex z) {
    Complex series, t;
    lanczos_parts(z, series, t);
    return 0.5 * std::log(2.0 * pi) + (z - 0.5) * std::log(t) - t + std::log(series);
}

inline Complex gamma_right(Complex z) {
    if (std::abs(z) < 20.0) {
        Complex series, t;
        lanczos_parts(z, series, t);
        return std::sqrt(2.0 * pi) * std::pow(t, z - 0.5) * std::exp(-t) * series;
    }
    return std::exp(log_gamma_right(z));
}

}  // namespace detail

inline constexpr double pole_threshold = 1e-9;

inline Complex gamma(Complex z) {
    long k = 0;
    if (near_nonpositive_integer(z, pole_threshold, &k))
        throw Error(ErrorKind::Pole, "gamma: pole at " + std::to_string(k));
    Complex r;
    if (z.real() < 0.5) r = pi / (sinpi(z) * detail::gamma_right(1.0 - z));
    else r = detail::gamma_right(z);
    if (!is_finite(r)) throw Error(ErrorKind::Domain, "gamma: overflow, use log_gamma");
    return r;
}

// entire; exact zeros at 0, -1, -2, ...
inline Complex reciprocal_gamma(Complex z) {
    Complex r;
    if (z.real() < 0.5) {
        Complex s = sinpi(z);
        if (s == 0.0) return 0.0;
        r = s * detail::gamma_right(1.0 - z) / pi;
    } else {
        r = 1.0 / detail::gamma_right(z);
    }
    if (!is_finite(r)) throw Error(ErrorKind::Domain, "reciprocal_gamma: overflow");
    return r;
}

// some branch of log Gamma(z); differences are what callers use
inline Complex log_gamma(Complex z) {
    long k = 0;
    if (near_nonpositive_integer(z, pole_threshold, &k))
        throw Error(ErrorKind::Pole, "log_gamma: pole at " + std::to_string(k));
    if (z.real() < 0.5) return std::log(pi) - std::log(sinpi(z)) - detail::log_gamma_right(1.0 - z);
    return detail::log_gamma_right(z);
}

inline Complex rising_factorial(Complex nu, int n) {
    if (n < 0) throw Error(ErrorKind::Domain, "rising_factorial: n < 0");
    Complex p = 1.0;
    for (int k = 0; k < n; ++k) p *= nu + double(k);
    return p;
}

// Gamma(nu + n)/Gamma(nu); only valid away from poles of both
inline Complex rising_factorial_gamma_ratio(Complex nu, int n) {
    return std::exp(log_gamma(nu + double(n)) - log_gamma(nu));
}

class Matrix3 {
public:
    Matrix3() : e_{} {}

    static Matrix3 identity() { return diagonal(1.0, 1.0, 1.0); }
    static Matrix3 diagonal(Complex a, Complex b, Complex c) {
        Matrix3 m;
        m(0, 0) = a;
        m(1, 1) = b;
        m(2, 2) = c;
        return m;
    }
    // E_{ij}, zero-based
    static Matrix3 unit(int i, int j) {
        Matrix3 m;
        m(i, j) = 1.0;
        return m;
    }

    Complex& operator()(int r, int c) { return e_[3 * r + c]; }
    const Complex& operator()(int r, int c) const { return e_[3 * r + c]; }

    Matrix3& operator+=(const Matrix3& o) {
        for (int i = 0; i < 9; ++i) e_[i] += o.e_[i];
        return *this;
    }
    Matrix3& operator-=(const Matrix3& o) {
        for (int i = 0; i < 9; ++i) e_[i] -= o.e_[i];
        return *this;
    }
    Matrix3& operator*=(Complex s) {
        for (auto& v : e_) v *= s;
        return *this;
    }

    friend Matrix3 operator+(Matrix3 a, const Matrix3& b) { return a += b; }
    friend Matrix3 operator-(Matrix3 a, const Matrix3& b) { return a -= b; }
    friend Matrix3 operator*(Matrix3 a, Complex s) { return a *= s; }
    friend Matrix3 operator*(Complex s, Matrix3 a) { return a *= s; }
    friend Matrix3 operator*(const Matrix3& a, const Matrix3& b) {
        Matrix3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                Complex s = 0.0;
                for (int k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
                r(i, j) = s;
            }
        return r;
    }

    Complex trace() const { return e_[0] + e_[4] + e_[8]; }

    Complex determinant() const {
        const Matrix3& m = *this;
        return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
               m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
               m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    }

    double max_row_norm() const {
        double best = 0.0;
        for (int i = 0; i < 3; ++i) {
            double s = 0.0;
            for (int j = 0; j < 3; ++j) s += std::norm((*this)(i, j));
            best = std::max(best, std::sqrt(s));
        }
        return best;
    }

    // adjugate / determinant
    Matrix3 inverse() const {
        const Matrix3& m = *this;
        Complex det = determinant();
        double scale = max_row_norm();
        if (!(std::abs(det) > 1e-13 * scale * scale * scale))
            throw Error(ErrorKind::Singular, "Matrix3::inverse: determinant below threshold");
        Matrix3 r;
        r(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
        r(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
        r(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
        r(1, 0) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
        r(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
        r(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
        r(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
        r(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
        r(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        return r * (1.0 / det);
    }

    bool is_diagonal() const {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (i != j && (*this)(i, j) != 0.0) return false;
        return true;
    }

    // max |entry|
    double max_abs() const {
        double m = 0.0;
        for (auto& v : e_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    std::array<Complex, 9> e_;
};

inline double max_abs_diff(const Matrix3& a, const Matrix3& b) { return (a - b).max_abs(); }

// exp(scale T) for T supported on (1,2),(1,3): T^2 = 0
inline Matrix3 exp_first_row_nilpotent(const Matrix3& T, Complex scale) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            bool allowed = (i == 0 && (j == 1 || j == 2));
            if (!allowed && T(i, j) != 0.0)
                throw Error(ErrorKind::Shape, "exp_first_row_nilpotent: entry outside (1,2),(1,3)");
        }
    return Matrix3::identity() + scale * T;
}

inline Matrix3 exp_diagonal(const Matrix3& D, Complex scale) {
    if (!D.is_diagonal()) throw Error(ErrorKind::Shape, "exp_diagonal: non-diagonal input");
    auto ex = [&](Complex d) {
        Complex w = scale * d;
        // pure imaginary multiples of pi go through exp_i_pi so e^{pi i k} is exact
        if (scale.real() == 0.0 && d.imag() == 0.0 && scale.imag() != 0.0)
            return exp_i_pi(Complex(scale.imag() / pi * d.real(), 0.0));
        return std::exp(w);
    };
    return Matrix3::diagonal(ex(D(0, 0)), ex(D(1, 1)), ex(D(2, 2)));
}

// exp(i pi D) for diagonal D with reduced arguments
inline Matrix3 exp_i_pi_diagonal(Complex a, Complex b, Complex c) {
    return Matrix3::diagonal(exp_i_pi(a), exp_i_pi(b), exp_i_pi(c));
}

}  // namespace stokes_unfold
