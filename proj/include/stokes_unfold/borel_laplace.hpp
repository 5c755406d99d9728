#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "formal_series.hpp"
#include "quadrature.hpp"

namespace stokes_unfold {

inline constexpr double default_laplace_tol = 1e-10;
inline constexpr double default_laplace_tol_abs = 1e-12;
inline constexpr double two_sided_delta = pi / 12.0;

// a point on the universal cover of C*, needed wherever x^nu appears
struct CoverPoint {
    double modulus;
    double arg;

    Complex value() const { return std::polar(modulus, arg); }
    Complex pow(Complex a) const { return std::exp(a * Complex(std::log(modulus), arg)); }
};

struct LaplaceQuery {
    Complex nu;
    SeriesKind kind;
    Complex x;
    double theta;
    double tol = default_laplace_tol;
};

inline double singular_direction(SeriesKind kind) { return kind == SeriesKind::Psi ? 0.0 : pi; }

namespace detail {

// truncation length of the ray: tail of |(1-+zeta)^{-nu}| e^{-kappa s} below tol/10
inline double laplace_truncation(Complex nu, double kappa, double abs_x, double ray_gap, double tol) {
    double growth = std::max(0.0, -nu.real());
    // |(1-+zeta)^{-nu}| <= e^{pi|Im nu|} gap^{-max(0,Re nu)} (1+s)^{growth}
    double K = std::exp(pi * std::abs(nu.imag())) * std::pow(ray_gap, -std::max(0.0, nu.real()));
    double c = std::log(std::max(10.0 * K / (tol * kappa * abs_x), 2.0));
    double T = c / kappa;
    for (int it = 0; it < 2; ++it) T = (c + growth * std::log1p(T)) / kappa;
    return 2.0 * T;
}

}  // namespace detail

// x^{-1} int_0^{infinity e^{i theta}} (1 -+ zeta)^{-nu} e^{-zeta/x} d zeta
inline Complex laplace_sum(const LaplaceQuery& q) {
    if (!(std::abs(q.x) > 0.0)) throw Error(ErrorKind::Domain, "laplace_sum: x = 0");
    if (!(q.tol > 0.0)) throw Error(ErrorKind::Domain, "laplace_sum: tol must be positive");
    Complex dir = std::polar(1.0, q.theta);
    double kappa = std::real(dir / q.x);
    // rounding leaves kappa ~ 1e-16 / |x| on the boundary ray
    if (!(kappa > 1e-12 / std::abs(q.x))) throw Error(ErrorKind::Decay, "laplace_sum: Re(e^{i theta}/x) <= 0");
    double angle_gap = std::abs(std::remainder(q.theta - singular_direction(q.kind), 2.0 * pi));
    if (angle_gap < 10.0 * std::sqrt(q.tol))
        throw Error(ErrorKind::RayTooClose, "laplace_sum: ray too close to the singular direction");
    // distance from the ray to the Borel singularity
    double ray_gap = angle_gap >= pi / 2 ? 1.0 : std::sin(angle_gap);
    double T = detail::laplace_truncation(q.nu, kappa, std::abs(q.x), ray_gap, q.tol);
    double sign = q.kind == SeriesKind::Psi ? -1.0 : 1.0;
    Complex inv_x = 1.0 / q.x;
    auto f = [&](double s) {
        Complex zeta = s * dir;
        return std::exp(-q.nu * std::log(1.0 + sign * zeta) - zeta * inv_x) * dir;
    };
    // absolute tolerance on the value, which is the integral times 1/x
    auto r = integrate_adaptive(f, 0.0, T, 0.5 * q.tol * std::abs(q.x), 0.0, 20000, 16);
    return r.value * inv_x;
}

struct TwoSided {
    Complex plus, minus;
};

// values on the rays theta_sing +- delta
inline TwoSided two_sided_values(Complex nu, SeriesKind kind, Complex x, double tol = default_laplace_tol) {
    double ts = singular_direction(kind);
    TwoSided r;
    r.plus = laplace_sum({nu, kind, x, ts + two_sided_delta, tol});
    r.minus = laplace_sum({nu, kind, x, ts - two_sided_delta, tol});
    return r;
}

// closed-form jump coefficients; the Phi one assumes arg x = -pi
inline Complex stokes_jump_closed(Complex nu, SeriesKind kind) {
    Complex c = -2.0 * pi * I_unit * reciprocal_gamma(nu);
    if (kind == SeriesKind::Phi) c *= exp_i_pi(-nu);
    return c;
}

// c with (minus - plus) = c x^{-nu} e^{-+1/x}, x^{-nu} taken on the cover
inline Complex stokes_jump_quadrature(Complex nu, SeriesKind kind, CoverPoint x, double tol = 1e-6,
                                      double tol_abs = default_laplace_tol_abs) {
    Complex xv = x.value();
    double sgn = kind == SeriesKind::Psi ? -1.0 : 1.0;
    // |x^{-nu} e^{-+1/x}|: converts a relative tolerance on c into one on the difference
    double scale = std::abs(x.pow(-nu) * std::exp(sgn / xv));
    double inner = std::clamp(0.25 * (tol + tol_abs) * scale, 1e-14, default_laplace_tol);
    auto ts = two_sided_values(nu, kind, xv, inner);
    return (ts.minus - ts.plus) * x.pow(nu) * std::exp(-sgn / xv);
}

}  // namespace stokes_unfold
