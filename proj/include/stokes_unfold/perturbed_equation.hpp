#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <tuple>
#include <utility>

#include <Eigen/Dense>

#include "initial_equation.hpp"
#include "quadrature.hpp"

namespace stokes_unfold {

using Triple = std::array<Complex, 3>;

// (nu, sqrt eps); 1/sqrt eps is stored so that resonant points built from an integer index are exact
class PerturbParams {
public:
    static PerturbParams from_sqrt_eps(Complex nu, double sqrt_eps) {
        if (!(sqrt_eps > 0.0 && sqrt_eps < 1.0))
            throw Error(ErrorKind::Domain, "PerturbParams: need 0 < sqrt_eps < 1");
        return PerturbParams(nu, 1.0 / sqrt_eps);
    }
    static PerturbParams from_inverse(Complex nu, double inv_sqrt_eps) {
        if (!(inv_sqrt_eps > 1.0)) throw Error(ErrorKind::Domain, "PerturbParams: need 1/sqrt_eps > 1");
        return PerturbParams(nu, inv_sqrt_eps);
    }

    Complex nu() const { return nu_; }
    double inv_sqrt_eps() const { return inv_; }
    double sqrt_eps() const { return 1.0 / inv_; }
    double eps() const { return sqrt_eps() * sqrt_eps(); }
    // 1/(2 sqrt eps)
    double z() const { return 0.5 * inv_; }
    double x_L() const { return -sqrt_eps(); }
    double x_R() const { return sqrt_eps(); }

private:
    PerturbParams(Complex nu, double inv) : nu_(nu), inv_(inv) {}
    Complex nu_;
    double inv_;
};

enum class Singularity { XL, XR, Infinity };
enum class ResonanceClass { B, C, D, OtherResonant, NonResonant };

inline const char* to_string(ResonanceClass c) {
    switch (c) {
        case ResonanceClass::B: return "B";
        case ResonanceClass::C: return "C";
        case ResonanceClass::D: return "D";
        case ResonanceClass::OtherResonant: return "OtherResonant";
        case ResonanceClass::NonResonant: return "NonResonant";
    }
    return "?";
}

struct Deltas {
    Complex R21, R31, R32, L21, L31, L32;
};

struct ExponentData {
    Triple rho_R, rho_L, rho_inf;
    Deltas deltas;
};

struct CoefficientsA {
    Complex a1, a2, a3;
};

namespace detail {

inline void check_off_singularities(const PerturbParams& p, Complex x, const char* who) {
    double tol = 1e-14 * std::max(1.0, std::abs(x));
    if (std::abs(x - p.x_R()) < tol || std::abs(x - p.x_L()) < tol)
        throw Error(ErrorKind::Domain, std::string(who) + ": evaluation at a singular point");
}

// residues r with a_i = -sum_j r_ij/(x - x_j); s may be negative (relabelled equation)
struct PartialFractions {
    Complex xr, xl;
    Triple rr, rl;  // a_i residue numerators at xr and xl
};

inline PartialFractions partial_fractions(Complex nu, double s) {
    double inv = 1.0 / s;
    PartialFractions pf;
    pf.xr = s;
    pf.xl = -s;
    // rho^R_i - (i - 1), rho^L_i - (i - 1)
    pf.rr = {0.5 * inv, nu / 2.0 + inv - 1.0, nu / 2.0 - 2.0};
    pf.rl = {-0.5 * inv, nu / 2.0 - inv - 1.0, nu / 2.0 - 2.0};
    return pf;
}

struct ADerivs {
    Triple a, da, dda;
};

inline ADerivs a_with_derivatives(const PartialFractions& pf, Complex x) {
    ADerivs d;
    Complex ur = 1.0 / (x - pf.xr), ul = 1.0 / (x - pf.xl);
    for (int i = 0; i < 3; ++i) {
        d.a[i] = -pf.rr[i] * ur - pf.rl[i] * ul;
        d.da[i] = pf.rr[i] * ur * ur + pf.rl[i] * ul * ul;
        d.dda[i] = -2.0 * (pf.rr[i] * ur * ur * ur + pf.rl[i] * ul * ul * ul);
    }
    return d;
}

}  // namespace detail

// L_j = d/dx + a_j, in the rational form of the operators
inline CoefficientsA coefficients_a_signed(Complex nu, double s, Complex x) {
    Complex a1 = -(1.0 / (2.0 * s)) * (1.0 / (x - s) - 1.0 / (x + s));
    Complex a2 = -((nu - 2.0) / 2.0 + 1.0 / s) / (x - s) - ((nu - 2.0) / 2.0 - 1.0 / s) / (x + s);
    Complex a3 = -((nu - 4.0) / 2.0) * (1.0 / (x - s) + 1.0 / (x + s));
    return {a1, a2, a3};
}

inline CoefficientsA coefficients_a(const PerturbParams& p, Complex x) {
    detail::check_off_singularities(p, x, "coefficients_a");
    return coefficients_a_signed(p.nu(), p.sqrt_eps(), x);
}

// a_i = -(rho^R_i - (i-1))/(x - x_R) - (rho^L_i - (i-1))/(x - x_L)
inline CoefficientsA coefficients_a_exponent_form(const PerturbParams& p, Complex x) {
    detail::check_off_singularities(p, x, "coefficients_a_exponent_form");
    auto d = detail::a_with_derivatives(detail::partial_fractions(p.nu(), p.sqrt_eps()), x);
    return {d.a[0], d.a[1], d.a[2]};
}

struct ScalarCoefficients {
    Complex c2, c1, c0;
};

// y''' + c2 y'' + c1 y' + c0 y = 0 from expanding L3 L2 L1
inline ScalarCoefficients scalar_form_from(const detail::ADerivs& d) {
    auto& a = d.a;
    auto& da = d.da;
    ScalarCoefficients c;
    c.c2 = a[0] + a[1] + a[2];
    c.c1 = 2.0 * da[0] + da[1] + a[0] * a[1] + a[0] * a[2] + a[1] * a[2];
    c.c0 = d.dda[0] + da[0] * a[1] + a[0] * da[1] + da[0] * a[2] + a[0] * a[1] * a[2];
    return c;
}

inline ScalarCoefficients scalar_form_coefficients(const PerturbParams& p, Complex x) {
    detail::check_off_singularities(p, x, "scalar_form_coefficients");
    return scalar_form_from(detail::a_with_derivatives(detail::partial_fractions(p.nu(), p.sqrt_eps()), x));
}

// same equation after x = 1/t
inline ScalarCoefficients scalar_form_at_infinity(const PerturbParams& p, Complex t) {
    if (t == 0.0) throw Error(ErrorKind::Domain, "scalar_form_at_infinity: t = 0");
    auto c = scalar_form_coefficients(p, 1.0 / t);
    Complex t2 = t * t, t3 = t2 * t;
    return {6.0 / t - c.c2 / t2, 6.0 / t2 - 2.0 * c.c2 / t3 + c.c1 / (t2 * t2), -c.c0 / (t3 * t3)};
}

inline ExponentData exponent_data_signed(Complex nu, double s) {
    double inv = 1.0 / s;
    ExponentData e;
    e.rho_R = {0.5 * inv, nu / 2.0 + inv, nu / 2.0};
    e.rho_L = {-0.5 * inv, nu / 2.0 - inv, nu / 2.0};
    e.rho_inf = {0.0, 1.0 - nu, 2.0 - nu};
    e.deltas = {e.rho_R[1] - e.rho_R[0], e.rho_R[2] - e.rho_R[0], e.rho_R[2] - e.rho_R[1],
                e.rho_L[1] - e.rho_L[0], e.rho_L[2] - e.rho_L[0], e.rho_L[2] - e.rho_L[1]};
    return e;
}

inline ExponentData characteristic_exponents(const PerturbParams& p) {
    return exponent_data_signed(p.nu(), p.sqrt_eps());
}

// roots of rho(rho-1)(rho-2) + b2 rho(rho-1) + b1 rho + b0
inline Triple indicial_cubic_roots(Complex b2, Complex b1, Complex b0) {
    Complex c2 = b2 - 3.0, c1 = 2.0 - b2 + b1, c0 = b0;
    Eigen::Matrix3cd comp;
    comp << -c2, -c1, -c0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0;
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(comp, false);
    Triple r;
    for (int i = 0; i < 3; ++i) {
        Complex x = es.eigenvalues()[i];
        for (int it = 0; it < 3; ++it) {  // Newton polish
            Complex f = ((x + c2) * x + c1) * x + c0;
            Complex df = (3.0 * x + 2.0 * c2) * x + c1;
            if (std::abs(df) < 1e-300) break;
            Complex step = f / df;
            if (!is_finite(step) || std::abs(step) > 1e-6 * std::max(1.0, std::abs(x))) break;
            x -= step;
        }
        r[i] = x;
    }
    return r;
}

struct IndicialLimits {
    Complex b2, b1, b0;
};

// b_i = lim c_i (x - x_j)^{3-i}, Richardson on steps h and h/2
inline IndicialLimits indicial_limits(const PerturbParams& p, Singularity point) {
    auto sample = [&](double h) {
        ScalarCoefficients c;
        if (point == Singularity::Infinity) {
            c = scalar_form_at_infinity(p, h);
        } else {
            double xj = point == Singularity::XR ? p.x_R() : p.x_L();
            c = scalar_form_coefficients(p, xj + h);
        }
        return IndicialLimits{c.c2 * h, c.c1 * h * h, c.c0 * h * h * h};
    };
    double h = point == Singularity::Infinity ? 1e-6 : 1e-6 * p.sqrt_eps();
    auto f1 = sample(h), f2 = sample(0.5 * h);
    return {2.0 * f2.b2 - f1.b2, 2.0 * f2.b1 - f1.b1, 2.0 * f2.b0 - f1.b0};
}

inline Triple indicial_roots(const PerturbParams& p, Singularity point) {
    auto b = indicial_limits(p, point);
    if (point == Singularity::Infinity) {
        double scale = 1e-8;
        if (std::abs(b.b2) < scale && std::abs(b.b1) < scale && std::abs(b.b0) < scale)
            throw Error(ErrorKind::OrdinaryPoint, "indicial_roots: infinity is an ordinary point");
    }
    return indicial_cubic_roots(b.b2, b.b1, b.b0);
}

inline bool is_integer_valued(Complex w, double tol = 1e-9) {
    return std::abs(w.imag()) < tol && near_integer(w.real(), tol);
}

inline ResonanceClass classify_resonance(const PerturbParams& p) {
    auto d = characteristic_exponents(p).deltas;
    bool r = is_integer_valued(d.R21), l = is_integer_valued(d.L21);
    if (r && l) return ResonanceClass::B;
    if (l) return ResonanceClass::C;
    if (r) return ResonanceClass::D;
    for (Complex w : {d.R31, d.R32, d.L31, d.L32})
        if (is_integer_valued(w)) return ResonanceClass::OtherResonant;
    return ResonanceClass::NonResonant;
}

// principal branches of (x^2 - eps) and of (x - sqrt eps)/(x + sqrt eps)
struct DiagonalSolutions {
    Complex Phi1, Phi2, Phi3, Phi23;
};

namespace detail {

struct DiagonalLogs {
    Complex log_q;  // log(x^2 - eps)
    Complex log_r;  // log R
};

inline DiagonalLogs diagonal_logs(const PerturbParams& p, Complex x) {
    double s = p.sqrt_eps();
    Complex q = x * x - p.eps();
    Complex R = (x - s) / (x + s);
    double tol = 1e-14;
    if (std::abs(R.imag()) <= tol * std::abs(R) && R.real() <= 0.0)
        throw Error(ErrorKind::BranchCut, "diagonal_solutions: x on the segment [x_L, x_R]");
    if (std::abs(q.imag()) <= tol * std::abs(q) && q.real() <= 0.0)
        throw Error(ErrorKind::BranchCut, "diagonal_solutions: x^2 - eps on its cut");
    return {std::log(q), std::log(R)};
}

}  // namespace detail

inline DiagonalSolutions diagonal_solutions(const PerturbParams& p, Complex x) {
    auto L = detail::diagonal_logs(p, x);
    Complex nu = p.nu();
    double z = p.z();
    Complex q2 = 0.5 * (nu - 2.0), q3 = 0.5 * (nu - 4.0);
    return {std::exp(z * L.log_r), std::exp(q2 * L.log_q + 2.0 * z * L.log_r), std::exp(q3 * L.log_q),
            -0.5 * std::exp(q2 * L.log_q)};
}

struct Int2Result {
    Complex quadrature, closed;
};

// int_{-a}^{x} (s+a)^{b-1}/(s-a)^{b+1} ds against -(1/(2ab)) ((x+a)/(x-a))^b
inline Int2Result lemma_int2_check(double a, double b, double x, double tol = 1e-13) {
    if (!(a > 0.0 && b > 1.0 && x < -a)) throw Error(ErrorKind::Domain, "lemma_int2_check: need a > 0, b > 1, x < -a");
    // both bases are negative on the path; the same branch for both cancels the phase
    auto f = [&](Complex s) {
        double sr = s.real();
        return Complex(std::exp((b - 1.0) * std::log(std::abs(sr + a)) - (b + 1.0) * std::log(std::abs(sr - a))));
    };
    double w = 0.5 * a;
    auto q = integrate_endpoint_power(f, -a, x, b - 1.0, tol, w);
    Complex closed = -(1.0 / (2.0 * a * b)) * std::pow((x + a) / (x - a), b);
    return {q.value, closed};
}

enum class OffDiagonal { Phi12, Phi13 };

// Phi12 = Phi1 int_{x_R}^{x} Phi2/Phi1, Phi13 = Phi1 int_{x_L}^{x} Phi23/Phi1 along straight segments
inline Complex offdiag_solution_quadrature(const PerturbParams& p, Complex x, OffDiagonal which, double tol = 1e-12) {
    double s = p.sqrt_eps();
    Complex nu = p.nu();
    double z = p.z();
    Complex expo = z + 0.5 * nu - 1.0;  // endpoint exponent, same for both entries
    if (!(expo.real() > -1.0)) throw Error(ErrorKind::Divergent, "offdiag_solution_quadrature: integral diverges at the endpoint");
    if (std::abs(expo.imag()) > 0.0)
        throw Error(ErrorKind::NotImplemented, "offdiag_solution_quadrature: complex endpoint exponent");
    Complex start;
    if (which == OffDiagonal::Phi12) {
        if (!(x.real() > s)) throw Error(ErrorKind::PathThroughSingularity, "offdiag_solution_quadrature: Phi12 needs Re x > sqrt eps");
        start = s;
    } else {
        if (!(x.real() < -s)) throw Error(ErrorKind::PathThroughSingularity, "offdiag_solution_quadrature: Phi13 needs Re x < -sqrt eps");
        start = -s;
    }
    Complex q2 = 0.5 * (nu - 2.0);
    auto integrand = [&](Complex t) -> Complex {
        auto L = detail::diagonal_logs(p, t);
        if (which == OffDiagonal::Phi12) return std::exp(q2 * L.log_q + z * L.log_r);
        return -0.5 * std::exp(q2 * L.log_q - z * L.log_r);
    };
    auto d = diagonal_solutions(p, x);
    double scale = std::max(std::abs(d.Phi1), 1e-300);
    // Gauss-Jacobi stretch kept well inside the disk free of the other singularity
    auto r = integrate_endpoint_power(integrand, start, x, expo.real(), tol / scale, s);
    return d.Phi1 * r.value;
}

// Phi2 int_{x_L}^{x} Phi3/Phi2, equal to Phi23
inline Complex phi23_quadrature(const PerturbParams& p, double x, double tol = 1e-13) {
    double s = p.sqrt_eps();
    if (!(x < -s)) throw Error(ErrorKind::PathThroughSingularity, "phi23_quadrature: need x < x_L");
    double z = p.z();
    auto integrand = [&](Complex t) -> Complex {
        auto L = detail::diagonal_logs(p, t);
        return std::exp(-L.log_q - 2.0 * z * L.log_r);
    };
    auto r = integrate_endpoint_power(integrand, -s, x, 2.0 * z - 1.0, tol, 0.5 * s);
    return diagonal_solutions(p, x).Phi2 * r.value;
}

struct ResidueData {
    Complex d_R2, d_L2, d_R3, d_L3;
    Matrix3 T_L, T_R;
};

namespace detail {

// (nu)_m / m!, i.e. Gamma(nu + m)/(Gamma(nu) Gamma(m + 1))
inline Complex pochhammer_over_factorial(Complex nu, long m) {
    if (m <= 200) {
        Complex r = 1.0;
        for (long k = 1; k <= m; ++k) r *= (nu + double(k - 1)) / double(k);
        return r;
    }
    Complex rg = reciprocal_gamma(nu);
    if (rg == 0.0) return 0.0;
    return std::exp(log_gamma(nu + double(m)) - log_gamma(double(m) + 1.0)) * rg;
}

// m = 1/(2 sqrt eps) - nu/2 for a logarithmic-resonant point, else throws
inline long logarithmic_index(const PerturbParams& p) {
    auto cls = classify_resonance(p);
    if (cls != ResonanceClass::B && cls != ResonanceClass::C)
        throw Error(ErrorKind::NotResonant, std::string("parameters are of class ") + to_string(cls) +
                                                ", logarithmic branches need class B or C");
    Complex m = p.z() - 0.5 * p.nu();
    if (!is_integer_valued(m) || std::round(m.real()) < 0.0)
        throw Error(ErrorKind::NotImplemented, "closed forms need 1/(2 sqrt eps) - nu/2 to be a non-negative integer");
    long mi = std::lround(m.real());
    if (cls == ResonanceClass::B && std::lround(p.nu().real()) + mi < 1)
        throw Error(ErrorKind::NotImplemented, "closed forms need nu + m >= 1 in class B");
    return mi;
}

}  // namespace detail

inline ResidueData residues(const PerturbParams& p) {
    long m = detail::logarithmic_index(p);
    Complex nu = p.nu();
    double r = p.z();
    Complex ratio = detail::pochhammer_over_factorial(nu, m);
    Complex rpow = std::exp((1.0 - nu) * std::log(r));
    ResidueData d;
    d.d_R2 = 0.0;
    d.d_L3 = 0.0;
    // (-r)^{1-nu} with log(-r) = ln r + i pi
    d.d_L2 = rpow * exp_i_pi(1.0 - nu) * ratio;
    d.d_R3 = -0.5 * rpow * ratio;
    d.T_L = d.d_L2 * Matrix3::unit(0, 1) + d.d_L3 * Matrix3::unit(0, 2);
    d.T_R = d.d_R2 * Matrix3::unit(0, 1) + d.d_R3 * Matrix3::unit(0, 2);
    return d;
}

enum class ResidueWhich { L2, R3, R2, L3 };

inline constexpr int residue_oracle_nodes = 4096;

// (1/2 pi i) times the contour integral over |x - x_j| = sqrt eps / 2, trapezoid rule;
// branches are continued from x > sqrt eps through the lower half-plane
inline Complex residue_numeric_oracle(const PerturbParams& p, ResidueWhich which, int nodes = residue_oracle_nodes) {
    detail::logarithmic_index(p);
    double s = p.sqrt_eps();
    Complex nu = p.nu();
    double z = p.z();
    Complex alpha = z + 0.5 * nu - 1.0;  // power of the factor regular at the centre
    Complex beta = z - 0.5 * nu + 1.0;   // power of the singular factor
    bool at_left = which == ResidueWhich::L2 || which == ResidueWhich::L3;
    bool second = which == ResidueWhich::L2 || which == ResidueWhich::R2;
    // local exponent at the centre; the log coefficient is 0 unless it is an integer
    Complex local;
    if (second) local = at_left ? -beta : alpha;
    else local = at_left ? alpha : -beta;
    if (!is_integer_valued(local)) return 0.0;
    Complex centre = at_left ? -s : s;
    double radius = 0.5 * s;
    auto f = [&](Complex x) -> Complex {
        if (second) {
            // (x - s)^alpha (x + s)^{-beta}
            Complex left = at_left ? std::exp(alpha * std::log(s - x)) * exp_i_pi(-alpha) : std::exp(alpha * std::log(x - s));
            return left * std::exp(-beta * std::log(x + s));
        }
        // -(1/2) (x + s)^alpha (x - s)^{-beta}
        Complex right = at_left ? std::exp(-beta * std::log(s - x)) * exp_i_pi(beta) : std::exp(-beta * std::log(x - s));
        return -0.5 * std::exp(alpha * std::log(x + s)) * right;
    };
    Complex acc = 0.0;
    for (int k = 0; k < nodes; ++k) {
        Complex w = std::polar(radius, 2.0 * pi * k / nodes);
        acc += f(centre + w) * w;
    }
    return acc / double(nodes);
}

struct MonodromyData {
    Matrix3 E_L, E_R;          // e^{pi i (Lambda + Q/x_j)}
    Matrix3 St_L, St_R;        // e^{2 pi i T_j}
    Matrix3 M_L, M_R;
    double commutator_L, commutator_R;
};

inline Matrix3 diagonal_factor(const PerturbParams& p, Singularity point) {
    Complex nu = p.nu();
    double w = point == Singularity::XR ? p.inv_sqrt_eps() : -p.inv_sqrt_eps();  // 1/x_j
    return exp_i_pi_diagonal(w, nu - 2.0 + 2.0 * w, nu - 4.0);
}

inline std::pair<Matrix3, Matrix3> unfolded_stokes(const PerturbParams& p) {
    auto d = residues(p);
    return {exp_first_row_nilpotent(d.T_L, 2.0 * pi * I_unit), exp_first_row_nilpotent(d.T_R, 2.0 * pi * I_unit)};
}

inline MonodromyData monodromy_matrices(const PerturbParams& p) {
    MonodromyData m;
    std::tie(m.St_L, m.St_R) = unfolded_stokes(p);
    m.E_L = diagonal_factor(p, Singularity::XL);
    m.E_R = diagonal_factor(p, Singularity::XR);
    m.M_L = m.E_L * m.St_L;
    m.M_R = m.E_R * m.St_R;
    m.commutator_L = max_abs_diff(m.E_L * m.St_L, m.St_L * m.E_L);
    m.commutator_R = max_abs_diff(m.E_R * m.St_R, m.St_R * m.E_R);
    return m;
}

// M_L (Mhat^{-1} M_R Mhat) - St_L St_R Mhat
inline double infinity_relation_residual(const PerturbParams& p) {
    auto m = monodromy_matrices(p);
    Matrix3 Mh = formal_monodromy(p.nu());
    return max_abs_diff(m.M_L * (Mh.inverse() * m.M_R * Mh), m.St_L * m.St_R * Mh);
}

// the upper-sector factorizations M_L = E_L St_L, M_R = St_R E_R and their mirrored forms
inline double factorization_residual(const PerturbParams& p) {
    auto m = monodromy_matrices(p);
    return std::max({max_abs_diff(m.M_L, m.E_L * m.St_L), max_abs_diff(m.M_R, m.St_R * m.E_R),
                     max_abs_diff(m.M_L, m.St_L * m.E_L), max_abs_diff(m.M_R, m.E_R * m.St_R)});
}

// closed-form monodromy eigenvalues e^{2 pi i rho_1}, e^{2 pi i (rho_2 - 1)}, e^{2 pi i (rho_3 - 2)}
inline Triple monodromy_eigenvalues_closed(const PerturbParams& p, Singularity point) {
    auto e = characteristic_exponents(p);
    const Triple& r = point == Singularity::XR ? e.rho_R : e.rho_L;
    return {exp_i_pi(2.0 * r[0]), exp_i_pi(2.0 * (r[1] - 1.0)), exp_i_pi(2.0 * (r[2] - 2.0))};
}

}  // namespace stokes_unfold
