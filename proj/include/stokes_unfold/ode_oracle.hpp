#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "initial_equation.hpp"
#include "perturbed_equation.hpp"
#include "quadrature.hpp"
#include "spectral.hpp"

namespace stokes_unfold {

// Y' = A(x) Y with A = diag(-a1, -a2, -a3) + superdiagonal ones
class CompanionSystem {
public:
    static CompanionSystem perturbed(const PerturbParams& p) { return CompanionSystem(p.nu(), p); }
    static CompanionSystem unperturbed(Complex nu) { return CompanionSystem(nu, std::nullopt); }

    bool is_perturbed() const { return params_.has_value(); }
    const std::optional<PerturbParams>& params() const { return params_; }
    Complex nu() const { return nu_; }

    CoefficientsA coefficients(Complex x) const {
        if (params_) return coefficients_a_signed(nu_, params_->sqrt_eps(), x);
        Complex ix = 1.0 / x;
        return {-ix * ix, -(nu_ - 2.0) * ix - 2.0 * ix * ix, -(nu_ - 4.0) * ix};
    }

    Matrix3 operator()(Complex x) const {
        auto a = coefficients(x);
        Matrix3 m = Matrix3::diagonal(-a.a1, -a.a2, -a.a3);
        m(0, 1) = 1.0;
        m(1, 2) = 1.0;
        return m;
    }

    std::vector<Complex> singular_points() const {
        if (params_) return {params_->x_L(), params_->x_R()};
        return {0.0};
    }
    // length scale for the distance guard
    double scale() const { return params_ ? params_->sqrt_eps() : 1.0; }

private:
    CompanionSystem(Complex nu, std::optional<PerturbParams> p) : nu_(nu), params_(p) {}
    Complex nu_;
    std::optional<PerturbParams> params_;
};

struct IntegrationStats {
    long steps = 0;
    long rejected = 0;
};

namespace detail {

// Dormand-Prince 5(4)
struct Dopri5 {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
};

}  // namespace detail

// integrates along each segment in its arc-length parameter
template <class System>
Matrix3 integrate_path(const System& A, const ContourPath& path, const Matrix3& Y0, double tol,
                       IntegrationStats* stats = nullptr) {
    using D = detail::Dopri5;
    if (!(tol > 0.0)) throw Error(ErrorKind::Domain, "integrate_path: tol must be positive");
    Matrix3 Y = Y0;
    IntegrationStats st;
    for (const auto& seg : path.segments()) {
        double L = ContourPath::length(seg);
        if (L == 0.0) continue;
        // dY/ds = A(x(s)) Y x'(s), s in [0, L]
        auto rhs = [&](double s, const Matrix3& y) {
            double f = s / L;
            Complex dx = ContourPath::tangent(seg, f) / L;
            return (A(ContourPath::point(seg, f)) * y) * dx;
        };
        double s = 0.0;
        double h = std::min(L, 0.01 * L + 1e-3);
        double err_prev = 1.0;
        Matrix3 k1 = rhs(s, Y);
        while (s < L) {
            if (s + h > L) h = L - s;
            Matrix3 k2 = rhs(s + D::c2 * h, Y + (h * D::a21) * k1);
            Matrix3 k3 = rhs(s + D::c3 * h, Y + h * (D::a31 * k1 + D::a32 * k2));
            Matrix3 k4 = rhs(s + D::c4 * h, Y + h * (D::a41 * k1 + D::a42 * k2 + D::a43 * k3));
            Matrix3 k5 = rhs(s + D::c5 * h, Y + h * (D::a51 * k1 + D::a52 * k2 + D::a53 * k3 + D::a54 * k4));
            Matrix3 k6 = rhs(s + h, Y + h * (D::a61 * k1 + D::a62 * k2 + D::a63 * k3 + D::a64 * k4 + D::a65 * k5));
            Matrix3 Yn = Y + h * (D::b1 * k1 + D::b3 * k3 + D::b4 * k4 + D::b5 * k5 + D::b6 * k6);
            Matrix3 k7 = rhs(s + h, Yn);
            Matrix3 E = h * (D::e1 * k1 + D::e3 * k3 + D::e4 * k4 + D::e5 * k5 + D::e6 * k6 + D::e7 * k7);
            double err = E.max_abs() / (tol * std::max(1.0, std::max(Y.max_abs(), Yn.max_abs())));
            if (!std::isfinite(err)) err = 1e10;
            if (err <= 1.0) {
                s += h;
                Y = Yn;
                k1 = k7;
                ++st.steps;
                double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
                h *= std::clamp(fac, 0.2, 5.0);
                err_prev = std::max(err, 1e-4);
            } else {
                ++st.rejected;
                h *= std::max(0.2, 0.9 * std::pow(err, -1.0 / 5.0));
            }
            if (h < 1e-14 * L) throw Error(ErrorKind::StepUnderflow, "integrate_path: step size underflow");
            if (st.steps + st.rejected > 2000000)
                throw Error(ErrorKind::Tolerance, "integrate_path: step budget exhausted");
        }
    }
    if (stats) *stats = st;
    return Y;
}

// distance guard for companion systems
inline void check_path_clearance(const CompanionSystem& sys, const ContourPath& path) {
    for (Complex p : sys.singular_points())
        if (path.distance_to(p) < 1e-3 * sys.scale())
            throw Error(ErrorKind::PathThroughSingularity, "path passes too close to a singular point");
}

inline Matrix3 integrate_companion(const CompanionSystem& sys, const ContourPath& path, const Matrix3& Y0, double tol,
                                   IntegrationStats* stats = nullptr) {
    check_path_clearance(sys, path);
    if (std::abs(Y0.determinant()) == 0.0) throw Error(ErrorKind::Singular, "integrate_companion: Y0 not invertible");
    return integrate_path(sys, path, Y0, tol, stats);
}

// int_path tr A(x) dx
inline Complex trace_integral(const CompanionSystem& sys, const ContourPath& path, double tol = 1e-12) {
    Complex total = 0.0;
    for (const auto& seg : path.segments()) {
        auto f = [&](double u) { return sys(ContourPath::point(seg, u)).trace() * ContourPath::tangent(seg, u); };
        total += integrate_adaptive(f, 0.0, 1.0, tol, 0.0, 4000, 8).value;
    }
    return total;
}

struct MonodromyReport {
    Matrix3 M_numeric;
    Triple eigenvalues_numeric;  // after cluster refinement
    Triple eigenvalues_raw;
    Triple eigenvalues_closed;
    bool log_detected = false;
    bool log_expected = false;
    double d_magnitude = 0.0;    // |d| of the closed form entry that carries the logarithm
    double min_sigma = 0.0;
    double eigenvalue_error = 0.0;
    double det_error = 0.0;      // det M against exp(loop integral of tr A)
    double max_invariant_error = 0.0;
    bool conditioning_warning = false;
    long steps = 0;
};

inline constexpr double default_oracle_tol = 1e-12;
inline constexpr double oracle_guard_inv_sqrt_eps = 12.0;

enum class LoopWhich { L, R };

struct OracleOptions {
    double tol = default_oracle_tol;
    bool allow_stiff = false;
    Complex base_point = 0.0;  // loop is the circle about x_j through this point
    bool reversed = false;
};

inline ContourPath loop_around(Complex centre, Complex base) {
    double r = std::abs(base - centre);
    double a0 = std::arg(base - centre);
    ContourPath p;
    p.arc(centre, r, a0, a0 + 2.0 * pi);
    return p;
}

namespace detail {

inline void fill_report(MonodromyReport& rep, const CompanionSystem& sys, const ContourPath& loop) {
    rep.eigenvalues_raw = eigenvalues(rep.M_numeric);
    rep.eigenvalues_numeric = refine_clusters(rep.eigenvalues_raw);
    rep.conditioning_warning = cluster_spread(rep.eigenvalues_raw) > 1e-9;
    auto probe = probe_jordan(rep.M_numeric, rep.eigenvalues_raw);
    rep.log_detected = probe.non_semisimple;
    rep.min_sigma = std::isfinite(probe.min_sigma) ? probe.min_sigma : 0.0;
    rep.eigenvalue_error = multiset_distance(rep.eigenvalues_numeric, rep.eigenvalues_closed);
    Complex det_expected = std::exp(trace_integral(sys, loop));
    rep.det_error = std::abs(rep.M_numeric.determinant() - det_expected);
    rep.max_invariant_error = std::max(rep.eigenvalue_error, rep.det_error);
}

}  // namespace detail

inline MonodromyReport numerical_monodromy(const PerturbParams& p, LoopWhich which, const OracleOptions& opt = {}) {
    if (p.inv_sqrt_eps() > oracle_guard_inv_sqrt_eps && !opt.allow_stiff)
        throw Error(ErrorKind::GuardRefusal, "numerical_monodromy: 1/sqrt eps > 12 is refused without the stiffness override");
    auto d = residues(p);
    auto sys = CompanionSystem::perturbed(p);
    Complex centre = which == LoopWhich::R ? p.x_R() : p.x_L();
    ContourPath loop = loop_around(centre, opt.base_point);
    if (opt.reversed) loop = loop.reversed();
    MonodromyReport rep;
    IntegrationStats stats;
    rep.M_numeric = integrate_companion(sys, loop, Matrix3::identity(), opt.tol, &stats);
    rep.steps = stats.steps;
    Triple closed = monodromy_eigenvalues_closed(p, which == LoopWhich::R ? Singularity::XR : Singularity::XL);
    if (opt.reversed)
        for (auto& c : closed) c = 1.0 / c;
    rep.eigenvalues_closed = closed;
    Complex dj = which == LoopWhich::R ? d.d_R3 : d.d_L2;
    Complex dother = which == LoopWhich::R ? d.d_R2 : d.d_L3;
    rep.d_magnitude = std::abs(dj) + std::abs(dother);
    rep.log_expected = rep.d_magnitude != 0.0;
    detail::fill_report(rep, sys, loop);
    return rep;
}

// gamma_R followed by gamma_L, both based at 0: the matrix M_L M_R, compared with St_L St_R Mhat
inline MonodromyReport numerical_product_monodromy(const PerturbParams& p, const OracleOptions& opt = {}) {
    if (p.inv_sqrt_eps() > oracle_guard_inv_sqrt_eps && !opt.allow_stiff)
        throw Error(ErrorKind::GuardRefusal, "numerical_product_monodromy: 1/sqrt eps > 12 is refused without the stiffness override");
    auto sys = CompanionSystem::perturbed(p);
    ContourPath loop = loop_around(p.x_R(), 0.0).then(loop_around(p.x_L(), 0.0));
    MonodromyReport rep;
    IntegrationStats stats;
    rep.M_numeric = integrate_companion(sys, loop, Matrix3::identity(), opt.tol, &stats);
    rep.steps = stats.steps;
    auto m = monodromy_matrices(p);
    Matrix3 closed = m.St_L * m.St_R * formal_monodromy(p.nu());
    rep.eigenvalues_closed = {closed(0, 0), closed(1, 1), closed(2, 2)};
    rep.log_expected = probe_jordan(closed, rep.eigenvalues_closed).non_semisimple;
    rep.d_magnitude = std::abs(closed(0, 1)) + std::abs(closed(0, 2));
    detail::fill_report(rep, sys, loop);
    return rep;
}

inline MonodromyReport unperturbed_monodromy(Complex nu, double radius, double tol = default_oracle_tol) {
    if (!(radius >= 0.5 && radius <= 2.0)) throw Error(ErrorKind::Domain, "unperturbed_monodromy: radius must lie in [0.5, 2]");
    auto sys = CompanionSystem::unperturbed(nu);
    ContourPath loop = loop_around(0.0, radius);
    MonodromyReport rep;
    IntegrationStats stats;
    rep.M_numeric = integrate_companion(sys, loop, Matrix3::identity(), tol, &stats);
    rep.steps = stats.steps;
    Matrix3 M0 = monodromy_origin(nu);
    rep.eigenvalues_closed = {M0(0, 0), M0(1, 1), M0(2, 2)};
    rep.log_expected = probe_jordan(M0, rep.eigenvalues_closed).non_semisimple;
    rep.d_magnitude = std::abs(M0(0, 1)) + std::abs(M0(0, 2));
    detail::fill_report(rep, sys, loop);
    return rep;
}

}  // namespace stokes_unfold
