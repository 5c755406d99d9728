#include <catch_amalgamated.hpp>

#include <functional>

#include <stokes_unfold/ode_oracle.hpp>

using namespace stokes_unfold;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::Parse;
}

Matrix3 taylor_exp(const Matrix3& A, int terms) {
    Matrix3 sum = Matrix3::identity(), term = Matrix3::identity();
    for (int k = 1; k <= terms; ++k) {
        term = term * A * (1.0 / k);
        sum += term;
    }
    return sum;
}

// y''' + c2 y'' + c1 y' + c0 y = 0 as a first-order system in (y, y', y'')
struct ScalarCompanion {
    PerturbParams p;
    Matrix3 operator()(Complex x) const {
        auto c = scalar_form_coefficients(p, x);
        Matrix3 m;
        m(0, 1) = 1.0;
        m(1, 2) = 1.0;
        m(2, 0) = -c.c0;
        m(2, 1) = -c.c1;
        m(2, 2) = -c.c2;
        return m;
    }
};

}  // namespace

TEST_CASE("frozen coefficients give the matrix exponential") {
    Matrix3 A = Matrix3::diagonal(-1.0, -2.0, 0.0);
    A(0, 1) = 1.0;
    A(1, 2) = 1.0;
    auto frozen = [&](Complex) { return A; };
    ContourPath path;
    path.line(0.0, 1.0);
    Matrix3 Y = integrate_path(frozen, path, Matrix3::identity(), 1e-12);
    CHECK(max_abs_diff(Y, taylor_exp(A, 40)) < 1e-10);

    ContourPath tilted;
    tilted.line(0.0, Complex(0.0, 1.0));
    Matrix3 Z = integrate_path(frozen, tilted, Matrix3::identity(), 1e-12);
    CHECK(max_abs_diff(Z, taylor_exp(Complex(0.0, 1.0) * A, 40)) < 1e-10);
}

TEST_CASE("contractible loops return the identity") {
    auto p = PerturbParams::from_inverse(0.5, 2.5);
    auto sys = CompanionSystem::perturbed(p);
    auto loop = loop_around(Complex(1.0, 1.0), Complex(1.3, 1.0));
    Matrix3 M = integrate_companion(sys, loop, Matrix3::identity(), 1e-12);
    CHECK(max_abs_diff(M, Matrix3::identity()) < 1e-10);
}

TEST_CASE("companion system and scalar equation agree") {
    auto p = PerturbParams::from_inverse(0.5, 4.0);
    auto sys = CompanionSystem::perturbed(p);
    Complex x0(0.6, 0.5), x1(1.4, 0.2);
    ContourPath path;
    path.line(x0, x1);

    // scalar data (y, y', y'') = e_k mapped to Y = (y, L1 y, L2 L1 y)
    auto a = coefficients_a(p, x0);
    double s = p.sqrt_eps();
    Complex da1 = (1.0 / (2.0 * s)) * (1.0 / ((x0 - s) * (x0 - s)) - 1.0 / ((x0 + s) * (x0 + s)));
    Matrix3 S0 = Matrix3::identity();
    Matrix3 Y0;
    for (int k = 0; k < 3; ++k) {
        Complex y = S0(0, k), dy = S0(1, k), ddy = S0(2, k);
        Complex y2 = dy + a.a1 * y;
        Complex dy2 = ddy + da1 * y + a.a1 * dy;
        Y0(0, k) = y;
        Y0(1, k) = y2;
        Y0(2, k) = dy2 + a.a2 * y2;
    }
    Matrix3 Y = integrate_companion(sys, path, Y0, 1e-13);
    Matrix3 S = integrate_path(ScalarCompanion{p}, path, S0, 1e-13);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(Y(0, k) - S(0, k)) <= 1e-8 * std::max(1.0, std::abs(S(0, k))));
}

TEST_CASE("first row satisfies the scalar equation along the path") {
    auto p = PerturbParams::from_inverse(0.5, 4.0);
    auto sys = CompanionSystem::perturbed(p);
    Complex start(1.0, 1.0);
    const double h = 0.005;
    // dense grid from start along the real direction
    std::vector<Matrix3> grid;
    Matrix3 Y = Matrix3::identity();
    grid.push_back(Y);
    for (int k = 1; k <= 12; ++k) {
        ContourPath seg;
        seg.line(start + (k - 1) * h, start + double(k) * h);
        Y = integrate_path(sys, seg, Y, 1e-14);
        grid.push_back(Y);
    }
    for (int c = 3; c <= 9; ++c) {
        Complex x = start + double(c) * h;
        auto co = scalar_form_coefficients(p, x);
        for (int col = 0; col < 3; ++col) {
            auto f = [&](int k) { return grid[c + k](0, col); };
            Complex d1 = (-f(2) + 8.0 * f(1) - 8.0 * f(-1) + f(-2)) / (12 * h);
            Complex d2 = (-f(2) + 16.0 * f(1) - 30.0 * f(0) + 16.0 * f(-1) - f(-2)) / (12 * h * h);
            Complex d3 = (-f(3) + 8.0 * f(2) - 13.0 * f(1) + 13.0 * f(-1) - 8.0 * f(-2) + f(-3)) / (8 * h * h * h);
            Complex res = d3 + co.c2 * d2 + co.c1 * d1 + co.c0 * f(0);
            double scale = std::max({std::abs(d3), std::abs(co.c2 * d2), std::abs(co.c1 * d1), std::abs(co.c0 * f(0)), 1.0});
            CHECK(std::abs(res) / scale <= 1e-6);
        }
    }
}

TEST_CASE("path guards") {
    auto p = PerturbParams::from_inverse(0.5, 2.5);
    auto sys = CompanionSystem::perturbed(p);
    ContourPath through;
    through.line(Complex(-1.0, 0.0), Complex(1.0, 0.0));
    CHECK(kind_of([&] { integrate_companion(sys, through, Matrix3::identity(), 1e-10); }) == ErrorKind::PathThroughSingularity);
    ContourPath fine;
    fine.line(Complex(0.0, 1.0), Complex(1.0, 1.0));
    CHECK(kind_of([&] { integrate_companion(sys, fine, Matrix3(), 1e-10); }) == ErrorKind::Singular);
    CHECK(kind_of([&] { numerical_monodromy(PerturbParams::from_inverse(0.5, 100.5), LoopWhich::L); }) ==
          ErrorKind::GuardRefusal);
    CHECK(kind_of([] { unperturbed_monodromy(0.5, 0.3); }) == ErrorKind::Domain);
}

TEST_CASE("monodromy around x_L and x_R") {
    const std::pair<double, double> cases[] = {{0.5, 2.5}, {0.5, 4.5}, {2.0, 4.0}, {2.0, 6.0}, {-1.0, 3.0}};
    for (auto [nu, inv] : cases) {
        auto p = PerturbParams::from_inverse(nu, inv);
        auto d = residues(p);
        for (auto w : {LoopWhich::L, LoopWhich::R}) {
            auto rep = numerical_monodromy(p, w);
            INFO("nu=" << nu << " 1/sqrt eps=" << inv << (w == LoopWhich::L ? " L" : " R"));
            CHECK(rep.eigenvalue_error <= 1e-6);
            CHECK(rep.det_error <= 1e-6);
            Complex dj = w == LoopWhich::L ? d.d_L2 : d.d_R3;
            CHECK(rep.log_detected == (dj != 0.0));
            CHECK(rep.log_detected == rep.log_expected);
        }
    }
}

TEST_CASE("eigenvalues follow the local exponents") {
    auto p = PerturbParams::from_inverse(0.5, 2.5);
    auto rep = numerical_monodromy(p, LoopWhich::R);
    auto e = characteristic_exponents(p).rho_R;
    Triple closed{std::exp(2.0 * pi * I_unit * e[0]), std::exp(2.0 * pi * I_unit * (e[1] - 1.0)),
                  std::exp(2.0 * pi * I_unit * (e[2] - 2.0))};
    CHECK(multiset_distance(rep.eigenvalues_numeric, closed) <= 1e-6);
    CHECK(rep.log_detected);
}

TEST_CASE("composed loops reproduce the relation at infinity") {
    for (auto [nu, inv] : {std::pair{0.5, 2.5}, std::pair{2.0, 4.0}, std::pair{0.5, 4.5}}) {
        auto rep = numerical_product_monodromy(PerturbParams::from_inverse(nu, inv));
        CHECK(rep.eigenvalue_error <= 1e-5);
    }
}

TEST_CASE("loop reversal inverts") {
    auto p = PerturbParams::from_inverse(2.0, 4.0);
    auto fwd = numerical_monodromy(p, LoopWhich::R);
    OracleOptions o;
    o.reversed = true;
    auto rev = numerical_monodromy(p, LoopWhich::R, o);
    CHECK(max_abs_diff(fwd.M_numeric * rev.M_numeric, Matrix3::identity()) < 1e-8);
    Triple inv{1.0 / fwd.eigenvalues_numeric[0], 1.0 / fwd.eigenvalues_numeric[1], 1.0 / fwd.eigenvalues_numeric[2]};
    CHECK(multiset_distance(rev.eigenvalues_numeric, inv) < 1e-6);
}

TEST_CASE("base point independence") {
    auto p = PerturbParams::from_inverse(0.5, 4.5);
    auto a = numerical_monodromy(p, LoopWhich::L);
    OracleOptions o;
    o.base_point = Complex(0.0, 0.5 * p.sqrt_eps());
    auto b = numerical_monodromy(p, LoopWhich::L, o);
    CHECK(multiset_distance(a.eigenvalues_numeric, b.eigenvalues_numeric) < 1e-6);
    CHECK(a.log_detected == b.log_detected);
    CHECK(std::abs(a.M_numeric.determinant() - b.M_numeric.determinant()) < 1e-6);
}

TEST_CASE("loops around the origin") {
    auto zero = unperturbed_monodromy(0.0, 1.0);
    CHECK(max_abs_diff(zero.M_numeric, Matrix3::identity()) < 1e-6);
    CHECK_FALSE(zero.log_detected);

    auto half = unperturbed_monodromy(0.5, 1.0);
    CHECK(multiset_distance(half.eigenvalues_numeric, {1.0, -1.0, -1.0}) < 1e-6);
    CHECK(half.log_detected == half.log_expected);

    auto three = unperturbed_monodromy(3.0, 1.0);
    CHECK(multiset_distance(three.eigenvalues_numeric, {1.0, 1.0, 1.0}) < 1e-6);
    CHECK(three.log_detected);

    for (double nu : {0.0, 0.5, 3.0}) {
        auto a = unperturbed_monodromy(nu, 0.7), b = unperturbed_monodromy(nu, 1.3);
        CHECK(multiset_distance(a.eigenvalues_numeric, b.eigenvalues_numeric) < 1e-6);
        CHECK(a.log_detected == b.log_detected);
        CHECK(a.det_error < 1e-6);
    }
}
