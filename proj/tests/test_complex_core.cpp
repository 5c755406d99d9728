#include <catch_amalgamated.hpp>

#include <random>

#include <stokes_unfold/complex_core.hpp>

using namespace stokes_unfold;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

// Taylor series of exp(sT), independent of the nilpotent shortcut
Matrix3 taylor_exp(const Matrix3& T, Complex s, int terms) {
    Matrix3 sum = Matrix3::identity(), term = Matrix3::identity();
    for (int k = 1; k <= terms; ++k) {
        term = term * (s * T) * (1.0 / k);
        sum += term;
    }
    return sum;
}

}  // namespace

TEST_CASE("gamma at small integers and one half") {
    CHECK(std::abs(gamma(Complex(1.0)) - 1.0) < 1e-15);
    CHECK(std::abs(gamma(Complex(5.0)) - 24.0) < 1e-12);
    CHECK(rel(gamma(Complex(0.5)), std::sqrt(pi)) < 1e-14);
}

TEST_CASE("gamma against high-precision reference values") {
    // mpmath, 30 digits
    struct Ref {
        Complex z, g;
    };
    const Ref refs[] = {
        {{0.3, 0.7}, {0.30968625674374916, -0.85678775293927057}},
        {{-2.5, 1.25}, {-0.0075444136773699135, -0.04727935089158156}},
        {{7.25, -3.5}, {413.38648914857977, -252.49453307381923}},
        {{-7.6, 0.0}, {0.00019104791914117363, 0.0}},
        {{12.5, 10.0}, {2400986.2787769799, 1988355.962140374}},
        {{0.1, 0.0}, {9.5135076986687313, 0.0}},
    };
    for (auto& r : refs) {
        INFO("z = " << r.z);
        CHECK(rel(gamma(r.z), r.g) < 1e-12);
    }
    Complex lg = log_gamma(Complex(3.3, 2.0));
    CHECK_THAT(lg.real(), WithinAbs(0.32864752957177731, 1e-12));
    CHECK(rel(std::exp(log_gamma(Complex(-4.2, 0.5))), gamma(Complex(-4.2, 0.5))) < 1e-11);
}

TEST_CASE("gamma poles and overflow") {
    for (double z : {0.0, -1.0, -2.0, -7.0}) {
        try {
            gamma(Complex(z));
            FAIL("no error at " << z);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Pole);
        }
    }
    CHECK_THROWS_AS(gamma(Complex(-3.0 + 1e-10)), Error);
    CHECK_NOTHROW(gamma(Complex(-3.0 + 1e-6)));
    try {
        gamma(Complex(200.0));
        FAIL("no overflow error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Domain);
    }
}

TEST_CASE("reciprocal gamma zeros and values") {
    CHECK(reciprocal_gamma(0.0) == Complex(0.0));
    CHECK(reciprocal_gamma(-3.0) == Complex(0.0));
    CHECK(std::abs(reciprocal_gamma(2.0) - 1.0) < 1e-15);
    CHECK(rel(reciprocal_gamma(0.5), 1.0 / std::sqrt(pi)) < 1e-14);
    CHECK(is_finite(reciprocal_gamma(-3.0 + 1e-12)));
}

TEST_CASE("rising factorial") {
    CHECK(rising_factorial(Complex(0.7, 0.2), 0) == Complex(1.0));
    CHECK(rising_factorial(2.0, 3) == Complex(24.0));
    CHECK(rising_factorial(-1.0, 3) == Complex(0.0));
    Complex nu(1.3, -0.4);
    CHECK(rel(rising_factorial_gamma_ratio(nu, 7), rising_factorial(nu, 7)) < 1e-12);
}

TEST_CASE("trigonometric helpers are exact at integers and half integers") {
    CHECK(sinpi(3.0) == 0.0);
    CHECK(sinpi(0.5) == 1.0);
    CHECK(cospi(1.0) == -1.0);
    CHECK(std::abs(exp_i_pi(1.0) - Complex(-1.0)) == 0.0);
    CHECK(std::abs(exp_i_pi(0.5) - Complex(0.0, 1.0)) == 0.0);
}

TEST_CASE("reflection, recurrence and reciprocal identities on random points") {
    std::mt19937_64 g(7);
    std::uniform_real_distribution<double> u(-20, 20);
    int tested = 0;
    double refl = 0, recur = 0, recip = 0;
    while (tested < 1000) {
        Complex z(u(g), u(g));
        if (std::abs(z) > 20 || std::abs(z.real() - std::round(z.real())) < 0.05) continue;
        ++tested;
        Complex ref = pi / sinpi(z);
        refl = std::max(refl, rel(gamma(z) * gamma(1.0 - z), ref));
        recur = std::max(recur, rel(gamma(z + 1.0), z * gamma(z)));
        recip = std::max(recip, std::abs(reciprocal_gamma(z) * gamma(z) - 1.0));
    }
    CHECK(refl <= 1e-10);
    CHECK(recur <= 1e-11);
    CHECK(recip <= 1e-11);
}

TEST_CASE("matrix basics") {
    Matrix3 a;
    a(0, 0) = 2.0;
    a(0, 1) = Complex(1.0, 1.0);
    a(1, 1) = 3.0;
    a(1, 2) = -1.0;
    a(2, 0) = 0.5;
    a(2, 2) = Complex(0.0, 2.0);
    CHECK(max_abs_diff(a * a.inverse(), Matrix3::identity()) < 1e-14);
    CHECK(std::abs(a.determinant() - (a(0, 0) * (a(1, 1) * a(2, 2)) + a(0, 1) * (a(1, 2) * a(2, 0)))) < 1e-14);
    CHECK(std::abs(a.trace() - Complex(5.0, 2.0)) == 0.0);

    Matrix3 b = Matrix3::unit(0, 2) + Matrix3::identity() * Complex(0.3, -0.1);
    Matrix3 c = Matrix3::diagonal(1.0, Complex(0, 1), -2.0) + Matrix3::unit(2, 1);
    CHECK(max_abs_diff((a * b) * c, a * (b * c)) < 1e-14);

    Matrix3 sing = Matrix3::diagonal(1.0, 1.0, 0.0);
    try {
        sing.inverse();
        FAIL("inverted a singular matrix");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Singular);
    }
    CHECK(Matrix3::diagonal(1.0, 2.0, 3.0).is_diagonal());
    CHECK_FALSE(a.is_diagonal());
}

TEST_CASE("nilpotent exponential") {
    Matrix3 zero;
    CHECK(max_abs_diff(exp_first_row_nilpotent(zero, 2.0 * pi * I_unit), Matrix3::identity()) == 0.0);

    Matrix3 t = Matrix3::unit(0, 1);
    Matrix3 e = exp_first_row_nilpotent(t, 2.0 * pi * I_unit);
    CHECK(max_abs_diff(e, Matrix3::identity() + 2.0 * pi * I_unit * Matrix3::unit(0, 1)) == 0.0);

    Matrix3 ab;
    ab(0, 1) = Complex(0.4, -1.1);
    ab(0, 2) = Complex(-2.0, 0.3);
    Complex s(0.7, 5.0);
    CHECK(max_abs_diff(exp_first_row_nilpotent(ab, s), taylor_exp(ab, s, 10)) <= 1e-14);

    CHECK_THROWS_AS(exp_first_row_nilpotent(Matrix3::unit(1, 0), 1.0), Error);
}

TEST_CASE("diagonal exponential") {
    Complex nu(0.5, 0.0);
    Matrix3 fm = exp_diagonal(Matrix3::diagonal(0.0, nu - 2.0, nu - 4.0), 2.0 * pi * I_unit);
    Complex e = std::exp(2.0 * pi * I_unit * nu);
    CHECK(max_abs_diff(fm, Matrix3::diagonal(1.0, e, e)) < 1e-15);
    CHECK(max_abs_diff(exp_diagonal(Matrix3(), 3.0), Matrix3::identity()) == 0.0);
    CHECK(max_abs_diff(exp_diagonal(Matrix3::diagonal(1.0, 2.0, 0.0), pi * I_unit), Matrix3::diagonal(-1.0, 1.0, 1.0)) == 0.0);
    CHECK(max_abs_diff(exp_i_pi_diagonal(1.0, 2.0, 0.0), Matrix3::diagonal(-1.0, 1.0, 1.0)) == 0.0);
}
