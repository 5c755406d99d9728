#include <catch_amalgamated.hpp>

#include <functional>

#include <stokes_unfold/borel_laplace.hpp>

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

// sum_{n<N} (nu)_n x^n by direct products
Complex asymptotic_partial(Complex nu, Complex x, int N) {
    Complex s = 0.0, c = 1.0, p = 1.0;
    for (int n = 0; n < N; ++n) {
        s += c * p;
        c *= nu + double(n);
        p *= x;
    }
    return s;
}

}  // namespace

TEST_CASE("laplace sum examples") {
    CHECK(std::abs(laplace_sum({0.0, SeriesKind::Psi, Complex(0.3, 0.1), 0.5}) - 1.0) < 1e-10);
    CHECK(std::abs(laplace_sum({0.0, SeriesKind::Phi, -0.2, pi - 0.3}) - 1.0) < 1e-10);

    // the ray theta = pi/2 needs arg x = pi/2 for decay
    Complex x = std::polar(0.1, pi / 2);
    Complex v = laplace_sum({0.5, SeriesKind::Psi, x, pi / 2});
    double remainder_bound = std::pow(1.0 * 0.1, 20) * std::tgamma(21.0);
    CHECK(std::abs(v - asymptotic_partial(0.5, x, 20)) <= remainder_bound);

    Complex y = std::polar(0.2, pi / 2);
    Complex poly = 1.0 - 2.0 * y + 2.0 * y * y;
    CHECK(std::abs(laplace_sum({-2.0, SeriesKind::Psi, y, pi / 2}) - poly) <= 1e-10);
}

TEST_CASE("laplace sum preconditions") {
    CHECK(kind_of([] { laplace_sum({0.5, SeriesKind::Psi, 0.1, pi / 2}); }) == ErrorKind::Decay);
    CHECK(kind_of([] { laplace_sum({0.5, SeriesKind::Psi, 0.1, 1e-5}); }) == ErrorKind::RayTooClose);
    CHECK(kind_of([] { laplace_sum({0.5, SeriesKind::Phi, -0.1, pi + 2 * pi + 1e-5}); }) == ErrorKind::RayTooClose);
    CHECK(kind_of([] { laplace_sum({0.5, SeriesKind::Psi, 0.0, 0.5}); }) == ErrorKind::Domain);
}

TEST_CASE("direction independence inside a sector") {
    for (double nu : {0.5, 2.0, -1.5})
        for (double r : {0.05, 0.1}) {
            Complex x = std::polar(r, 0.6);
            Complex a = laplace_sum({nu, SeriesKind::Psi, x, 0.25});
            Complex b = laplace_sum({nu, SeriesKind::Psi, x, 1.1});
            CHECK(std::abs(a - b) <= 2e-10);
        }
}

TEST_CASE("asymptotic agreement up to N = 15") {
    for (double nu : {0.5, 2.0})
        for (double r : {0.05, 0.1})
            for (double th : {0.4, -0.4}) {
                Complex x = std::polar(r, th);
                Complex v = laplace_sum({nu, SeriesKind::Psi, x, th, 1e-13});
                double A = nu <= 1.0 ? 1.0 : nu + 1.0;
                for (int N = 1; N <= 15; ++N)
                    CHECK(std::abs(v - asymptotic_partial(nu, x, N)) <= std::pow(A * r, N) * std::tgamma(N + 1.0));
            }
}

TEST_CASE("resummed functions solve their inhomogeneous equations") {
    const double h = 1e-5;
    for (double nu : {0.5, 2.0})
        for (double r : {0.05, 0.1}) {
            Complex x = std::polar(r, 0.3);
            auto psi = [&](Complex w) { return laplace_sum({nu, SeriesKind::Psi, w, 0.3, 1e-13}); };
            Complex d = (psi(x + h) - psi(x - h)) / (2 * h);
            CHECK(std::abs(x * x * d + (nu * x - 1.0) * psi(x) + 1.0) <= 1e-6);

            Complex y = -x;
            auto phi = [&](Complex w) { return laplace_sum({nu, SeriesKind::Phi, w, pi + 0.3, 1e-13}); };
            Complex e = (phi(y + h) - phi(y - h)) / (2 * h);
            CHECK(std::abs(y * y * e + (nu * y + 1.0) * phi(y) - 1.0) <= 1e-6);
        }
}

TEST_CASE("two-sided values") {
    for (double nu : {0.0, -1.0, -2.0, -3.0}) {
        auto t = two_sided_values(nu, SeriesKind::Psi, 0.1);
        CHECK(std::abs(t.minus - t.plus) <= 1e-9);
        auto u = two_sided_values(nu, SeriesKind::Phi, -0.1);
        CHECK(std::abs(u.minus - u.plus) <= 1e-9);
    }
    // independent evaluation of the jump through the closed form
    double x = 0.1;
    auto t = two_sided_values(0.5, SeriesKind::Psi, x, 1e-13);
    Complex expect = -(2.0 * pi * I_unit / std::sqrt(pi)) * std::pow(x, -0.5) * std::exp(-1.0 / x);
    CHECK(std::abs((t.minus - t.plus) - expect) <= 1e-6 * std::abs(expect));

    // x = -0.1 read as 0.1 e^{-i pi}
    CoverPoint y{0.1, -pi};
    auto u = two_sided_values(0.5, SeriesKind::Phi, y.value(), 1e-13);
    Complex expect_phi = -(2.0 * pi * I_unit * std::exp(-I_unit * pi / 2.0) / std::sqrt(pi)) * y.pow(-0.5) * std::exp(1.0 / y.value());
    CHECK(std::abs((u.minus - u.plus) - expect_phi) <= 1e-6 * std::abs(expect_phi));
}

TEST_CASE("Stokes jump by quadrature") {
    Complex c = stokes_jump_quadrature(0.5, SeriesKind::Psi, {0.1, 0.0});
    CHECK(std::abs(c - Complex(0, -3.5449077018110318)) <= 1e-6 * 3.5449);
    Complex d = stokes_jump_quadrature(2.0, SeriesKind::Phi, {0.1, -pi});
    CHECK(std::abs(d - Complex(0, -2 * pi)) <= 1e-6 * 2 * pi);
    CHECK(std::abs(stokes_jump_quadrature(-1.0, SeriesKind::Psi, {0.1, 0.0})) <= 1e-9);
    CHECK(std::abs(stokes_jump_quadrature(-1.0, SeriesKind::Phi, {0.1, -pi})) <= 1e-9);

    for (double nu : {0.5, 1.0 / 3, 2.0, 3.7}) {
        Complex psi_closed = -2.0 * pi * I_unit / std::tgamma(nu);
        Complex phi_closed = psi_closed * std::exp(-pi * I_unit * nu);
        CHECK(std::abs(stokes_jump_quadrature(nu, SeriesKind::Psi, {0.1, 0.0}) - psi_closed) <= 1e-6 * std::abs(psi_closed));
        CHECK(std::abs(stokes_jump_quadrature(nu, SeriesKind::Phi, {0.1, -pi}) - phi_closed) <= 1e-6 * std::abs(phi_closed));
    }
}

TEST_CASE("cover points") {
    CoverPoint p{2.0, 3 * pi};
    CHECK(std::abs(p.value() - Complex(-2.0, 0.0)) < 1e-14);
    CHECK(std::abs(p.pow(0.5) - std::sqrt(2.0) * std::exp(I_unit * 1.5 * pi)) < 1e-14);
}
