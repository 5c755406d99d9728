#include <catch_amalgamated.hpp>

#include <stokes_unfold/quadrature.hpp>

using namespace stokes_unfold;

TEST_CASE("adaptive Gauss-Kronrod on smooth integrands") {
    auto r = integrate_adaptive([](double x) { return Complex(std::sin(x)); }, 0.0, pi, 1e-13);
    CHECK(std::abs(r.value - 2.0) < 1e-13);
    auto e = integrate_adaptive([](double x) { return std::exp(Complex(0, x)); }, 0.0, 1.0, 1e-14);
    CHECK(std::abs(e.value - (std::exp(Complex(0, 1)) - 1.0) / Complex(0, 1)) < 1e-14);
    // peaked
    auto p = integrate_adaptive([](double x) { return Complex(1.0 / (1e-4 + x * x)); }, -1.0, 1.0, 1e-10);
    CHECK(std::abs(p.value - 2.0 * std::atan(1.0 / 1e-2) / 1e-2) < 1e-9);
}

TEST_CASE("adaptive quadrature gives up when the budget runs out") {
    try {
        integrate_adaptive([](double x) { return Complex(1.0 / std::sqrt(std::abs(x - 0.3))); }, 0.0, 1.0, 1e-15, 0.0, 20);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Tolerance);
    }
}

TEST_CASE("Gauss-Jacobi weights integrate the weight function") {
    auto rule = gauss_jacobi(20, 0.5, -0.3);
    double sum = 0.0, moment = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i];
        moment += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
    }
    // 2^{a+b+1} B(a+1, b+1), mpmath
    CHECK(std::abs(sum - 2.3986693804178209512) < 1e-13);
    CHECK(moment > 0.0);
    CHECK_THROWS_AS(gauss_jacobi(10, -1.0, 0.0), Error);
}

TEST_CASE("endpoint power singularities") {
    // mpmath references
    auto r = integrate_endpoint_power([](Complex x) { return std::cos(x) / std::sqrt(x); }, 0.0, 1.0, -0.5, 1e-13);
    CHECK(std::abs(r.value - 1.8090484758005441488) < 1e-12);
    auto s = integrate_endpoint_power([](Complex x) { return std::pow(x, 0.3) * std::exp(-x); }, 0.0, 2.0, 0.3, 1e-13);
    CHECK(std::abs(s.value - 0.7110857460713012335) < 1e-12);
    // along a complex segment: int_0^{i} t^{-1/2} dt = 2 sqrt(i)
    auto c = integrate_endpoint_power([](Complex t) { return 1.0 / std::sqrt(t); }, 0.0, Complex(0, 1), -0.5, 1e-13);
    CHECK(std::abs(c.value - 2.0 * std::sqrt(Complex(0, 1))) < 1e-12);
    CHECK_THROWS_AS(integrate_endpoint_power([](Complex t) { return 1.0 / t; }, 0.0, 1.0, -1.0, 1e-10), Error);
}

TEST_CASE("contour paths") {
    ContourPath p;
    p.line(0.0, 1.0).arc(0.0, 1.0, 0.0, pi / 2).line(Complex(0, 1), 0.0);
    CHECK(std::abs(p.start()) < 1e-15);
    CHECK(std::abs(p.end()) < 1e-15);
    CHECK(std::abs(p.length() - (2.0 + pi / 2)) < 1e-14);
    auto r = p.reversed();
    CHECK(std::abs(r.start() - p.end()) < 1e-15);
    CHECK(std::abs(r.length() - p.length()) < 1e-14);
    CHECK(std::abs(p.distance_to(Complex(0.5, 0.5)) - (1.0 - std::sqrt(0.5))) < 1e-14);  // arc is nearest
    ContourPath q;
    q.line(0.0, 1.0);
    CHECK_THROWS_AS(q.line(2.0, 3.0), Error);
}
