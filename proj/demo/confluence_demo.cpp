// Walks the resonant sequence 1/sqrt eps = nu + 2n and prints how the unfolded
// Stokes matrices approach the Stokes matrices of the confluent equation.

#include <cstdio>
#include <cstdlib>

#include <stokes_unfold/stokes_unfold.hpp>

using namespace stokes_unfold;

int main(int argc, char** argv) {
    double nu = argc > 1 ? std::atof(argv[1]) : 0.5;

    Matrix3 st0 = stokes_matrix(nu, StokesDirection::Zero);
    Matrix3 stpi = stokes_matrix(nu, StokesDirection::Pi);
    std::printf("nu = %g\n", nu);
    std::printf("St_0(1,3)  = %+.12f %+.12fi\n", st0(0, 2).real(), st0(0, 2).imag());
    std::printf("St_pi(1,2) = %+.12f %+.12fi\n\n", stpi(0, 1).real(), stpi(0, 1).imag());

    std::printf("%6s %12s %14s %14s\n", "n", "sqrt eps", "|St_L-St_pi|", "|St_R-St_0|");
    auto rows = confluence_table(nu, 1, 1000);
    for (const auto& r : rows)
        if (r.n == 1 || r.n == 3 || r.n == 10 || r.n == 30 || r.n == 100 || r.n == 300 || r.n == 1000)
            std::printf("%6ld %12.3e %14.3e %14.3e\n", r.n, r.sqrt_eps, r.stokes_err_L, r.stokes_err_R);

    auto s = summarize(rows);
    std::printf("\nfitted exponent over the last decade: L %.3f, R %.3f\n", s.L.rate, s.R.rate);

    // one point checked against the independent ODE integration
    auto p = PerturbParams::from_inverse(nu, nu + 2.0);
    if (p.inv_sqrt_eps() <= oracle_guard_inv_sqrt_eps && p.inv_sqrt_eps() > 1.0) {
        auto rep = numerical_monodromy(p, LoopWhich::R);
        std::printf("oracle at n = 1: eigenvalue error %.2e, logarithm %s (expected %s)\n", rep.eigenvalue_error,
                    rep.log_detected ? "yes" : "no", rep.log_expected ? "yes" : "no");
    }
    return 0;
}
