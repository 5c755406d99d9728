#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../stokes_unfold.hpp"
#include "serialize.hpp"

namespace stokes_unfold::cli {

struct PropertyOutcome {
    bool passed;
    std::string detail;
};

struct Property {
    std::string module;
    std::string name;
    std::function<PropertyOutcome(std::mt19937_64&)> run;
};

struct PropertyResult {
    std::string module, name;
    bool passed;
    std::string detail;
    double seconds;
};

namespace detail {

inline std::string fmt(double v) {
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

inline PropertyOutcome within(double worst, double bound, const std::string& what = "max error") {
    return {worst <= bound, what + " " + fmt(worst) + " (bound " + fmt(bound) + ")"};
}

inline double uniform(std::mt19937_64& g, double a, double b) { return std::uniform_real_distribution<double>(a, b)(g); }

// random point of the disk |z| <= r at distance >= gap from the integers
inline Complex away_from_integers(std::mt19937_64& g, double r, double gap) {
    for (;;) {
        Complex z(uniform(g, -r, r), uniform(g, -r, r));
        if (std::abs(z) > r) continue;
        if (std::abs(z.real() - std::round(z.real())) < gap) continue;
        return z;
    }
}

inline std::vector<Property> complex_core_properties() {
    return {
        {"complex_core", "reflection",
         [](std::mt19937_64& g) {
             double worst = 0;
             for (int i = 0; i < 1000; ++i) {
                 Complex z = away_from_integers(g, 20.0, 0.05);
                 Complex ref = pi / sinpi(z);
                 worst = std::max(worst, std::abs(gamma(z) * gamma(1.0 - z) - ref) / std::abs(ref));
             }
             return within(worst, 1e-10, "relative error");
         }},
        {"complex_core", "recurrence",
         [](std::mt19937_64& g) {
             double worst = 0;
             for (int i = 0; i < 1000; ++i) {
                 Complex z = away_from_integers(g, 20.0, 0.05);
                 Complex lhs = gamma(z + 1.0), rhs = z * gamma(z);
                 worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
             }
             return within(worst, 1e-11, "relative error");
         }},
        {"complex_core", "reciprocal_gamma_inverse",
         [](std::mt19937_64& g) {
             double worst = 0;
             for (int i = 0; i < 1000; ++i) {
                 Complex z = away_from_integers(g, 20.0, 0.05);
                 worst = std::max(worst, std::abs(reciprocal_gamma(z) * gamma(z) - 1.0));
             }
             return within(worst, 1e-11);
         }},
        {"complex_core", "nilpotent_exp_taylor",
         [](std::mt19937_64& g) {
             double worst = 0;
             for (int i = 0; i < 200; ++i) {
                 Matrix3 T;
                 T(0, 1) = Complex(uniform(g, -2, 2), uniform(g, -2, 2));
                 T(0, 2) = Complex(uniform(g, -2, 2), uniform(g, -2, 2));
                 Complex s(uniform(g, -7, 7), uniform(g, -7, 7));
                 Matrix3 sum = Matrix3::identity(), term = Matrix3::identity();
                 for (int k = 1; k <= 10; ++k) {
                     term = term * (s * T) * (1.0 / k);
                     sum += term;
                 }
                 worst = std::max(worst, max_abs_diff(sum, exp_first_row_nilpotent(T, s)));
             }
             return within(worst, 1e-14);
         }},
    };
}

inline std::vector<Property> formal_series_properties() {
    return {
        {"formal_series", "borel_partial_sums",
         [](std::mt19937_64& g) {
             double worst = 0;
             for (int i = 0; i < 200; ++i) {
                 Complex nu = std::polar(uniform(g, 0, 3), uniform(g, -pi, pi));
                 Complex zeta = std::polar(uniform(g, 0, 0.6), uniform(g, -pi, pi));
                 for (auto kind : {SeriesKind::Psi, SeriesKind::Phi}) {
                     auto s = build_series(nu, kind, 60);
                     Complex sum = 0.0, zp = 1.0, fact = 1.0;
                     for (int n = 0; n <= 60; ++n) {
                         if (n > 0) fact *= double(n);
                         sum += s.coefficients[n] / fact * zp;
                         zp *= zeta;
                     }
                     worst = std::max(worst, std::abs(sum - borel_transform_value(nu, kind, zeta)));
                 }
             }
             return within(worst, 1e-9);
         }},
        {"formal_series", "ode_residual_exact",
         [](std::mt19937_64& g) {
             double worst = 0;
             for (int i = 0; i < 100; ++i) {
                 double nu = std::round(uniform(g, -40, 40)) / 8.0;  // exactly representable
                 for (auto kind : {SeriesKind::Psi, SeriesKind::Phi}) {
                     auto s = build_series(nu, kind, 20);
                     auto r = ode_residual_coefficients(s);
                     for (int n = 0; n <= s.order(); ++n) worst = std::max(worst, std::abs(r[n]));
                 }
             }
             return PropertyOutcome{worst == 0.0, "max |residual| up to degree N = " + fmt(worst)};
         }},
        {"formal_series", "terminating_cases",
         [](std::mt19937_64&) {
             bool ok = true;
             std::string why;
             for (int k = 0; k <= 3; ++k) {
                 double fact = std::tgamma(k + 1.0);
                 for (auto kind : {SeriesKind::Psi, SeriesKind::Phi}) {
                     auto s = build_series(double(-k), kind, 12);
                     int nonzero = 0;
                     for (auto c : s.coefficients)
                         if (c != 0.0) ++nonzero;
                     Complex top = s.coefficients[k];
                     double expect = kind == SeriesKind::Psi ? ((k % 2) ? -fact : fact) : fact;
                     if (nonzero != k + 1 || top != Complex(expect)) {
                         ok = false;
                         why += " nu=-" + std::to_string(k);
                     }
                 }
             }
             return PropertyOutcome{ok, ok ? "exact" : "failed at" + why};
         }},
        {"formal_series", "gevrey_bound",
         [](std::mt19937_64& g) {
             int bad = 0;
             for (int i = 0; i < 200; ++i) {
                 Complex nu = std::polar(uniform(g, 0, 6), uniform(g, -pi, pi));
                 for (auto kind : {SeriesKind::Psi, SeriesKind::Phi})
                     if (!gevrey_bound_check(build_series(nu, kind, 60))) ++bad;
             }
             return PropertyOutcome{bad == 0, std::to_string(bad) + " violations"};
         }},
    };
}

inline std::vector<Property> borel_laplace_properties() {
    return {
        {"borel_laplace", "direction_independence",
         [](std::mt19937_64&) {
             double worst = 0, tol = 1e-10;
             for (double nu : {0.5, 2.0})
                 for (double r : {0.05, 0.1}) {
                     Complex x = std::polar(r, pi / 4);
                     Complex a = laplace_sum({nu, SeriesKind::Psi, x, pi / 8, tol});
                     Complex b = laplace_sum({nu, SeriesKind::Psi, x, 3 * pi / 8, tol});
                     worst = std::max(worst, std::abs(a - b));
                     Complex y = std::polar(r, pi + pi / 4);
                     Complex c = laplace_sum({nu, SeriesKind::Phi, y, pi + pi / 8, tol});
                     Complex d = laplace_sum({nu, SeriesKind::Phi, y, pi + 3 * pi / 8, tol});
                     worst = std::max(worst, std::abs(c - d));
                 }
             return within(worst, 2 * tol, "max difference");
         }},
        {"borel_laplace", "asymptotic_expansion",
         [](std::mt19937_64&) {
             double worst_ratio = 0;
             for (double nu : {0.5, 2.0})
                 for (double r : {0.05, 0.1}) {
                     Complex x = std::polar(r, pi / 4);
                     Complex v = laplace_sum({nu, SeriesKind::Psi, x, pi / 4, 1e-13});
                     auto s = build_series(nu, SeriesKind::Psi, 16);
                     double A = gevrey_constant(nu);
                     for (int N = 1; N <= 15; ++N) {
                         double bound = std::pow(A * r, N) * std::tgamma(N + 1.0);
                         worst_ratio = std::max(worst_ratio, std::abs(v - s.partial_sum(x, N)) / bound);
                     }
                 }
             return within(worst_ratio, 1.0, "max remainder/bound");
         }},
        {"borel_laplace", "ode_residual",
         [](std::mt19937_64&) {
             double worst = 0, h = 1e-5;
             for (double nu : {0.5, 2.0})
                 for (double r : {0.05, 0.1}) {
                     Complex x = std::polar(r, pi / 4);
                     auto psi = [&](Complex w) { return laplace_sum({nu, SeriesKind::Psi, w, pi / 4, 1e-13}); };
                     Complex d = (psi(x + h) - psi(x - h)) / (2 * h);
                     worst = std::max(worst, std::abs(x * x * d + (nu * x - 1.0) * psi(x) + 1.0));
                 }
             return within(worst, 1e-6, "max residual");
         }},
        {"borel_laplace", "jump_consistency",
         [](std::mt19937_64&) {
             double worst = 0;
             for (double nu : {0.5, 1.0 / 3, 2.0, 3.7}) {
                 for (auto kind : {SeriesKind::Psi, SeriesKind::Phi}) {
                     CoverPoint x = kind == SeriesKind::Psi ? CoverPoint{0.1, 0.0} : CoverPoint{0.1, -pi};
                     Complex c = stokes_jump_closed(nu, kind);
                     worst = std::max(worst, std::abs(stokes_jump_quadrature(nu, kind, x) - c) / std::abs(c));
                 }
             }
             return within(worst, 1e-6, "relative error");
         }},
    };
}

inline std::vector<Property> initial_equation_properties() {
    return {
        {"initial_equation", "group_relation",
         [](std::mt19937_64& g) {
             double worst = 0;
             for (int i = 0; i < 50; ++i) {
                 Complex nu = away_from_integers(g, 5.0, 0.05);
                 Matrix3 M0 = monodromy_origin(nu);
                 Matrix3 prod = stokes_matrix(nu, StokesDirection::Pi) * stokes_matrix(nu, StokesDirection::Zero) *
                                formal_monodromy(nu);
                 Complex e = std::exp(2.0 * pi * I_unit * nu);
                 worst = std::max(worst, max_abs_diff(M0, prod));
                 worst = std::max(worst, multiset_distance(refine_clusters(eigenvalues(M0)), {1.0, e, e}) /
                                             std::max(1.0, std::abs(e)));
             }
             return within(worst, 1e-10);
         }},
        {"initial_equation", "identity_at_nonpositive_integers",
         [](std::mt19937_64&) {
             bool ok = true;
             for (int k = 0; k <= 8; ++k)
                 for (auto d : {StokesDirection::Zero, StokesDirection::Pi})
                     ok = ok && max_abs_diff(stokes_matrix(double(-k), d), Matrix3::identity()) == 0.0;
             return PropertyOutcome{ok, ok ? "St = I exactly for nu = 0..-8" : "non-identity Stokes matrix"};
         }},
        {"initial_equation", "borel_consistency",
         [](std::mt19937_64&) {
             double worst = 0;
             for (double nu : {0.5, 2.0, 3.7}) {
                 Complex entry = stokes_matrix(nu, StokesDirection::Zero)(0, 2);
                 Complex half = 0.5 * stokes_jump_quadrature(nu, SeriesKind::Psi, {0.1, 0.0});
                 worst = std::max(worst, std::abs(half - entry) / std::abs(entry));
             }
             return within(worst, 1e-6, "relative error");
         }},
    };
}

inline PerturbParams random_params(std::mt19937_64& g) {
    return PerturbParams::from_inverse(uniform(g, -3, 3), uniform(g, 1.2, 12));
}

// 5 type C and 5 type B logarithmic points
inline std::vector<PerturbParams> log_resonant_samples() {
    std::vector<PerturbParams> out;
    const std::pair<double, long> pts[] = {{0.5, 1}, {0.5, 4}, {1.0 / 3, 2}, {3.7, 3}, {-0.4, 5},
                                           {2.0, 1}, {2.0, 5}, {1.0, 3},     {3.0, 2}, {-1.0, 4}};
    for (auto [nu, n] : pts) out.push_back(PerturbParams::from_inverse(nu, nu + 2.0 * n));
    return out;
}

inline std::vector<Property> perturbed_equation_properties() {
    return {
        {"perturbed_equation", "exponent_identities",
         [](std::mt19937_64& g) {
             double worst = 0;
             for (int i = 0; i < 100; ++i) {
                 auto p = random_params(g);
                 auto d = characteristic_exponents(p).deltas;
                 double inv = p.inv_sqrt_eps();
                 for (Complex e : {d.L32 - inv, d.R32 + inv, d.L21 - (d.R21 + d.R32), d.R31 - d.L21, d.L31 - d.R21})
                     worst = std::max(worst, std::abs(e));
             }
             return within(worst, 1e-12);
         }},
        {"perturbed_equation", "fuchs_sum",
         [](std::mt19937_64& g) {
             double worst = 0;
             for (int i = 0; i < 20; ++i) {
                 auto e = characteristic_exponents(random_params(g));
                 Complex s = 0.0;
                 for (int k = 0; k < 3; ++k) s += e.rho_R[k] + e.rho_L[k] + e.rho_inf[k];
                 worst = std::max(worst, std::abs(s - 3.0));
             }
             return within(worst, 1e-12, "|sum - 3|");
         }},
        {"perturbed_equation", "coefficient_forms_agree",
         [](std::mt19937_64& g) {
             double worst = 0;
             for (int i = 0; i < 200; ++i) {
                 auto p = random_params(g);
                 Complex x(uniform(g, -2, 2), uniform(g, 0.05, 2));
                 auto a = coefficients_a(p, x), b = coefficients_a_exponent_form(p, x);
                 for (auto [u, v] : {std::pair{a.a1, b.a1}, {a.a2, b.a2}, {a.a3, b.a3}})
                     worst = std::max(worst, std::abs(u - v) / std::max(1.0, std::abs(u)));
             }
             return within(worst, 1e-12, "relative difference");
         }},
        {"perturbed_equation", "residues_vs_oracle",
         [](std::mt19937_64&) {
             double worst = 0;
             for (auto& p : log_resonant_samples()) {
                 auto d = residues(p);
                 for (auto [w, v] : {std::pair{ResidueWhich::L2, d.d_L2}, {ResidueWhich::R3, d.d_R3}}) {
                     Complex o = residue_numeric_oracle(p, w);
                     double scale = std::abs(v);
                     worst = std::max(worst, scale > 0 ? std::abs(o - v) / scale : std::abs(o));
                 }
             }
             return within(worst, 1e-8, "relative error");
         }},
        {"perturbed_equation", "logarithm_detector",
         [](std::mt19937_64&) {
             int bad = 0;
             for (auto& p : log_resonant_samples()) {
                 auto m = monodromy_matrices(p);
                 auto d = residues(p);
                 for (auto [M, dv] : {std::pair{m.M_L, d.d_L2}, {m.M_R, d.d_R3}}) {
                     Triple ev = {M(0, 0), M(1, 1), M(2, 2)};
                     if (probe_jordan(M, ev).non_semisimple != (dv != 0.0)) ++bad;
                 }
             }
             return PropertyOutcome{bad == 0, std::to_string(bad) + " mismatches"};
         }},
        {"perturbed_equation", "factorizations",
         [](std::mt19937_64&) {
             double worst = 0;
             for (auto& p : log_resonant_samples()) {
                 auto m = monodromy_matrices(p);
                 worst = std::max({worst, factorization_residual(p), infinity_relation_residual(p), m.commutator_L,
                                   m.commutator_R});
             }
             return within(worst, 1e-12);
         }},
        {"perturbed_equation", "sqrt_eps_symmetry",
         [](std::mt19937_64& g) {
             double worst = 0;
             for (int i = 0; i < 50; ++i) {
                 auto p = random_params(g);
                 double s = p.sqrt_eps();
                 Complex x(uniform(g, -2, 2), uniform(g, 0.05, 2));
                 auto a = coefficients_a_signed(p.nu(), s, x), b = coefficients_a_signed(p.nu(), -s, x);
                 worst = std::max({worst, std::abs(a.a1 - b.a1), std::abs(a.a2 - b.a2), std::abs(a.a3 - b.a3)});
                 auto e = exponent_data_signed(p.nu(), s), f = exponent_data_signed(p.nu(), -s);
                 for (int k = 0; k < 3; ++k)
                     worst = std::max({worst, std::abs(e.rho_R[k] - f.rho_L[k]), std::abs(e.rho_L[k] - f.rho_R[k])});
             }
             return within(worst, 1e-9);
         }},
    };
}

inline std::vector<Property> confluence_properties() {
    return {
        {"confluence", "diagonal_factors_constant",
         [](std::mt19937_64&) {
             double worst = 0;
             for (auto [nu, lo] : {std::pair{0.5, 1L}, {3.3, 1L}, {2.0, 1L}, {-1.0, 2L}})
                 for (auto& r : confluence_table(nu, lo, lo + 200, 1)) worst = std::max({worst, r.diagonal_err, r.mhat_err});
             return within(worst, 1e-12);
         }},
        {"confluence", "eventual_monotone_decrease",
         [](std::mt19937_64&) {
             bool ok = true;
             double worst_final = 0;
             for (double nu : {0.5, 3.3}) {
                 auto s = summarize(confluence_table(nu, 10, 1000, 1));
                 ok = ok && s.L.tail_monotone && s.R.tail_monotone;
                 worst_final = std::max({worst_final, s.L.final_value, s.R.final_value});
             }
             ok = ok && worst_final <= 1e-3;
             return PropertyOutcome{ok, "tail monotone " + std::string(ok ? "yes" : "no") + ", worst final " + fmt(worst_final)};
         }},
        {"confluence", "rate_exponent",
         [](std::mt19937_64&) {
             double worst = 0;
             std::string rates;
             for (double nu : {0.5, 3.3}) {
                 auto s = summarize(confluence_table(nu, 10, 1000, 1));
                 for (double r : {s.L.rate, s.R.rate}) {
                     worst = std::max(worst, std::abs(r + 1.0));
                     rates += " " + fmt(r);
                 }
             }
             return PropertyOutcome{worst <= 0.2, "fitted rates" + rates + " (target -1 +- 0.2)"};
         }},
    };
}

inline std::vector<Property> ode_oracle_properties() {
    return {
        {"ode_oracle", "loop_reversal",
         [](std::mt19937_64&) {
             double worst = 0;
             for (auto [nu, inv] : {std::pair{0.5, 2.5}, {2.0, 4.0}}) {
                 auto p = PerturbParams::from_inverse(nu, inv);
                 for (auto w : {LoopWhich::L, LoopWhich::R}) {
                     auto fwd = numerical_monodromy(p, w);
                     OracleOptions o;
                     o.reversed = true;
                     auto rev = numerical_monodromy(p, w, o);
                     Triple inv_ev;
                     for (int k = 0; k < 3; ++k) inv_ev[k] = 1.0 / fwd.eigenvalues_numeric[k];
                     worst = std::max(worst, multiset_distance(rev.eigenvalues_numeric, inv_ev));
                 }
             }
             return within(worst, 1e-6);
         }},
        {"ode_oracle", "base_point_independence",
         [](std::mt19937_64&) {
             double worst = 0;
             bool same_log = true;
             for (auto [nu, inv] : {std::pair{0.5, 4.5}, {2.0, 6.0}}) {
                 auto p = PerturbParams::from_inverse(nu, inv);
                 auto a = numerical_monodromy(p, LoopWhich::L);
                 OracleOptions o;
                 o.base_point = Complex(0.0, 0.5 * p.sqrt_eps());
                 auto b = numerical_monodromy(p, LoopWhich::L, o);
                 worst = std::max(worst, multiset_distance(a.eigenvalues_numeric, b.eigenvalues_numeric));
                 same_log = same_log && a.log_detected == b.log_detected;
             }
             return PropertyOutcome{worst <= 1e-6 && same_log, "eigenvalue difference " + fmt(worst)};
         }},
        {"ode_oracle", "radius_independence",
         [](std::mt19937_64&) {
             double worst = 0;
             bool same_log = true;
             for (double nu : {0.5, 3.0, 1.7}) {
                 auto a = unperturbed_monodromy(nu, 0.7), b = unperturbed_monodromy(nu, 1.3);
                 worst = std::max(worst, multiset_distance(a.eigenvalues_numeric, b.eigenvalues_numeric));
                 same_log = same_log && a.log_detected == b.log_detected;
             }
             return PropertyOutcome{worst <= 1e-6 && same_log, "eigenvalue difference " + fmt(worst)};
         }},
        {"ode_oracle", "determinant_liouville",
         [](std::mt19937_64&) {
             double worst = 0;
             for (auto [nu, inv] : {std::pair{0.5, 2.5}, {2.0, 4.0}, {-1.0, 3.0}}) {
                 auto p = PerturbParams::from_inverse(nu, inv);
                 for (auto w : {LoopWhich::L, LoopWhich::R}) worst = std::max(worst, numerical_monodromy(p, w).det_error);
             }
             worst = std::max(worst, unperturbed_monodromy(0.5, 1.0).det_error);
             return within(worst, 1e-6, "det error");
         }},
    };
}

inline std::vector<Property> cli_properties() {
    return {
        {"cli", "json_round_trip",
         [](std::mt19937_64& g) {
             bool ok = true;
             for (int i = 0; i < 500; ++i) {
                 Matrix3 m;
                 for (int r = 0; r < 3; ++r)
                     for (int c = 0; c < 3; ++c)
                         m(r, c) = Complex(uniform(g, -1, 1) * std::pow(10.0, uniform(g, -300, 300)), uniform(g, -1e3, 1e3));
                 Matrix3 back = matrix_from_json(json::parse(matrix_json(m).dump()));
                 ok = ok && max_abs_diff(m, back) == 0.0;
             }
             return PropertyOutcome{ok, ok ? "bit-exact" : "mismatch"};
         }},
    };
}

}  // namespace detail

inline std::vector<Property> all_properties() {
    std::vector<Property> all;
    for (auto group : {detail::complex_core_properties(), detail::formal_series_properties(),
                       detail::borel_laplace_properties(), detail::initial_equation_properties(),
                       detail::perturbed_equation_properties(), detail::confluence_properties(),
                       detail::ode_oracle_properties(), detail::cli_properties()})
        for (auto& p : group) all.push_back(std::move(p));
    return all;
}

// properties whose "module.name" contains filter; each gets its own generator derived from seed
inline std::vector<PropertyResult> run_checks(const std::string& filter, std::uint64_t seed, unsigned threads = 0) {
    std::vector<Property> chosen;
    for (auto& p : all_properties())
        if (filter.empty() || (p.module + "." + p.name).find(filter) != std::string::npos) chosen.push_back(p);
    std::vector<PropertyResult> out(chosen.size());
    parallel_for(
        chosen.size(),
        [&](std::size_t i) {
            std::seed_seq sq{seed, static_cast<std::uint64_t>(i)};
            std::mt19937_64 g(sq);
            auto t0 = std::chrono::steady_clock::now();
            PropertyOutcome o;
            try {
                o = chosen[i].run(g);
            } catch (const std::exception& e) {
                o = {false, std::string("threw: ") + e.what()};
            }
            double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            out[i] = {chosen[i].module, chosen[i].name, o.passed, o.detail, dt};
        },
        threads);
    return out;
}

}  // namespace stokes_unfold::cli
