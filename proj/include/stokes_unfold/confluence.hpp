#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "initial_equation.hpp"
#include "parallel.hpp"
#include "perturbed_equation.hpp"

namespace stokes_unfold {

struct SequencePoint {
    long n;
    PerturbParams params;
};

// 1/sqrt eps = nu + 2n for n in [n_min, n_max]
inline std::vector<SequencePoint> resonant_sequence(double nu, long n_min, long n_max) {
    if (n_min > n_max) throw Error(ErrorKind::EmptyRange, "resonant_sequence: n_min > n_max");
    if (n_min < 0) throw Error(ErrorKind::Domain, "resonant_sequence: n_min < 0");
    if (!(nu + 2.0 * n_min > 1.0)) throw Error(ErrorKind::Domain, "resonant_sequence: need nu + 2 n_min > 1");
    if (near_integer(nu, 1e-12) && nu + n_min < 1.0)
        throw Error(ErrorKind::Domain, "resonant_sequence: integer nu needs nu + n_min >= 1");
    std::vector<SequencePoint> out;
    out.reserve(n_max - n_min + 1);
    for (long n = n_min; n <= n_max; ++n) out.push_back({n, PerturbParams::from_inverse(nu, nu + 2.0 * n)});
    return out;
}

struct LimitTargets {
    Complex d_L2, d_R3;
};

inline LimitTargets limit_targets(Complex nu) {
    Complex rg = reciprocal_gamma(nu);
    return {-exp_i_pi(-nu) * rg, -0.5 * rg};
}

// Gamma(z + alpha) / (Gamma(z) z^alpha)
inline Complex gamma_ratio_probe(double z, Complex alpha) {
    if (!(z > std::abs(alpha) + 1.0)) throw Error(ErrorKind::Domain, "gamma_ratio_probe: need z > |alpha| + 1");
    if (alpha == 0.0) return 1.0;
    return std::exp(log_gamma(z + alpha) - log_gamma(Complex(z)) - alpha * std::log(z));
}

struct ConfluenceRow {
    long n;
    double sqrt_eps;
    Complex d_L2, d_R3;
    double err_L2, err_R3;
    double stokes_err_L, stokes_err_R;
    double diagonal_err;  // distance of e^{pi i(Lambda + Q/x_j)} from their constant values
    double mhat_err;      // |E_L E_R - Mhat|
};

inline ConfluenceRow confluence_row(const SequencePoint& sp) {
    const auto& p = sp.params;
    Complex nu = p.nu();
    auto d = residues(p);
    auto lim = limit_targets(nu);
    auto m = monodromy_matrices(p);
    Matrix3 st_pi = stokes_matrix(nu, StokesDirection::Pi);
    Matrix3 st_0 = stokes_matrix(nu, StokesDirection::Zero);
    Matrix3 EL = exp_i_pi_diagonal(-nu, -nu, nu);
    Matrix3 ER = exp_i_pi_diagonal(nu, 3.0 * nu, nu);
    ConfluenceRow r;
    r.n = sp.n;
    r.sqrt_eps = p.sqrt_eps();
    r.d_L2 = d.d_L2;
    r.d_R3 = d.d_R3;
    r.err_L2 = std::abs(d.d_L2 - lim.d_L2);
    r.err_R3 = std::abs(d.d_R3 - lim.d_R3);
    r.stokes_err_L = max_abs_diff(m.St_L, st_pi);
    r.stokes_err_R = max_abs_diff(m.St_R, st_0);
    r.diagonal_err = std::max(max_abs_diff(m.E_L, EL), max_abs_diff(m.E_R, ER));
    r.mhat_err = max_abs_diff(m.E_L * m.E_R, formal_monodromy(nu));
    return r;
}

inline std::vector<ConfluenceRow> confluence_table(double nu, long n_min, long n_max, unsigned threads = 0) {
    auto seq = resonant_sequence(nu, n_min, n_max);
    std::vector<ConfluenceRow> rows(seq.size());
    parallel_for(seq.size(), [&](std::size_t i) { rows[i] = confluence_row(seq[i]); }, threads);
    return rows;
}

// least-squares slope of log err against log n over rows with n in [n_lo, n_hi]
inline double fit_rate(const std::vector<std::pair<double, double>>& n_err, double n_lo, double n_hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (auto [n, e] : n_err) {
        if (n < n_lo || n > n_hi || !(e > 0.0)) continue;
        double x = std::log(n), y = std::log(e);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++k;
    }
    if (k < 2) return NAN;
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

struct ColumnSummary {
    bool tail_monotone;  // non-increasing over the last decade of n
    double final_value;
    double rate;         // fitted exponent over the last decade
};

struct ConvergenceSummary {
    ColumnSummary L, R;
};

inline ConvergenceSummary summarize(const std::vector<ConfluenceRow>& rows) {
    ConvergenceSummary s{};
    if (rows.empty()) return s;
    double n_hi = double(rows.back().n), n_lo = n_hi / 10.0;
    auto column = [&](auto get) {
        ColumnSummary c{true, get(rows.back()), NAN};
        std::vector<std::pair<double, double>> pts;
        double prev = INFINITY;
        for (auto& r : rows) {
            pts.push_back({double(r.n), get(r)});
            if (r.n < n_lo) continue;
            if (get(r) > prev) c.tail_monotone = false;
            prev = get(r);
        }
        c.rate = fit_rate(pts, n_lo, n_hi);
        return c;
    };
    s.L = column([](const ConfluenceRow& r) { return r.stokes_err_L; });
    s.R = column([](const ConfluenceRow& r) { return r.stokes_err_R; });
    return s;
}

}  // namespace stokes_unfold
