#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>

#include "../stokes_unfold.hpp"
#include "check_suite.hpp"
#include "serialize.hpp"

namespace stokes_unfold::cli {

struct CommandOutput {
    int exit_code = 0;
    std::string text;
};

namespace detail {

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline CommandOutput error_output(const std::string& command, const json& params, ErrorKind kind,
                                  const std::string& message) {
    json payload;
    payload["error"] = {{"kind", to_string(kind)}, {"message", message}};
    return {exit_code(kind), dump(record(command, params, payload))};
}

// runs body, turning library errors into a JSON error record and the matching exit code
inline CommandOutput guarded(const std::string& command, const json& params, const std::function<CommandOutput()>& body) {
    try {
        return body();
    } catch (const Error& e) {
        return error_output(command, params, e.kind(), e.what());
    } catch (const nlohmann::json::exception& e) {
        return error_output(command, params, ErrorKind::Parse, e.what());
    }
}

inline json triple_json(const Triple& t) { return complex_list_json(t); }

inline json deltas_json(const Deltas& d) {
    return json{{"R21", complex_json(d.R21)}, {"R31", complex_json(d.R31)}, {"R32", complex_json(d.R32)},
                {"L21", complex_json(d.L21)}, {"L31", complex_json(d.L31)}, {"L32", complex_json(d.L32)}};
}

}  // namespace detail

struct PerturbChoice {
    std::optional<long> n;
    std::optional<double> inv_sqrt_eps;
};

// 1/sqrt eps either given directly or as nu + 2n on the resonant sequence
inline PerturbParams make_params(Complex nu, const PerturbChoice& c) {
    if (c.n && c.inv_sqrt_eps) throw Error(ErrorKind::Parse, "give either --n or --inv-sqrt-eps, not both");
    if (c.inv_sqrt_eps) return PerturbParams::from_inverse(nu, *c.inv_sqrt_eps);
    if (!c.n) throw Error(ErrorKind::Parse, "one of --n or --inv-sqrt-eps is required");
    if (std::abs(nu.imag()) > 0.0) throw Error(ErrorKind::Domain, "--n needs a real nu");
    return PerturbParams::from_inverse(nu, nu.real() + 2.0 * double(*c.n));
}

inline json choice_json(const PerturbChoice& c) {
    json j;
    if (c.n) j["n"] = *c.n;
    if (c.inv_sqrt_eps) j["inv_sqrt_eps"] = *c.inv_sqrt_eps;
    return j;
}

inline CommandOutput cmd_invariants(const std::string& nu_text) {
    json params{{"nu", nu_text}};
    return detail::guarded("invariants", params, [&] {
        Complex nu = parse_complex(nu_text);
        params["nu"] = complex_json(nu);
        auto fd = formal_data(nu, 0);
        json payload;
        payload["Lambda"] = matrix_json(fd.Lambda);
        payload["Q"] = matrix_json(fd.Q);
        payload["formal_monodromy"] = matrix_json(formal_monodromy(nu));
        payload["stokes_0"] = matrix_json(stokes_matrix(nu, StokesDirection::Zero));
        payload["stokes_pi"] = matrix_json(stokes_matrix(nu, StokesDirection::Pi));
        payload["monodromy_origin"] = matrix_json(monodromy_origin(nu));
        payload["singular_directions"] = singular_directions(nu);
        return CommandOutput{0, detail::dump(record("invariants", params, payload))};
    });
}

inline CommandOutput cmd_perturbed(const std::string& nu_text, const PerturbChoice& choice) {
    json params = choice_json(choice);
    params["nu"] = nu_text;
    return detail::guarded("perturbed", params, [&] {
        Complex nu = parse_complex(nu_text);
        params["nu"] = complex_json(nu);
        auto p = make_params(nu, choice);
        params["sqrt_eps"] = real_json(p.sqrt_eps());
        auto cls = classify_resonance(p);
        if (cls != ResonanceClass::B && cls != ResonanceClass::C)
            return detail::error_output("perturbed", params, ErrorKind::NotResonant,
                                        std::string("parameters are of class ") + to_string(cls) +
                                            "; closed forms exist for classes B and C only");
        auto e = characteristic_exponents(p);
        auto d = residues(p);
        auto m = monodromy_matrices(p);
        json payload;
        payload["class"] = to_string(cls);
        payload["exponents"] = {{"x_R", detail::triple_json(e.rho_R)},
                                {"x_L", detail::triple_json(e.rho_L)},
                                {"infinity", detail::triple_json(e.rho_inf)},
                                {"deltas", detail::deltas_json(e.deltas)}};
        payload["d"] = {{"R2", complex_json(d.d_R2)}, {"L2", complex_json(d.d_L2)},
                        {"R3", complex_json(d.d_R3)}, {"L3", complex_json(d.d_L3)}};
        payload["T_L"] = matrix_json(d.T_L);
        payload["T_R"] = matrix_json(d.T_R);
        payload["E_L"] = matrix_json(m.E_L);
        payload["E_R"] = matrix_json(m.E_R);
        payload["St_L"] = matrix_json(m.St_L);
        payload["St_R"] = matrix_json(m.St_R);
        payload["M_L"] = matrix_json(m.M_L);
        payload["M_R"] = matrix_json(m.M_R);
        payload["residuals"] = {{"infinity_relation", real_json(infinity_relation_residual(p))},
                                {"factorization", real_json(factorization_residual(p))},
                                {"commutator_L", real_json(m.commutator_L)},
                                {"commutator_R", real_json(m.commutator_R)}};
        return CommandOutput{0, detail::dump(record("perturbed", params, payload))};
    });
}

inline constexpr const char* confluence_csv_header =
    "n,sqrt_eps,d_L2_re,d_L2_im,d_R3_re,d_R3_im,err_L2,err_R3,stokes_err_L,stokes_err_R";

inline std::string confluence_csv(const std::vector<ConfluenceRow>& rows) {
    std::string out = std::string(confluence_csv_header) + "\n";
    for (auto& r : rows) {
        out += std::to_string(r.n);
        for (double v : {r.sqrt_eps, r.d_L2.real(), r.d_L2.imag(), r.d_R3.real(), r.d_R3.imag(), r.err_L2, r.err_R3,
                         r.stokes_err_L, r.stokes_err_R})
            out += "," + g17(v);
        out += "\n";
    }
    return out;
}

inline json summary_json(const ConvergenceSummary& s) {
    auto col = [](const ColumnSummary& c) {
        return json{{"tail_monotone", c.tail_monotone}, {"final", real_json(c.final_value)}, {"rate", real_json(c.rate)}};
    };
    return json{{"stokes_err_L", col(s.L)}, {"stokes_err_R", col(s.R)}};
}

inline std::string gnuplot_script(const std::string& csv_path) {
    std::ostringstream s;
    s << "set datafile separator ','\n"
      << "set logscale xy\n"
      << "set xlabel 'n'\n"
      << "set ylabel 'max entry error'\n"
      << "set key top right\n"
      << "plot '" << csv_path << "' using 1:9 skip 1 with linespoints title 'St_L - St_pi', \\\n"
      << "     '" << csv_path << "' using 1:10 skip 1 with linespoints title 'St_R - St_0'\n";
    return s.str();
}

struct ConfluenceArgs {
    std::string nu;
    long n_min = 1;
    long n_max = 1000;
    std::string format = "json";
    std::string gnuplot;  // script path; empty means none
    std::string output;   // CSV path used with gnuplot
    unsigned threads = 0;
};

inline CommandOutput cmd_confluence(const ConfluenceArgs& a) {
    json params{{"nu", a.nu}, {"n_min", a.n_min}, {"n_max", a.n_max}, {"format", a.format}};
    return detail::guarded("confluence", params, [&] {
        if (a.format != "json" && a.format != "csv") throw Error(ErrorKind::Parse, "--format must be json or csv");
        Complex nu_c = parse_complex(a.nu);
        if (nu_c.imag() != 0.0) throw Error(ErrorKind::Domain, "confluence needs a real nu");
        double nu = nu_c.real();
        params["nu"] = nu;
        auto rows = confluence_table(nu, a.n_min, a.n_max, a.threads);
        std::string csv = confluence_csv(rows);
        if (!a.gnuplot.empty()) {
            std::filesystem::path script(a.gnuplot);
            std::filesystem::path csv_path = a.output.empty() ? std::filesystem::path(script).replace_extension(".csv")
                                                              : std::filesystem::path(a.output);
            std::ofstream(csv_path, std::ios::binary) << csv;
            std::ofstream(script, std::ios::binary) << gnuplot_script(csv_path.string());
            if (!std::filesystem::exists(script) || !std::filesystem::exists(csv_path))
                throw Error(ErrorKind::Domain, "cannot write plot files");
        }
        if (a.format == "csv") return CommandOutput{0, csv};
        json table = json::array();
        for (auto& r : rows)
            table.push_back({{"n", r.n},
                             {"sqrt_eps", real_json(r.sqrt_eps)},
                             {"d_L2", complex_json(r.d_L2)},
                             {"d_R3", complex_json(r.d_R3)},
                             {"err_L2", real_json(r.err_L2)},
                             {"err_R3", real_json(r.err_R3)},
                             {"stokes_err_L", real_json(r.stokes_err_L)},
                             {"stokes_err_R", real_json(r.stokes_err_R)},
                             {"diagonal_err", real_json(r.diagonal_err)},
                             {"mhat_err", real_json(r.mhat_err)}});
        auto lim = limit_targets(nu);
        json payload;
        payload["limits"] = {{"d_L2", complex_json(lim.d_L2)}, {"d_R3", complex_json(lim.d_R3)}};
        payload["rows"] = std::move(table);
        payload["summary"] = summary_json(summarize(rows));
        return CommandOutput{0, detail::dump(record("confluence", params, payload))};
    });
}

struct OracleArgs {
    std::string nu;
    PerturbChoice choice;
    std::string which = "R";
    double tol = default_oracle_tol;
    double radius = 1.0;
    bool allow_stiff = false;
    double invariant_tol = 1e-6;
};

inline json report_json(const MonodromyReport& r) {
    return json{{"M_numeric", matrix_json(r.M_numeric)},
                {"eigenvalues_numeric", detail::triple_json(r.eigenvalues_numeric)},
                {"eigenvalues_closed", detail::triple_json(r.eigenvalues_closed)},
                {"eigenvalue_error", real_json(r.eigenvalue_error)},
                {"det_error", real_json(r.det_error)},
                {"max_invariant_error", real_json(r.max_invariant_error)},
                {"log_detected", r.log_detected},
                {"log_expected", r.log_expected},
                {"d_magnitude", real_json(r.d_magnitude)},
                {"min_sigma", real_json(r.min_sigma)},
                {"conditioning_warning", r.conditioning_warning},
                {"steps", r.steps}};
}

inline CommandOutput cmd_oracle(const OracleArgs& a) {
    json params = choice_json(a.choice);
    params["nu"] = a.nu;
    params["which"] = a.which;
    params["tol"] = a.tol;
    params["invariant_tol"] = a.invariant_tol;
    params["allow_stiff"] = a.allow_stiff;
    return detail::guarded("oracle", params, [&] {
        Complex nu = parse_complex(a.nu);
        params["nu"] = complex_json(nu);
        MonodromyReport rep;
        if (a.which == "origin") {
            params["radius"] = a.radius;
            rep = unperturbed_monodromy(nu, a.radius, a.tol);
        } else if (a.which == "L" || a.which == "R") {
            auto p = make_params(nu, a.choice);
            params["sqrt_eps"] = real_json(p.sqrt_eps());
            OracleOptions o;
            o.tol = a.tol;
            o.allow_stiff = a.allow_stiff;
            rep = numerical_monodromy(p, a.which == "L" ? LoopWhich::L : LoopWhich::R, o);
        } else {
            throw Error(ErrorKind::Parse, "--which must be L, R or origin");
        }
        bool ok = rep.max_invariant_error <= a.invariant_tol && rep.log_detected == rep.log_expected;
        json payload = report_json(rep);
        payload["passed"] = ok;
        return CommandOutput{ok ? 0 : exit_code(ErrorKind::Tolerance), detail::dump(record("oracle", params, payload))};
    });
}

inline CommandOutput cmd_check(const std::string& filter, std::uint64_t seed, unsigned threads = 0) {
    json params{{"filter", filter}, {"seed", seed}};
    return detail::guarded("check", params, [&] {
        auto results = run_checks(filter, seed, threads);
        bool all = !results.empty();
        json list = json::array();
        for (auto& r : results) {
            all = all && r.passed;
            list.push_back({{"module", r.module},
                            {"property", r.name},
                            {"passed", r.passed},
                            {"detail", r.detail},
                            {"seconds", r.seconds}});
        }
        json payload{{"all_passed", all}, {"results", std::move(list)}};
        return CommandOutput{all ? 0 : exit_code(ErrorKind::Tolerance), detail::dump(record("check", params, payload))};
    });
}

}  // namespace stokes_unfold::cli
