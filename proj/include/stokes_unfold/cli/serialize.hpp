#pragma once

#include <cmath>
#include <cstdio>
#include <regex>
#include <string>
#include <vector>

#include <json.hpp>

#include "../complex_core.hpp"

namespace stokes_unfold::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* schema_version = "1.0";

// JSON has no Inf/NaN; those become null
inline json real_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json complex_json(Complex z) { return json{{"re", real_json(z.real())}, {"im", real_json(z.imag())}}; }

inline Complex complex_from_json(const json& j) { return {j.at("re").get<double>(), j.at("im").get<double>()}; }

inline json matrix_json(const Matrix3& m) {
    json rows = json::array();
    for (int i = 0; i < 3; ++i) {
        json row = json::array();
        for (int j = 0; j < 3; ++j) row.push_back(complex_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

inline Matrix3 matrix_from_json(const json& j) {
    Matrix3 m;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) m(i, k) = complex_from_json(j.at(i).at(k));
    return m;
}

template <class Seq>
json complex_list_json(const Seq& s) {
    json a = json::array();
    for (const auto& z : s) a.push_back(complex_json(z));
    return a;
}

inline json record(const std::string& command, json params, json payload) {
    json r;
    r["schema_version"] = schema_version;
    r["command"] = command;
    r["params"] = std::move(params);
    r["payload"] = std::move(payload);
    return r;
}

// "0.5", "-2", "1e-3", "1+2i", "1-2.5i", "3i", "-i"
inline Complex parse_complex(const std::string& text) {
    static const std::string num = R"(([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?))";
    static const std::regex real_only("^\\s*" + num + "\\s*$");
    static const std::regex imag_only(R"(^\s*([+-]?(?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?)\s*[ij]\s*$)");
    static const std::regex both("^\\s*" + num + R"(\s*([+-])\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*[ij]\s*$)");
    std::smatch m;
    auto coef = [](const std::string& s) {
        if (s.empty() || s == "+") return 1.0;
        if (s == "-") return -1.0;
        return std::stod(s);
    };
    if (std::regex_match(text, m, real_only)) return {std::stod(m[1]), 0.0};
    if (std::regex_match(text, m, imag_only)) return {0.0, coef(m[1])};
    if (std::regex_match(text, m, both)) {
        double im = m[3].matched ? std::stod(m[3]) : 1.0;
        return {std::stod(m[1]), m[2] == "-" ? -im : im};
    }
    throw Error(ErrorKind::Parse, "cannot parse complex number '" + text + "'");
}

// %.17g, the CSV number format
inline std::string g17(double v) {
    if (v == 0.0) v = 0.0;  // no "-0"
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace stokes_unfold::cli
