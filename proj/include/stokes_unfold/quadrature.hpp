#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <queue>
#include <variant>
#include <vector>

#include "complex_core.hpp"

namespace stokes_unfold {

struct QuadResult {
    Complex value;
    double error;
    int panels;
};

namespace detail {

// Kronrod 15 / Gauss 7 nodes on [-1, 1]
inline constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    Complex value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(F& f, double a, double b) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    Complex fc = f(c);
    Complex k = wgk[7] * fc, g = wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        double dx = h * xgk[j];
        Complex s = f(c - dx) + f(c + dx);
        k += wgk[j] * s;
        if (j % 2 == 1) g += wg[j / 2] * s;
    }
    return {a, b, k * h, std::abs((k - g) * h)};
}

}  // namespace detail

// adaptive G7K15 on [a, b] for a complex-valued f of a real variable;
// bisects the worst panel until the summed estimate is below max(tol_abs, tol_rel |I|)
template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, double tol_abs, double tol_rel = 0.0,
                              int max_panels = 4000, int initial_panels = 1) {
    std::priority_queue<detail::Panel> heap;
    Complex total = 0.0;
    double err = 0.0;
    int n0 = std::max(1, initial_panels);
    for (int i = 0; i < n0; ++i) {
        double lo = a + (b - a) * i / n0, hi = a + (b - a) * (i + 1) / n0;
        auto p = detail::gk15(f, lo, hi);
        total += p.value;
        err += p.error;
        heap.push(p);
    }
    int panels = n0;
    while (err > std::max(tol_abs, tol_rel * std::abs(total))) {
        if (panels >= max_panels)
            throw Error(ErrorKind::Tolerance, "integrate_adaptive: panel budget exhausted");
        auto p = heap.top();
        heap.pop();
        double m = 0.5 * (p.a + p.b);
        auto l = detail::gk15(f, p.a, m);
        auto r = detail::gk15(f, m, p.b);
        total += l.value + r.value - p.value;
        err += l.error + r.error - p.error;
        heap.push(l);
        heap.push(r);
        ++panels;
        if (!is_finite(total)) throw Error(ErrorKind::Tolerance, "integrate_adaptive: non-finite integrand");
    }
    // recompute from the panels to shed accumulated rounding
    Complex sum = 0.0;
    double esum = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        esum += heap.top().error;
        heap.pop();
    }
    return {sum, esum, panels};
}

// Gauss-Jacobi rule on [-1, 1] for weight (1 - t)^alpha (1 + t)^beta
struct GaussRule {
    std::vector<double> nodes, weights;
};

inline GaussRule gauss_jacobi(int n, double alpha, double beta) {
    if (n < 1 || alpha <= -1.0 || beta <= -1.0) throw Error(ErrorKind::Domain, "gauss_jacobi: bad parameters");
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double alfbet = alpha + beta;
    double z = 0.0, z1, pp = 0.0, p1, p2, p3, temp, a, b, c;
    for (int i = 0; i < n; ++i) {
        // initial guesses as in the classic Numerical Recipes routine
        if (i == 0) {
            double an = alpha / n, bn = beta / n;
            double r1 = (1.0 + alpha) * (2.78 / (4.0 + n * n) + 0.768 * an / n);
            double r2 = 1.0 + 1.48 * an + 0.96 * bn + 0.452 * an * an + 0.83 * an * bn;
            z = 1.0 - r1 / r2;
        } else if (i == 1) {
            double r1 = (4.1 + alpha) / ((1.0 + alpha) * (1.0 + 0.156 * alpha));
            double r2 = 1.0 + 0.06 * (n - 8.0) * (1.0 + 0.12 * alpha) / n;
            double r3 = 1.0 + 0.012 * beta * (1.0 + 0.25 * std::abs(alpha)) / n;
            z -= (1.0 - z) * r1 * r2 * r3;
        } else if (i == 2) {
            double r1 = (1.67 + 0.28 * alpha) / (1.0 + 0.37 * alpha);
            double r2 = 1.0 + 0.22 * (n - 8.0) / n;
            double r3 = 1.0 + 8.0 * beta / ((6.28 + beta) * n * n);
            z -= (rule.nodes[0] - z) * r1 * r2 * r3;
        } else if (i == n - 2) {
            double r1 = (1.0 + 0.235 * beta) / (0.766 + 0.119 * beta);
            double r2 = 1.0 / (1.0 + 0.639 * (n - 4.0) / (1.0 + 0.71 * (n - 4.0)));
            double r3 = 1.0 / (1.0 + 20.0 * alpha / ((7.5 + alpha) * n * n));
            z += (z - rule.nodes[n - 4]) * r1 * r2 * r3;
        } else if (i == n - 1) {
            double r1 = (1.0 + 0.37 * beta) / (1.67 + 0.28 * beta);
            double r2 = 1.0 / (1.0 + 0.22 * (n - 8.0) / n);
            double r3 = 1.0 / (1.0 + 8.0 * alpha / ((6.28 + alpha) * n * n));
            z += (z - rule.nodes[n - 3]) * r1 * r2 * r3;
        } else {
            z = 3.0 * rule.nodes[i - 1] - 3.0 * rule.nodes[i - 2] + rule.nodes[i - 3];
        }
        // Jacobi P_n and its derivative at z; last call is at the converged node
        auto eval = [&] {
            temp = 2.0 + alfbet;
            p1 = (alpha - beta + temp * z) / 2.0;
            p2 = 1.0;
            for (int j = 2; j <= n; ++j) {
                p3 = p2;
                p2 = p1;
                temp = 2 * j + alfbet;
                a = 2 * j * (j + alfbet) * (temp - 2.0);
                b = (temp - 1.0) * (alpha * alpha - beta * beta + temp * (temp - 2.0) * z);
                c = 2.0 * (j - 1 + alpha) * (j - 1 + beta) * temp;
                p1 = (b * p2 - c * p3) / a;
            }
            pp = (n * (alpha - beta - temp * z) * p1 + 2.0 * (n + alpha) * (n + beta) * p2) /
                 (temp * (1.0 - z * z));
        };
        int its = 0;
        for (; its < 100; ++its) {
            eval();
            z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15) break;
        }
        if (its == 100) throw Error(ErrorKind::Tolerance, "gauss_jacobi: Newton did not converge");
        eval();
        rule.nodes[i] = z;
        rule.weights[i] = std::exp(std::lgamma(alpha + n) + std::lgamma(beta + n) - std::lgamma(n + 1.0) -
                                   std::lgamma(n + alfbet + 1.0)) *
                          temp * std::pow(2.0, alfbet) / (pp * p2);
    }
    return rule;
}

// integral over the segment a -> b of f(t) where f(t) ~ |t - a|^p g(t), g smooth near a.
// Gauss-Jacobi on the first stretch [a, a + w u], adaptive GK on the rest.
template <class F>
QuadResult integrate_endpoint_power(F&& f, Complex a, Complex b, double p, double tol, double w_hint = 0.0) {
    if (p <= -1.0) throw Error(ErrorKind::Divergent, "integrate_endpoint_power: endpoint exponent <= -1");
    double L = std::abs(b - a);
    if (L == 0.0) return {0.0, 0.0, 0};
    Complex u = (b - a) / L;
    auto on_segment = [&](double s) { return f(a + s * u) * u; };
    // smooth enough for plain GK
    if (p >= 8.0 || (p >= 0.0 && near_integer(p, 1e-12)))
        return integrate_adaptive(on_segment, 0.0, L, tol, 0.0, 4000, 4);
    double w = (w_hint > 0.0) ? std::min(w_hint, L) : L;
    for (int attempt = 0; attempt < 30; ++attempt) {
        auto g = [&](double s) { return f(a + s * u) * u / std::pow(s, p); };
        Complex head[2];
        const int orders[2] = {24, 48};
        for (int k = 0; k < 2; ++k) {
            auto rule = gauss_jacobi(orders[k], 0.0, p);
            Complex acc = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                double s = 0.5 * w * (1.0 + rule.nodes[i]);
                acc += rule.weights[i] * g(s);
            }
            head[k] = acc * std::pow(0.5 * w, p + 1.0);
        }
        double head_err = std::abs(head[1] - head[0]);
        if (head_err <= 0.25 * tol || head_err <= 1e-14 * std::abs(head[1])) {
            QuadResult tail{0.0, 0.0, 0};
            if (w < L) tail = integrate_adaptive(on_segment, w, L, 0.5 * tol, 0.0, 4000, 4);
            return {head[1] + tail.value, head_err + tail.error, tail.panels + 1};
        }
        w *= 0.5;
    }
    throw Error(ErrorKind::Tolerance, "integrate_endpoint_power: endpoint panel did not converge");
}

struct LineSegment {
    Complex start, end;
};
struct ArcSegment {
    Complex center;
    double radius, angle_start, angle_end;
};

class ContourPath {
public:
    using Segment = std::variant<LineSegment, ArcSegment>;

    ContourPath& line(Complex a, Complex b) {
        push(LineSegment{a, b});
        return *this;
    }
    ContourPath& arc(Complex c, double r, double t0, double t1) {
        push(ArcSegment{c, r, t0, t1});
        return *this;
    }

    const std::vector<Segment>& segments() const { return segs_; }

    static Complex point(const Segment& s, double frac) {
        if (auto* l = std::get_if<LineSegment>(&s)) return l->start + frac * (l->end - l->start);
        auto& a = std::get<ArcSegment>(s);
        double t = a.angle_start + frac * (a.angle_end - a.angle_start);
        return a.center + a.radius * Complex(std::cos(t), std::sin(t));
    }
    // d point / d frac
    static Complex tangent(const Segment& s, double frac) {
        if (auto* l = std::get_if<LineSegment>(&s)) return l->end - l->start;
        auto& a = std::get<ArcSegment>(s);
        double t = a.angle_start + frac * (a.angle_end - a.angle_start);
        return a.radius * (a.angle_end - a.angle_start) * Complex(-std::sin(t), std::cos(t));
    }
    static double length(const Segment& s) {
        if (auto* l = std::get_if<LineSegment>(&s)) return std::abs(l->end - l->start);
        auto& a = std::get<ArcSegment>(s);
        return a.radius * std::abs(a.angle_end - a.angle_start);
    }

    Complex start() const { return point(segs_.front(), 0.0); }
    Complex end() const { return point(segs_.back(), 1.0); }
    double length() const {
        double s = 0.0;
        for (auto& g : segs_) s += length(g);
        return s;
    }

    ContourPath reversed() const {
        ContourPath r;
        for (auto it = segs_.rbegin(); it != segs_.rend(); ++it) {
            if (auto* l = std::get_if<LineSegment>(&*it)) r.segs_.push_back(LineSegment{l->end, l->start});
            else {
                auto a = std::get<ArcSegment>(*it);
                r.segs_.push_back(ArcSegment{a.center, a.radius, a.angle_end, a.angle_start});
            }
        }
        return r;
    }

    ContourPath then(const ContourPath& o) const {
        ContourPath r = *this;
        for (auto& s : o.segs_) r.push(s);
        return r;
    }

    // minimum distance from the path to z (sampled densely on arcs)
    double distance_to(Complex z) const {
        double best = INFINITY;
        for (auto& s : segs_) {
            if (auto* l = std::get_if<LineSegment>(&s)) {
                Complex d = l->end - l->start;
                double t = std::norm(d) > 0 ? std::clamp(std::real((z - l->start) * std::conj(d)) / std::norm(d), 0.0, 1.0) : 0.0;
                best = std::min(best, std::abs(l->start + t * d - z));
            } else {
                for (int k = 0; k <= 512; ++k) best = std::min(best, std::abs(point(s, k / 512.0) - z));
            }
        }
        return best;
    }

private:
    void push(const Segment& s) {
        if (!segs_.empty() && std::abs(point(segs_.back(), 1.0) - point(s, 0.0)) > 1e-12)
            throw Error(ErrorKind::Shape, "ContourPath: segments do not share endpoints");
        segs_.push_back(s);
    }
    std::vector<Segment> segs_;
};

}  // namespace stokes_unfold
