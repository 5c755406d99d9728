#pragma once

#include <algorithm>
#include <array>
#include <vector>

#include <Eigen/Dense>

#include "complex_core.hpp"

namespace stokes_unfold {

using Triple = std::array<Complex, 3>;

inline Eigen::Matrix3cd to_eigen(const Matrix3& m) {
    Eigen::Matrix3cd e;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) e(i, j) = m(i, j);
    return e;
}

inline Triple eigenvalues(const Matrix3& m) {
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(to_eigen(m), false);
    return {es.eigenvalues()[0], es.eigenvalues()[1], es.eigenvalues()[2]};
}

inline constexpr double cluster_radius = 1e-4;

// groups eigenvalues closer than `radius`; labels[i] is the cluster id
inline std::array<int, 3> cluster_labels(const Triple& ev, double radius = cluster_radius) {
    std::array<int, 3> lab = {0, 1, 2};
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (std::abs(ev[i] - ev[j]) < radius) {
                int from = lab[j], to = lab[i];
                for (auto& l : lab)
                    if (l == from) l = to;
            }
    return lab;
}

// every eigenvalue replaced by the mean of its cluster
inline Triple refine_clusters(const Triple& ev, double radius = cluster_radius) {
    auto lab = cluster_labels(ev, radius);
    Triple out;
    for (int i = 0; i < 3; ++i) {
        Complex s = 0.0;
        int c = 0;
        for (int j = 0; j < 3; ++j)
            if (lab[j] == lab[i]) {
                s += ev[j];
                ++c;
            }
        out[i] = s / double(c);
    }
    return out;
}

// largest spread inside a cluster
inline double cluster_spread(const Triple& ev, double radius = cluster_radius) {
    auto lab = cluster_labels(ev, radius);
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (lab[i] == lab[j]) s = std::max(s, std::abs(ev[i] - ev[j]));
    return s;
}

// min over the 6 assignments of the max pairwise distance
inline double multiset_distance(const Triple& a, const Triple& b) {
    std::array<int, 3> perm = {0, 1, 2};
    double best = INFINITY;
    do {
        double worst = 0.0;
        for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(a[i] - b[perm[i]]));
        best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

inline std::array<double, 3> singular_values(const Matrix3& m) {
    Eigen::JacobiSVD<Eigen::Matrix3cd> svd(to_eigen(m));
    auto s = svd.singularValues();
    return {s[0], s[1], s[2]};
}

struct JordanProbe {
    bool non_semisimple = false;
    double min_sigma = INFINITY;  // smallest singular value of M - lambda I over repeated eigenvalues
    int repeated = 0;             // size of the largest cluster
};

// a repeated eigenvalue whose eigenspace is smaller than its multiplicity
inline JordanProbe probe_jordan(const Matrix3& M, const Triple& ev, double rel_threshold = 1e-4) {
    JordanProbe out;
    auto lab = cluster_labels(ev);
    double thresh = rel_threshold * std::max(1.0, M.max_abs());
    std::vector<int> seen;
    for (int i = 0; i < 3; ++i) {
        if (std::find(seen.begin(), seen.end(), lab[i]) != seen.end()) continue;
        seen.push_back(lab[i]);
        int mult = 0;
        Complex mean = 0.0;
        for (int j = 0; j < 3; ++j)
            if (lab[j] == lab[i]) {
                ++mult;
                mean += ev[j];
            }
        mean /= double(mult);
        out.repeated = std::max(out.repeated, mult);
        if (mult < 2) continue;
        auto sv = singular_values(M - mean * Matrix3::identity());
        int geometric = 0;
        for (double s : sv)
            if (s < thresh) ++geometric;
        out.min_sigma = std::min(out.min_sigma, sv[2]);
        if (geometric < mult) out.non_semisimple = true;
    }
    return out;
}

}  // namespace stokes_unfold
