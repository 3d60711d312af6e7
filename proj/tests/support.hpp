#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "orthantloop/kinematics.hpp"

namespace testing_support {

using namespace oloop;

inline double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Random correlation matrix, off-diagonals shrunk by `strength` so the
// conditioning stays sane for the orthant expansions.
inline RMat random_correlation(int n, std::mt19937_64& rng, double strength = 0.6) {
    std::normal_distribution<double> g;
    RMat a(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = g(rng);
    RMat c(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += a(i, k) * a(j, k);
            c(i, j) = s;
        }
    for (int i = 0; i < n; ++i) c(i, i) += n;  // keeps it well away from singular
    RMat r = normalize(c);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) r(i, j) *= strength;
    return r;
}

inline RMat random_sigma(int n, std::mt19937_64& rng, double strength = 0.6) {
    std::uniform_real_distribution<double> mass(0.8, 1.3);
    RMat r = random_correlation(n, rng, strength);
    std::vector<double> m(n);
    for (auto& x : m) x = mass(rng);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r(i, j) *= m[i] * m[j];
    return r;
}

inline KinematicConfig random_config(int n, double dim, std::mt19937_64& rng, double strength = 0.6) {
    return config_from_sigma(random_sigma(n, rng, strength), dim);
}

inline RMat equicorrelated(int n, double rho) {
    RMat r(n, rho);
    for (int i = 0; i < n; ++i) r(i, i) = 1.0;
    return r;
}

}  // namespace testing_support
