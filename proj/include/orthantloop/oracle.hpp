#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "orthantloop/kinematics.hpp"
#include "orthantloop/quadrature.hpp"

namespace oloop {

struct MCSettings {
    long samples = 10'000'000;
    std::uint64_t seed = 0x5eed5eedULL;
    int batch = 1 << 16;
};

// Throws OutOfRange below 1e4 samples or for a non-positive batch.
void validate(const MCSettings& mc);

// Straight from the Feynman-parameter definition. N <= 3 by nested quadrature
// (method quadrature), N >= 4 by Dirichlet(nu) sampling of the simplex
// (method monte_carlo, abs_error is one standard error).
IntegralValue feynman_oracle(const KinematicConfig& cfg, const MCSettings& mc = {},
                             const QuadratureSettings& s = {});
IntegralValue feynman_oracle_sigma(const RMat& sigma, const std::vector<int>& powers, double n,
                                   const MCSettings& mc = {}, const QuadratureSettings& s = {});

struct OrthantEstimate {
    double probability = 0.0;
    double std_error = 0.0;
};

// P(x > 0 componentwise) for x ~ N(0, cov); cov is normalized first.
OrthantEstimate orthant_mc(const RMat& cov, const MCSettings& mc = {});

struct MomentEstimate {
    IntegralValue value;
    bool infinite_variance = false;
};

// E[prod eps_i^{nu_i-1} 1{eps > 0} (sum eps)^{nu-n}], eps ~ N(0, Sigma^{-1}),
// rescaled to J.
MomentEstimate truncated_moment_mc(const KinematicConfig& cfg, const MCSettings& mc = {});
MomentEstimate truncated_moment_mc_sigma(const RMat& sigma, const std::vector<int>& powers, double n,
                                         const MCSettings& mc = {});

// Gaussian average of the one-dimensional integral representation of the
// hypergeometric form; needs nu < n < 2 nu.
IntegralValue lauricella_expectation_mc(const KinematicConfig& cfg, const MCSettings& mc = {});
IntegralValue lauricella_expectation_mc_sigma(const RMat& sigma, const std::vector<int>& powers, double n,
                                              const MCSettings& mc = {});

using Vec4 = std::array<double, 4>;

struct TensorEstimate {
    std::array<std::array<double, 4>, 4> value{};
    std::array<std::array<double, 4>, 4> std_error{};
};

// J_{mu nu} with numerator q_mu q_nu, unit powers, by Dirichlet sampling:
// (-1)^nu/Gamma(nu) E[-1/2 g Gamma(nu-1-n/2) Q^{n/2+1-nu} + Gamma(nu-n/2) P P Q^{n/2-nu}],
// P = sum u_k p_k, g = diag(metric).
TensorEstimate tensor_mc(const RMat& sigma, const std::vector<Vec4>& momenta, const Vec4& metric, double n,
                         const MCSettings& mc = {});

}  // namespace oloop
