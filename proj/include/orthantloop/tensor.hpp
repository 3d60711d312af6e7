#pragma once

#include <array>
#include <optional>
#include <vector>

#include "orthantloop/dimshift.hpp"
#include "orthantloop/oracle.hpp"

namespace oloop {

inline constexpr Vec4 kMinkowski{1.0, -1.0, -1.0, -1.0};
inline constexpr Vec4 kEuclidean{1.0, 1.0, 1.0, 1.0};

// Rank-2 five-point reduction in n = 4 - 2 eps, unit powers:
//   J_{mu nu} = g_{mu nu} G + sum_k p_k p_k D_k + sum_{k<k'} (p_k p_k' + p_k' p_k) O_kk'
// with G = -1/2 J(6 - 2eps), D_k = 2 J(8 - 2eps; 1 + 2 delta_k),
// O_kk' = J(8 - 2eps; 1 + delta_k + delta_k'). The weights are already folded in.
struct TensorReduction5 {
    EpsSeries g_coefficient;
    std::array<EpsSeries, 5> diag_coefficients;
    std::array<std::array<EpsSeries, 5>, 5> offdiag_coefficients;  // symmetric, diagonal slots empty
    std::optional<std::vector<Vec4>> momenta;
    Vec4 metric = kMinkowski;
};

struct TensorOptions {
    int order = 2;
    std::optional<std::vector<Vec4>> momenta;
    Vec4 metric = kMinkowski;
    PowerRoute route = PowerRoute::automatic;
};

// Checks k^2_{jl} = (p_j - p_l)^2 under the metric within 1e-10 (relative to
// max(1, |k^2|)); throws InconsistentMomenta.
void check_momenta(const KinematicConfig& cfg, const std::vector<Vec4>& momenta, const Vec4& metric);

// Config whose invariants are generated by the momenta.
KinematicConfig config_from_momenta(const std::vector<double>& masses, const std::vector<Vec4>& momenta,
                                    const Vec4& metric, double n);

TensorReduction5 reduce_rank2_5pt(const KinematicConfig& cfg, const TensorOptions& opt = {},
                                  const QuadratureSettings& s = {});

// One family on its own (k == k2 for the diagonal ones), weight included.
EpsSeries tensor_family(const RMat& sigma, int k, int k2, int order, const QuadratureSettings& s = {},
                        PowerRoute route = PowerRoute::automatic);

// Coefficient of eps^K of J_{mu nu}; index [mu][nu], metric from the reduction.
std::array<std::array<cplx, 4>, 4> assemble_rank2(const TensorReduction5& red, int K);

}  // namespace oloop
