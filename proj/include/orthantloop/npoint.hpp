#pragma once

#include "orthantloop/gaussint.hpp"
#include "orthantloop/kinematics.hpp"

namespace oloop {

// Explicit integer-dimension evaluators, unit propagator powers.
// Each checks N, n and the powers of the config before doing anything.
IntegralValue j2_2d(const KinematicConfig& cfg);
IntegralValue j3_3d(const KinematicConfig& cfg);
IntegralValue j3_2d(const KinematicConfig& cfg, const QuadratureSettings& s = {});
IntegralValue j4_4d(const KinematicConfig& cfg, const QuadratureSettings& s = {});
IntegralValue j5_5d(const KinematicConfig& cfg, const QuadratureSettings& s = {});
IntegralValue j6_6d(const KinematicConfig& cfg, const QuadratureSettings& s = {});
IntegralValue j7_7d(const KinematicConfig& cfg, const QuadratureSettings& s = {});
IntegralValue j5_4d(const KinematicConfig& cfg, const QuadratureSettings& s = {});

// Matrix-level cores, also used with complex shifted Sigma by the contour routes.
// n = N:   J = (-1)^N 2 pi^{N/2} / sqrt(det Sigma) * P_N(R)
// n = N-1: J = (-1)^N (2 pi)^{N/2} / (sqrt(det Sigma) 2^{(N-1)/2})
//              * sum_j w_j / sqrt(2 pi R_jj) * P_{N-1}(R | j),  w_j = sum_k R_kj
template <class T>
Est<cplx> j_unit_n(const Matrix<T>& sigma, const QuadratureSettings& s = {});
template <class T>
Est<cplx> j_unit_nm1(const Matrix<T>& sigma, const QuadratureSettings& s = {});

// Same cores fed with R = Sigma^{-1} and sqrt(det Sigma) directly, for callers
// that know them in closed form (rank-one updates along the tau line).
template <class T>
Est<cplx> j_unit_n_inv(const Matrix<T>& r, cplx sqrt_det_sigma, const QuadratureSettings& s = {});
template <class T>
Est<cplx> j_unit_nm1_inv(const Matrix<T>& r, cplx sqrt_det_sigma, const QuadratureSettings& s = {});

// Solid-angle form for N = 3, n = 3 on a raw matrix.
double j3_3d_sigma(const RMat& sigma);

// Closed 2x2 form tau / (m1 m2 sin tau) on a raw matrix, any real off-diagonal.
cplx j2_2d_sigma(const RMat& sigma);

// Real PD Sigma, unit powers, n in {N, N-1}: picks closed forms where they exist.
IntegralValue j_unit_integer(const RMat& sigma, int n, const QuadratureSettings& s = {});

}  // namespace oloop
