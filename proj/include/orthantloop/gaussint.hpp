#pragma once

#include "orthantloop/matrixops.hpp"
#include "orthantloop/quadrature.hpp"

namespace oloop {

template <class T>
struct Est {
    T value{};
    double error = 0.0;
};

// Gaussian-kernel integrals over the normalized correlation matrix. Every
// routine accepts unnormalized covariances as well and normalizes internally.

// sqrt(2 pi / r_jj)
double i_single(double r_jj);

// -2 pi arcsin(rho)
double i_pair(double rho_ij);

double partial_correlation(const RMat& rho3, int i, int j, int k);

// -(2 pi)^{3/2} arcsin(partial correlation of (i, j) given k); the single-leg
// weight sqrt(2 pi / R_kk) is reapplied by the caller (it is sqrt(2 pi) here).
double i_pair_conditional(const RMat& rho3, int i, int j, int k);

// Label whose largest |rho_ar| is smallest, so no anchor weight
// 1/sqrt(1 - u^2 rho_ar^2) comes near its singularity.
template <class T>
int default_anchor(const Matrix<T>& cov);

// Even-order orthant term T_S of a covariance block:
// T_{} = 1, T_{ij} = (2/pi) arcsin rho_ij and, for four or more labels,
// T_S = sum_{r != a} int_0^1 du (2/pi) rho_ar / sqrt(1 - u^2 rho_ar^2) T_{S\{a,r}}(rho~(u)).
template <class T>
Est<T> orthant_term(const Matrix<T>& cov, const QuadratureSettings& s = {}, int anchor = -1);

// (1/pi^4) I_ijkl, three one-dimensional arcsine integrals.
double i_quad(const RMat& rho4, int anchor = -1, const QuadratureSettings& s = {});
cplx i_quad(const CMat& rho4, int anchor = -1, const QuadratureSettings& s = {});

// Conditional quadratic-form matrix over the four labels left after fixing
// the anchor (scaled by u) and its partner; not unit-diagonal.
RMat rho_tilde(const RMat& rho6, int anchor, int partner, double u);

// (1/pi^6) I_ijklmn, fifteen double integrals.
double i_hex(const RMat& rho6, int anchor = -1, const QuadratureSettings& s = {});
cplx i_hex(const CMat& rho6, int anchor = -1, const QuadratureSettings& s = {});

// Pieces of 2^N P(eps > 0) for eps ~ N(0, cov):
// 1 + pair_sum + quad_sum - hex_sum with pair_sum = (2/pi) sum arcsin rho,
// quad_sum = sum over 4-subsets of i_quad and hex_sum = sum over 6-subsets of i_hex.
template <class T>
struct OrthantBreakdown {
    T pair_sum{};
    T quad_sum{};
    T hex_sum{};
    double error = 0.0;
    T bracket() const { return T(1) + pair_sum + quad_sum - hex_sum; }
};

template <class T>
OrthantBreakdown<T> orthant_breakdown(const Matrix<T>& cov, const QuadratureSettings& s = {});

template <class T>
Est<T> orthant_probability(const Matrix<T>& cov, const QuadratureSettings& s = {});

}  // namespace oloop
