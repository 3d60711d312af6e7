#pragma once

#include <optional>
#include <vector>

#include "orthantloop/npoint.hpp"

namespace oloop {

enum class ShiftKind {
    all_masses_plus_tau,                   // Sigma + tau 11^T
    all_masses_minus_s,                    // Sigma - s 11^T
    single_diagonal_minus_s,               // Sigma_kk - s
    single_offdiagonal_invariant_plus_4s,  // k^2_{kk'} + 4s, i.e. Sigma_kk' - 2s
    column_augmented,                      // legs repeated, copies at the end
};

struct ShiftedSigma {
    RMat base;
    ShiftKind kind = ShiftKind::all_masses_plus_tau;
    cplx parameter{};             // tau, s, or delta for the augmented kind
    int leg = -1;                 // k
    int partner = -1;             // k'
    std::vector<int> multiplicity;  // column_augmented only

    CMat materialize() const;
};

// Augmented matrix: leg k appears multiplicity[k] times, copies appended in leg
// order. Entries between copies of one leg are Sigma_kk - delta / R_kk with
// R = Sigma^{-1}; needs Sigma positive definite and 0 < delta < 1.
RMat augment_sigma(const RMat& sigma, const std::vector<int>& multiplicity, double delta);

// How raised powers at n = nu are evaluated: contour shifts of one diagonal or
// one off-diagonal entry where they apply, or the repeated-leg assembly.
enum class PowerRoute { automatic, contour, duplicate };

// General dispatcher over the available routes; real PD Sigma.
IntegralValue evaluate_sigma(const RMat& sigma, const std::vector<int>& powers, double n,
                             const QuadratureSettings& s = {}, PowerRoute route = PowerRoute::automatic);
IntegralValue evaluate(const KinematicConfig& cfg, const QuadratureSettings& s = {});

// J(n) = 1/Gamma(a) int_0^inf dtau tau^{a-1} J(n_b; Sigma + tau 11^T), a = (n - n_b)/2.
// base_n defaults to nu.
IntegralValue raise_dimension(const KinematicConfig& cfg, const QuadratureSettings& s = {},
                              std::optional<double> base_n = {});
IntegralValue raise_dimension_sigma(const RMat& sigma, const std::vector<int>& powers, double n, double n_b,
                                    const QuadratureSettings& s = {}, PowerRoute route = PowerRoute::automatic);

// J(n) = (1/2 pi i) int ds Gamma(q+1)/s^{q+1} J(N; Sigma - s 11^T), q = (N - n)/2, unit powers.
IntegralValue lower_dimension(const KinematicConfig& cfg, const QuadratureSettings& s = {});
IntegralValue lower_dimension_sigma(const RMat& sigma, double n, const QuadratureSettings& s = {});

// Leg k carries power 1 + m, all others 1, n = N + m.
IntegralValue raise_power_single(const KinematicConfig& cfg, int k, const QuadratureSettings& s = {});
IntegralValue raise_power_single_sigma(const RMat& sigma, int k, int m, const QuadratureSettings& s = {});

// Legs k, k' both carry 1 + m, all others 1, n = N + 2m.
IntegralValue raise_power_pair(const KinematicConfig& cfg, int k, int k2, const QuadratureSettings& s = {});
IntegralValue raise_power_pair_sigma(const RMat& sigma, int k, int k2, int m, const QuadratureSettings& s = {});

// Repeated-leg route, n = nu, nu <= 7, extrapolated to coinciding copies.
IntegralValue raise_power_duplicate(const KinematicConfig& cfg, const QuadratureSettings& s = {});
IntegralValue raise_power_duplicate_sigma(const RMat& sigma, const std::vector<int>& powers,
                                          const QuadratureSettings& s = {});

struct EpsSeries {
    int d_base = 0;
    double k_shift = 0.0;
    std::vector<IntegralValue> coefficients;
    int order() const { return static_cast<int>(coefficients.size()) - 1; }
};

// Taylor coefficients of J(d - 2 eps) from log-moments of J(d - 2k; Sigma + tau 11^T).
// k defaults to (d - nu)/2, or (d - N + 1)/2 for unit powers when that is the
// only positive choice, and to 1/2 when neither is positive.
EpsSeries eps_expand(const KinematicConfig& cfg, const QuadratureSettings& s = {},
                     std::optional<double> k_shift = {});
EpsSeries eps_expand_sigma(const RMat& sigma, const std::vector<int>& powers, int d, double k, int order,
                           const QuadratureSettings& s = {}, PowerRoute route = PowerRoute::automatic);

struct RecurrenceResult {
    double residual = 0.0;
    IntegralValue lhs;
    IntegralValue rhs;
    bool skipped_indefinite = false;
};

// Last leg integrated out: J^N(n) against int dt t^{nu_N - 1}(1+t)^{nu-n} J^{N-1}(n - 2 nu_N; Sigma^eta(t)).
RecurrenceResult recurrence_check_lower(const KinematicConfig& cfg, const QuadratureSettings& s = {});
// Last two legs merged: J^N against int_0^1 dv v^{nu_a-1}(1-v)^{nu_b-1}/B J^{N-1}(n; Sigma-bar(v)).
RecurrenceResult recurrence_check_merge(const KinematicConfig& cfg, const QuadratureSettings& s = {});

// Sigma^eta(t) and Sigma-bar(v), exposed for tests.
RMat sigma_eta(const RMat& sigma, double t);
RMat sigma_merged(const RMat& sigma, double v);

struct PowerTerm {
    double coefficient = 0.0;
    std::vector<int> powers;
    double n = 0.0;
};

// J(nu - k; nu) = (-1)^k sum k! prod (nu_i)_{k_i} / prod k_i! J(nu + k; nu + k).
std::vector<PowerTerm> expand_power_excess(const KinematicConfig& cfg);

}  // namespace oloop
