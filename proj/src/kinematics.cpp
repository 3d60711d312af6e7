#include "orthantloop/kinematics.hpp"

#include <cmath>
#include <numeric>
#include <utility>

namespace oloop {

int KinematicConfig::nu_total() const { return std::accumulate(powers.begin(), powers.end(), 0); }

void validate(const KinematicConfig& cfg) {
    const int n = cfg.n_legs();
    if (n < 1 || n > kMaxDim) throw Error(ErrorKind::ValidationError, "number of legs must be between 1 and 9");
    for (int i = 0; i < n; ++i)
        if (!(cfg.masses[i] > 0.0))
            throw Error(ErrorKind::NonPositiveMass, "mass_" + std::to_string(i + 1) + " must be positive");
    if (cfg.invariants.size() != n) throw Error(ErrorKind::ValidationError, "invariants matrix has wrong size");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            if (cfg.invariants(i, j) != cfg.invariants(j, i))
                throw Error(ErrorKind::ValidationError, "invariants are not symmetric at k2_" + std::to_string(j + 1) +
                                                            "_" + std::to_string(i + 1));
    if (static_cast<int>(cfg.powers.size()) != n)
        throw Error(ErrorKind::ValidationError, "powers must list one entry per leg");
    for (int i = 0; i < n; ++i)
        if (cfg.powers[i] < 1) throw Error(ErrorKind::ValidationError, "nu_" + std::to_string(i + 1) + " must be >= 1");
    if (!std::isfinite(cfg.dimension.n)) throw Error(ErrorKind::ValidationError, "dimension must be finite");
}

KinematicConfig make_config(const std::vector<double>& masses, const RMat& invariants, double n,
                            std::vector<int> powers) {
    KinematicConfig cfg;
    cfg.masses = masses;
    cfg.invariants = invariants;
    for (int i = 0; i < invariants.size(); ++i) cfg.invariants(i, i) = 0.0;
    cfg.powers = powers.empty() ? std::vector<int>(masses.size(), 1) : std::move(powers);
    cfg.dimension.n = n;
    return cfg;
}

KinematicConfig config_from_sigma(const RMat& sigma, double n, std::vector<int> powers) {
    const int N = sigma.size();
    std::vector<double> m(N);
    for (int i = 0; i < N; ++i) m[i] = std::sqrt(sigma(i, i));
    RMat k2(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            if (i != j) k2(i, j) = sigma(i, i) + sigma(j, j) - 2.0 * sigma(i, j);
    return make_config(m, k2, n, std::move(powers));
}

KinematicConfig permute_legs(const KinematicConfig& cfg, const std::vector<int>& order) {
    KinematicConfig out = cfg;
    const int n = cfg.n_legs();
    for (int i = 0; i < n; ++i) {
        out.masses[i] = cfg.masses[order[i]];
        out.powers[i] = cfg.powers[order[i]];
    }
    out.invariants = permute(cfg.invariants, order);
    return out;
}

double kallen(double x, double y, double z) {
    // sorted first so every permutation rounds identically
    if (x > y) std::swap(x, y);
    if (y > z) std::swap(y, z);
    if (x > y) std::swap(x, y);
    const double sq = x * x + y * y + z * z;
    const double cross = x * y + x * z + y * z;
    return sq - 2.0 * cross;
}

double cosine(double mj, double ml, double k2) { return (mj * mj + ml * ml - k2) / (2.0 * mj * ml); }

SigmaMatrix build_sigma(const KinematicConfig& cfg) {
    const int n = cfg.n_legs();
    for (int i = 0; i < n; ++i)
        if (!(cfg.masses[i] > 0.0))
            throw Error(ErrorKind::NonPositiveMass, "mass_" + std::to_string(i + 1) + " must be positive");
    SigmaMatrix s;
    s.entries = RMat(n);
    for (int i = 0; i < n; ++i) {
        s.entries(i, i) = cfg.masses[i] * cfg.masses[i];
        for (int j = 0; j < i; ++j) {
            // m_j m_l c_jl written without the division so that symmetric inputs stay exact
            const double v = 0.5 * (cfg.masses[i] * cfg.masses[i] + cfg.masses[j] * cfg.masses[j] - cfg.invariants(i, j));
            s.entries(i, j) = s.entries(j, i) = v;
        }
    }
    s.pd_status = classify_definiteness(s.entries);
    return s;
}

const char* angle_branch_name(AngleBranch b) {
    switch (b) {
        case AngleBranch::interior: return "interior";
        case AngleBranch::below_pseudothreshold: return "below_pseudothreshold";
        case AngleBranch::above_threshold: return "above_threshold";
    }
    return "unknown";
}

KinematicAngle angle(double c, double lambda_value) {
    constexpr double snap = 1e-12;
    KinematicAngle a;
    a.c = c;
    if (std::abs(c - 1.0) <= snap) {
        a.c = 1.0;
        a.tau = 0.0;
        a.branch = AngleBranch::interior;
    } else if (std::abs(c + 1.0) <= snap) {
        a.c = -1.0;
        a.tau = kPi;
        a.branch = AngleBranch::interior;
    } else if (c > 1.0) {
        a.tau = cplx(0.0, -std::acosh(c));
        a.branch = AngleBranch::below_pseudothreshold;
    } else if (c < -1.0) {
        a.tau = cplx(kPi, std::acosh(-c));
        a.branch = AngleBranch::above_threshold;
    } else {
        a.tau = std::acos(c);
        a.branch = AngleBranch::interior;
    }
    a.flagged = (lambda_value == 0.0) && std::abs(std::abs(c) - 1.0) > snap;
    return a;
}

KinematicAngle pair_angle(const KinematicConfig& cfg, int j, int l) {
    const double mj = cfg.masses[j], ml = cfg.masses[l], k2 = cfg.invariants(j, l);
    return angle(cosine(mj, ml, k2), kallen(mj * mj, ml * ml, k2));
}

}  // namespace oloop
