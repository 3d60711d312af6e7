#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orthantloop/matrixops.hpp"

namespace oloop {

// Spacetime dimension: either a plain real n, or d - 2 eps with an
// expansion order for the eps series.
struct Dimension {
    double n = 4.0;
    std::optional<int> d;
    int epsilon_order = 2;
};

struct KinematicConfig {
    std::vector<double> masses;
    RMat invariants;  // k^2_{jl} = (p_j - p_l)^2, diagonal unused
    std::vector<int> powers;
    Dimension dimension;

    int n_legs() const { return static_cast<int>(masses.size()); }
    int nu_total() const;
};

// Checks the type invariants; throws ValidationError (NonPositiveMass for masses).
void validate(const KinematicConfig& cfg);

KinematicConfig make_config(const std::vector<double>& masses, const RMat& invariants, double n,
                            std::vector<int> powers = {});

// Inverse of build_sigma: recover the invariants that produce a given matrix.
KinematicConfig config_from_sigma(const RMat& sigma, double n, std::vector<int> powers = {});

KinematicConfig permute_legs(const KinematicConfig& cfg, const std::vector<int>& order);

struct SigmaMatrix {
    RMat entries;
    PdStatus pd_status = PdStatus::indefinite;
};

double kallen(double x, double y, double z);

double cosine(double mj, double ml, double k2);

SigmaMatrix build_sigma(const KinematicConfig& cfg);

inline CorrelationData correlation_data(const SigmaMatrix& s) { return correlation_data(s.entries); }

enum class AngleBranch { interior, below_pseudothreshold, above_threshold };

const char* angle_branch_name(AngleBranch b);

struct KinematicAngle {
    double c = 0.0;
    cplx tau{};
    AngleBranch branch = AngleBranch::interior;
    bool flagged = false;  // lambda reported exactly zero while c sits outside the snap window
};

KinematicAngle angle(double c, double lambda_value);

KinematicAngle pair_angle(const KinematicConfig& cfg, int j, int l);

}  // namespace oloop
