#include "orthantloop/tensor.hpp"

#include <cmath>

#include "orthantloop/parallel.hpp"

namespace oloop {

namespace {

double dot(const Vec4& a, const Vec4& b, const Vec4& g) {
    double s = 0.0;
    for (int m = 0; m < 4; ++m) s += g[m] * a[m] * b[m];
    return s;
}

Vec4 diff(const Vec4& a, const Vec4& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]}; }

EpsSeries scaled(EpsSeries e, double w) {
    for (auto& c : e.coefficients) {
        c.value *= w;
        c.abs_error *= std::abs(w);
    }
    return e;
}

}  // namespace

void check_momenta(const KinematicConfig& cfg, const std::vector<Vec4>& momenta, const Vec4& metric) {
    const int N = cfg.n_legs();
    if (static_cast<int>(momenta.size()) != N) throw Error(ErrorKind::InconsistentMomenta, "one momentum per leg");
    for (int j = 0; j < N; ++j)
        for (int l = j + 1; l < N; ++l) {
            const Vec4 d = diff(momenta[j], momenta[l]);
            const double k2 = dot(d, d, metric);
            const double ref = cfg.invariants(j, l);
            if (std::abs(k2 - ref) > 1e-10 * std::max(1.0, std::abs(ref)))
                throw Error(ErrorKind::InconsistentMomenta,
                            "momenta do not reproduce k2_" + std::to_string(j + 1) + "_" + std::to_string(l + 1));
        }
}

KinematicConfig config_from_momenta(const std::vector<double>& masses, const std::vector<Vec4>& momenta,
                                    const Vec4& metric, double n) {
    const int N = static_cast<int>(masses.size());
    if (static_cast<int>(momenta.size()) != N) throw Error(ErrorKind::InconsistentMomenta, "one momentum per leg");
    RMat inv(N);
    for (int j = 0; j < N; ++j)
        for (int l = 0; l < N; ++l) {
            const Vec4 d = diff(momenta[j], momenta[l]);
            inv(j, l) = j == l ? 0.0 : dot(d, d, metric);
        }
    return make_config(masses, inv, n);
}

namespace {

struct FamilyInput {
    RMat sigma;
    std::vector<int> powers;
    int d = 0;
    double weight = 1.0;
};

// Raised legs first, the rest ascending, so symmetric kinematics hand
// bit-identical inputs to equivalent families.
FamilyInput family_input(const RMat& sigma, int k, int k2) {
    const int N = sigma.size();
    if (k < 0 || k >= N || k2 < 0 || k2 >= N) throw Error(ErrorKind::IndexOutOfRange, "family legs out of range");
    std::vector<int> order_idx{k};
    if (k2 != k) order_idx.push_back(k2);
    for (int i = 0; i < N; ++i)
        if (i != k && i != k2) order_idx.push_back(i);
    FamilyInput in;
    in.sigma = permute(sigma, order_idx);
    in.powers.assign(N, 1);
    in.d = 8;
    if (k == k2) {
        in.powers[0] = 3;
        in.weight = 2.0;
    } else {
        in.powers[0] = in.powers[1] = 2;
    }
    return in;
}

bool same_input(const FamilyInput& a, const FamilyInput& b) {
    if (a.d != b.d || a.powers != b.powers || a.weight != b.weight) return false;
    const int N = a.sigma.size();
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            if (a.sigma(i, j) != b.sigma(i, j)) return false;
    return true;
}

EpsSeries run_family(const FamilyInput& in, int order, const QuadratureSettings& s, PowerRoute route) {
    return scaled(eps_expand_sigma(in.sigma, in.powers, in.d, 0.5, order, s, route), in.weight);
}

}  // namespace

EpsSeries tensor_family(const RMat& sigma, int k, int k2, int order, const QuadratureSettings& s, PowerRoute route) {
    return run_family(family_input(sigma, k, k2), order, s, route);
}

TensorReduction5 reduce_rank2_5pt(const KinematicConfig& cfg, const TensorOptions& opt, const QuadratureSettings& s) {
    validate(cfg);
    if (cfg.n_legs() != 5) throw Error(ErrorKind::OutOfRange, "tensor reduction is for five legs");
    for (int p : cfg.powers)
        if (p != 1) throw Error(ErrorKind::OutOfRange, "tensor reduction needs unit powers");
    if (opt.momenta) check_momenta(cfg, *opt.momenta, opt.metric);
    const SigmaMatrix sm = build_sigma(cfg);
    if (sm.pd_status != PdStatus::positive_definite)
        throw Error(ErrorKind::NotPositiveDefinite, "tensor reduction needs positive definite Sigma");
    const RMat& sigma = sm.entries;

    // job 0: g family, 1..5 diagonal, then the ten pairs
    std::vector<FamilyInput> jobs;
    FamilyInput g;
    g.sigma = sigma;
    g.powers.assign(5, 1);
    g.d = 6;
    g.weight = -0.5;
    jobs.push_back(g);
    for (int k = 0; k < 5; ++k) jobs.push_back(family_input(sigma, k, k));
    for (int k = 0; k < 5; ++k)
        for (int l = k + 1; l < 5; ++l) jobs.push_back(family_input(sigma, k, l));
    // identical inputs are computed once and shared
    std::vector<int> source(jobs.size());
    std::vector<int> unique;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        source[j] = -1;
        for (int u : unique)
            if (same_input(jobs[j], jobs[u])) source[j] = u;
        if (source[j] < 0) {
            source[j] = static_cast<int>(j);
            unique.push_back(static_cast<int>(j));
        }
    }
    std::vector<EpsSeries> computed(jobs.size());
    parallel_for(static_cast<int>(unique.size()), [&](int i) {
        const int j = unique[i];
        computed[j] = run_family(jobs[j], opt.order, s, opt.route);
    });
    std::vector<EpsSeries> out(jobs.size());
    for (std::size_t j = 0; j < jobs.size(); ++j) out[j] = computed[source[j]];

    TensorReduction5 red;
    red.momenta = opt.momenta;
    red.metric = opt.metric;
    red.g_coefficient = out[0];
    for (int k = 0; k < 5; ++k) red.diag_coefficients[k] = out[1 + k];
    int idx = 6;
    for (int k = 0; k < 5; ++k)
        for (int l = k + 1; l < 5; ++l) {
            red.offdiag_coefficients[k][l] = out[idx];
            red.offdiag_coefficients[l][k] = out[idx];
            ++idx;
        }
    return red;
}

std::array<std::array<cplx, 4>, 4> assemble_rank2(const TensorReduction5& red, int K) {
    if (!red.momenta) throw Error(ErrorKind::InconsistentMomenta, "assembly needs momenta");
    const auto& p = *red.momenta;
    auto coef = [&](const EpsSeries& e) -> cplx {
        if (K < 0 || K > e.order()) throw Error(ErrorKind::OutOfRange, "eps order not available");
        return e.coefficients[K].value;
    };
    std::array<std::array<cplx, 4>, 4> t{};
    const cplx g = coef(red.g_coefficient);
    for (int a = 0; a < 4; ++a) t[a][a] += red.metric[a] * g;
    for (int k = 0; k < 5; ++k) {
        const cplx d = coef(red.diag_coefficients[k]);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) t[a][b] += p[k][a] * p[k][b] * d;
    }
    for (int k = 0; k < 5; ++k)
        for (int l = k + 1; l < 5; ++l) {
            const cplx o = coef(red.offdiag_coefficients[k][l]);
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) t[a][b] += (p[k][a] * p[l][b] + p[l][a] * p[k][b]) * o;
        }
    return t;
}

}  // namespace oloop
