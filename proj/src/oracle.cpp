#include "orthantloop/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <boost/math/quadrature/gauss.hpp>

#include "orthantloop/parallel.hpp"

namespace oloop {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Neumaier compensated sum.
struct Sum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

struct MCOut {
    std::vector<double> mean, std_error;
};

// Runs fn(rng, out[k]) per sample. Batch b draws from its own generator seeded
// by splitmix(seed ^ b); batches are reduced in index order.
template <class F>
MCOut mc_run(const MCSettings& mc, int k, F&& fn) {
    validate(mc);
    const long nb = (mc.samples + mc.batch - 1) / mc.batch;
    std::vector<std::vector<double>> sums(nb, std::vector<double>(k)), sq(nb, std::vector<double>(k));
    std::vector<long> counts(nb);
    parallel_for(static_cast<int>(nb), [&](int b) {
        std::mt19937_64 rng(splitmix64(mc.seed ^ static_cast<std::uint64_t>(b)));
        const long n = std::min<long>(mc.batch, mc.samples - static_cast<long>(b) * mc.batch);
        std::vector<Sum> s(k), q(k);
        std::vector<double> out(k);
        for (long i = 0; i < n; ++i) {
            fn(rng, out.data());
            for (int j = 0; j < k; ++j) {
                s[j].add(out[j]);
                q[j].add(out[j] * out[j]);
            }
        }
        for (int j = 0; j < k; ++j) {
            sums[b][j] = s[j].value();
            sq[b][j] = q[j].value();
        }
        counts[b] = n;
    });
    MCOut r;
    r.mean.resize(k);
    r.std_error.resize(k);
    const double M = static_cast<double>(mc.samples);
    for (int j = 0; j < k; ++j) {
        Sum s, q;
        for (long b = 0; b < nb; ++b) {
            s.add(sums[b][j]);
            q.add(sq[b][j]);
        }
        const double mean = s.value() / M;
        const double var = std::max(0.0, q.value() / M - mean * mean);
        r.mean[j] = mean;
        r.std_error[j] = std::sqrt(var / (M - 1.0));
    }
    return r;
}

int total(const std::vector<int>& p) { return std::accumulate(p.begin(), p.end(), 0); }

std::vector<int> powers_of(const KinematicConfig& cfg) {
    return cfg.powers.empty() ? std::vector<int>(cfg.n_legs(), 1) : cfg.powers;
}

double quad_form(const RMat& sigma, const double* u) {
    const int n = sigma.size();
    double q = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += sigma(i, j) * u[j];
        q += u[i] * row;
    }
    return q;
}

template <class Rng>
void dirichlet(Rng& rng, const std::vector<int>& powers, double* u) {
    const int n = static_cast<int>(powers.size());
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        std::gamma_distribution<double> g(powers[i], 1.0);
        u[i] = g(rng);
        sum += u[i];
    }
    for (int i = 0; i < n; ++i) u[i] /= sum;
}

double sign_pow(int nu) { return (nu % 2 == 0) ? 1.0 : -1.0; }

void check_sigma(const RMat& sigma, const std::vector<int>& powers, double n) {
    if (static_cast<int>(powers.size()) != sigma.size())
        throw Error(ErrorKind::OutOfRange, "powers must match the leg count");
    if (!(2.0 * total(powers) - n > 0.0)) throw Error(ErrorKind::DivergentIntegral, "integral diverges for 2 nu <= n");
}

}  // namespace

void validate(const MCSettings& mc) {
    if (mc.samples < 10000) throw Error(ErrorKind::OutOfRange, "Monte Carlo needs at least 1e4 samples");
    if (mc.batch <= 0) throw Error(ErrorKind::OutOfRange, "batch size must be positive");
}

// ---------------------------------------------------------------- Feynman parameters

IntegralValue feynman_oracle_sigma(const RMat& sigma, const std::vector<int>& powers, double n, const MCSettings& mc,
                                   const QuadratureSettings& s) {
    check_sigma(sigma, powers, n);
    const int N = sigma.size();
    const int nu = total(powers);
    const double e = 0.5 * n - nu;
    double gprod = 1.0;
    for (int p : powers) gprod *= std::tgamma(p);
    const double pref = sign_pow(nu) * std::tgamma(nu - 0.5 * n);
    IntegralValue v;
    if (N == 1) {
        v.value = pref / gprod * std::pow(sigma(0, 0), e);
        v.abs_error = 1e-16 * std::abs(v.value);
        v.method = Method::closed_form;
        return v;
    }
    QuadratureSettings qs = s;
    qs.rel_tol = std::min(s.rel_tol, 1e-11);
    qs.abs_tol = 0.0;
    if (N == 2) {
        auto f = [&](double u) {
            const double x[2] = {u, 1.0 - u};
            return std::pow(x[0], powers[0] - 1) * std::pow(x[1], powers[1] - 1) * std::pow(quad_form(sigma, x), e);
        };
        const auto q = adaptive<double>(f, 0.0, 1.0, qs);
        v.value = pref / gprod * q.value;
        v.abs_error = std::abs(pref / gprod) * q.error;
        v.method = Method::quadrature;
        v.converged = q.converged;
        return v;
    }
    if (N == 3) {
        QuadratureSettings in = qs;
        in.rel_tol = qs.rel_tol * 0.01;
        double inner_err = 0.0;
        bool inner_ok = true;
        auto outer = [&](double u1) {
            auto inner = [&](double t) {
                const double x[3] = {u1, (1.0 - u1) * t, (1.0 - u1) * (1.0 - t)};
                return std::pow(x[0], powers[0] - 1) * std::pow(x[1], powers[1] - 1) *
                       std::pow(x[2], powers[2] - 1) * std::pow(quad_form(sigma, x), e);
            };
            const auto q = adaptive<double>(inner, 0.0, 1.0, in);
            inner_err = std::max(inner_err, q.error);
            inner_ok = inner_ok && q.converged;
            return (1.0 - u1) * q.value;
        };
        const auto q = adaptive<double>(outer, 0.0, 1.0, qs);
        v.value = pref / gprod * q.value;
        v.abs_error = std::abs(pref / gprod) * (q.error + inner_err);
        v.method = Method::quadrature;
        v.converged = q.converged && inner_ok;
        return v;
    }
    const MCOut r = mc_run(mc, 1, [&](std::mt19937_64& rng, double* out) {
        double u[kMaxDim];
        dirichlet(rng, powers, u);
        out[0] = std::pow(quad_form(sigma, u), e);
    });
    const double c = pref / std::tgamma(nu);
    v.value = c * r.mean[0];
    v.abs_error = std::abs(c) * r.std_error[0];
    v.method = Method::monte_carlo;
    return v;
}

IntegralValue feynman_oracle(const KinematicConfig& cfg, const MCSettings& mc, const QuadratureSettings& s) {
    validate(cfg);
    return feynman_oracle_sigma(build_sigma(cfg).entries, powers_of(cfg), cfg.dimension.n, mc, s);
}

// ---------------------------------------------------------------- orthant

OrthantEstimate orthant_mc(const RMat& cov, const MCSettings& mc) {
    const int N = cov.size();
    const RMat L = cholesky(normalize(cov));
    const MCOut r = mc_run(mc, 1, [&](std::mt19937_64& rng, double* out) {
        std::normal_distribution<double> nd;
        double z[kMaxDim];
        for (int i = 0; i < N; ++i) z[i] = nd(rng);
        bool inside = true;
        for (int i = 0; i < N && inside; ++i) {
            double x = 0.0;
            for (int j = 0; j <= i; ++j) x += L(i, j) * z[j];
            inside = x > 0.0;
        }
        out[0] = inside ? 1.0 : 0.0;
    });
    const double p = r.mean[0];
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(mc.samples))};
}

// ---------------------------------------------------------------- truncated moments

MomentEstimate truncated_moment_mc_sigma(const RMat& sigma, const std::vector<int>& powers, double n,
                                         const MCSettings& mc) {
    check_sigma(sigma, powers, n);
    const int N = sigma.size();
    const int nu = total(powers);
    const RMat R = pd_inverse(sigma);
    const RMat L = cholesky(R);
    const double ex = nu - n;
    const MCOut r = mc_run(mc, 1, [&](std::mt19937_64& rng, double* out) {
        std::normal_distribution<double> nd;
        double z[kMaxDim], x[kMaxDim];
        for (int i = 0; i < N; ++i) z[i] = nd(rng);
        double sum = 0.0, prod = 1.0;
        for (int i = 0; i < N; ++i) {
            x[i] = 0.0;
            for (int j = 0; j <= i; ++j) x[i] += L(i, j) * z[j];
            if (!(x[i] > 0.0)) {
                out[0] = 0.0;
                return;
            }
            sum += x[i];
            if (powers[i] > 1) prod *= std::pow(x[i], powers[i] - 1);
        }
        out[0] = prod * std::pow(sum, ex);
    });
    double gprod = 1.0;
    for (int p : powers) gprod *= std::tgamma(p);
    const double c = sign_pow(nu) / gprod * std::pow(2.0 * kPi, 0.5 * N) /
                     (sqrt_det_ldl(sigma).real() * std::pow(2.0, nu - 0.5 * n - 1.0));
    MomentEstimate m;
    m.value.value = c * r.mean[0];
    m.value.abs_error = std::abs(c) * r.std_error[0];
    m.value.method = Method::monte_carlo;
    // second moment of the weight exists only for 4 nu - 2 n - N > 0
    m.infinite_variance = !(4.0 * nu - 2.0 * n - N > 0.0);
    return m;
}

MomentEstimate truncated_moment_mc(const KinematicConfig& cfg, const MCSettings& mc) {
    validate(cfg);
    return truncated_moment_mc_sigma(build_sigma(cfg).entries, powers_of(cfg), cfg.dimension.n, mc);
}

// ---------------------------------------------------------------- hypergeometric form

IntegralValue lauricella_expectation_mc_sigma(const RMat& sigma, const std::vector<int>& powers, double n,
                                              const MCSettings& mc) {
    check_sigma(sigma, powers, n);
    const int N = sigma.size();
    const int nu = total(powers);
    const double a = 2.0 * nu - n, b = n - nu;
    if (!(b > 0.0)) throw Error(ErrorKind::OutOfRange, "hypergeometric form needs n > nu");
    const RMat L = cholesky(sigma);
    using GL = boost::math::quadrature::gauss<double, 30>;
    const MCOut r = mc_run(mc, 1, [&](std::mt19937_64& rng, double* out) {
        std::normal_distribution<double> nd;
        double z[kMaxDim], Z[kMaxDim];
        for (int i = 0; i < N; ++i) z[i] = nd(rng);
        for (int i = 0; i < N; ++i) {
            Z[i] = 0.0;
            for (int j = 0; j <= i; ++j) Z[i] += L(i, j) * z[j];
        }
        auto prod = [&](double t) {
            cplx p = 1.0;
            for (int i = 0; i < N; ++i) p *= std::pow(cplx(1.0 - t, -t * Z[i]), -powers[i]);
            return p.real();
        };
        // endpoint powers t^{a-1}, (1-t)^{b-1} absorbed by substitution when below 1
        auto left = [&](double v) {
            const double t = a < 1.0 ? std::pow(v, 1.0 / a) : v;
            const double w = a < 1.0 ? 1.0 / a : std::pow(t, a - 1.0);
            return w * std::pow(1.0 - t, b - 1.0) * prod(t);
        };
        auto right = [&](double v) {
            const double s = b < 1.0 ? std::pow(v, 1.0 / b) : v;
            const double w = b < 1.0 ? 1.0 / b : std::pow(s, b - 1.0);
            return w * std::pow(1.0 - s, a - 1.0) * prod(1.0 - s);
        };
        const double hl = a < 1.0 ? std::pow(0.5, a) : 0.5;
        const double hr = b < 1.0 ? std::pow(0.5, b) : 0.5;
        out[0] = GL::integrate(left, 0.0, hl) + GL::integrate(right, 0.0, hr);
    });
    const double c = sign_pow(nu) / (std::pow(2.0, nu - 0.5 * n - 1.0) * std::tgamma(b));
    IntegralValue v;
    v.value = c * r.mean[0];
    v.abs_error = std::abs(c) * r.std_error[0];
    v.method = Method::monte_carlo;
    return v;
}

IntegralValue lauricella_expectation_mc(const KinematicConfig& cfg, const MCSettings& mc) {
    validate(cfg);
    return lauricella_expectation_mc_sigma(build_sigma(cfg).entries, powers_of(cfg), cfg.dimension.n, mc);
}

// ---------------------------------------------------------------- tensor numerator

TensorEstimate tensor_mc(const RMat& sigma, const std::vector<Vec4>& momenta, const Vec4& metric, double n,
                         const MCSettings& mc) {
    const int N = sigma.size();
    if (static_cast<int>(momenta.size()) != N) throw Error(ErrorKind::OutOfRange, "one momentum per leg");
    const std::vector<int> powers(N, 1);
    check_sigma(sigma, powers, n);
    const double nu = N;
    const double g1 = std::tgamma(nu - 1.0 - 0.5 * n), g0 = std::tgamma(nu - 0.5 * n);
    const MCOut r = mc_run(mc, 16, [&](std::mt19937_64& rng, double* out) {
        double u[kMaxDim];
        dirichlet(rng, powers, u);
        const double q = quad_form(sigma, u);
        Vec4 P{0, 0, 0, 0};
        for (int k = 0; k < N; ++k)
            for (int m = 0; m < 4; ++m) P[m] += u[k] * momenta[k][m];
        const double qa = std::pow(q, 0.5 * n + 1.0 - nu), qb = std::pow(q, 0.5 * n - nu);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                out[4 * a + b] = (a == b ? -0.5 * metric[a] * g1 * qa : 0.0) + g0 * P[a] * P[b] * qb;
    });
    const double c = sign_pow(N) / std::tgamma(nu);
    TensorEstimate t;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            t.value[a][b] = c * r.mean[4 * a + b];
            t.std_error[a][b] = std::abs(c) * r.std_error[4 * a + b];
        }
    return t;
}

}  // namespace oloop
