#include "orthantloop/dimshift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <functional>
#include <numeric>
#include <string>

#include <boost/math/special_functions/polygamma.hpp>

namespace oloop {

namespace {

int total(const std::vector<int>& p) { return std::accumulate(p.begin(), p.end(), 0); }

bool all_unit(const std::vector<int>& p) {
    return std::all_of(p.begin(), p.end(), [](int x) { return x == 1; });
}

bool is_integer(double x) { return std::abs(x - std::round(x)) < 1e-12; }

std::vector<int> powers_of(const KinematicConfig& cfg) {
    return cfg.powers.empty() ? std::vector<int>(cfg.n_legs(), 1) : cfg.powers;
}

// Settings handed to evaluators nested inside an outer integral.
QuadratureSettings nested(const QuadratureSettings& s) {
    QuadratureSettings in = s.tightened(0.1);
    in.rel_tol = std::max(in.rel_tol, 1e-13);
    in.abs_tol = std::max(in.abs_tol, 1e-15);
    in.contour_abscissa_c = 0.0;
    in.contour_halfheight_T = 0.0;
    return in;
}

double typical_scale(const RMat& sigma) {
    double tr = 0.0;
    for (int i = 0; i < sigma.size(); ++i) tr += sigma(i, i);
    return tr / sigma.size();
}

RMat plus_all(const RMat& sigma, double tau) {
    RMat m = sigma;
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) m(i, j) += tau;
    return m;
}

void check_convergent(const std::vector<int>& powers, double n) {
    if (!(2.0 * total(powers) - n > 0.0))
        throw Error(ErrorKind::DivergentIntegral, "integral diverges for 2 nu <= n");
}

IntegralValue from_contour(const ContourResult& r) {
    IntegralValue v = r.value;
    v.method = Method::contour;
    return v;
}

double contour_c(const QuadratureSettings& s, double natural) {
    return s.contour_abscissa_c > 0.0 ? s.contour_abscissa_c : natural;
}

// Repeated-leg gaps and the quadratic read-off at zero gap. The value is
// analytic and close to linear in delta; much smaller gaps only add
// quadrature noise from the near-unit correlations.
constexpr double kGaps[3] = {0.04, 0.02, 0.01};
constexpr double kDuplicateFloor = 1e-5;

IntegralValue extrapolate_gaps(const IntegralValue (&v)[3]) {
    cplx extrap = 0.0;
    double amp = 0.0;
    double err = 0.0;
    for (int i = 0; i < 3; ++i) {
        double w = 1.0;
        for (int j = 0; j < 3; ++j)
            if (j != i) w *= kGaps[j] / (kGaps[j] - kGaps[i]);
        extrap += w * v[i].value;
        amp += std::abs(w);
        err = std::max(err, v[i].abs_error);
    }
    // truncation: distance to the straight line through the two smallest gaps
    const cplx lin = (kGaps[1] * v[2].value - kGaps[2] * v[1].value) / (kGaps[1] - kGaps[2]);
    IntegralValue out;
    out.value = extrap;
    out.abs_error = amp * err + std::abs(extrap - lin);
    out.method = Method::quadrature;
    out.converged = v[0].converged && v[1].converged && v[2].converged;
    return out;
}

QuadratureSettings duplicate_settings(const QuadratureSettings& s) {
    // the pieces shrink with the gap; tighten so their sum keeps its digits
    QuadratureSettings in = s.tightened(1e-3);
    in.rel_tol = std::max(in.rel_tol, 1e-10);
    in.abs_tol = std::max(in.abs_tol, 1e-16);
    return in;
}

// Unit powers at n_b in {N, N-1} along Sigma + tau 11^T through the rank-one
// update of the inverse, R(tau) = R - tau (R1)(R1)^T / (1 + tau kappa), det
// scaled by 1 + tau kappa. Stays accurate for any tau.
class UnitLine {
public:
    UnitLine() = default;
    UnitLine(const RMat& sigma, int n_b) : n_b_(n_b) {
        const int N = sigma.size();
        r_ = pd_inverse(sigma);
        sqrt_det_ = sqrt_det_ldl(sigma).real();
        r1_.assign(N, 0.0);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) r1_[i] += r_(i, j);
        for (double x : r1_) kappa_ += x;
    }

    IntegralValue operator()(double tau, const QuadratureSettings& s) const {
        const int N = r_.size();
        const double g = 1.0 + tau * kappa_;
        RMat r = r_;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) r(i, j) -= tau * r1_[i] * r1_[j] / g;
        const cplx sd = sqrt_det_ * std::sqrt(g);
        const Est<cplx> e = n_b_ == N ? j_unit_n_inv(r, sd, s) : j_unit_nm1_inv(r, sd, s);
        IntegralValue v;
        v.value = e.value;
        v.abs_error = e.error + 1e-15 * std::abs(e.value);
        v.method = Method::quadrature;
        return v;
    }

private:
    int n_b_ = 0;
    RMat r_;
    double sqrt_det_ = 0.0;
    std::vector<double> r1_;
    double kappa_ = 0.0;
};

// J(n_b; Sigma + tau 11^T) along the positive real line. Unit powers use the
// rank-one update directly. Raised powers at n_b = nu on the repeated-leg
// route use it on the augmented matrices (gap fixed at tau = 0, so adding
// tau 11^T keeps every one positive definite). Everything else rebuilds the
// matrix and goes through the dispatcher.
class TauLine {
public:
    TauLine(const RMat& sigma, const std::vector<int>& powers, double n_b, PowerRoute route)
        : sigma_(sigma), powers_(powers), n_b_(n_b), route_(route) {
        const int N = sigma.size();
        const int nu = total(powers);
        if (all_unit(powers) && is_integer(n_b) && (std::lround(n_b) == N || std::lround(n_b) == N - 1)) {
            lines_.emplace_back(sigma, static_cast<int>(std::lround(n_b)));
            return;
        }
        if (all_unit(powers) || std::abs(n_b - nu) > 1e-12 || nu > 7) return;
        std::vector<int> raised;
        for (int i = 0; i < N; ++i)
            if (powers[i] > 1) raised.push_back(i);
        const bool contour_applies =
            raised.size() == 1 || (raised.size() == 2 && powers[raised[0]] == powers[raised[1]]);
        if (route == PowerRoute::duplicate || (route == PowerRoute::automatic && !contour_applies))
            for (double d : kGaps) lines_.emplace_back(augment_sigma(sigma, powers, d), nu);
    }

    IntegralValue operator()(double tau, const QuadratureSettings& s) const {
        if (lines_.size() == 1) return lines_[0](tau, s);
        if (lines_.empty()) return evaluate_sigma(plus_all(sigma_, tau), powers_, n_b_, s, route_);
        const QuadratureSettings in = duplicate_settings(s);
        IntegralValue v[3];
        for (int i = 0; i < 3; ++i) v[i] = lines_[i](tau, in);
        return extrapolate_gaps(v);
    }

    bool fast() const { return !lines_.empty(); }
    // only the plain unit-power line keeps its relative accuracy far out;
    // the repeated-leg difference drowns in rounding there
    bool accurate_far_out() const { return lines_.size() == 1; }
    // outer settings this line can honour: the repeated-leg difference is
    // good to about 1e-6 relative, asking for more only chases its noise
    QuadratureSettings attainable(const QuadratureSettings& s) const {
        QuadratureSettings out = s;
        if (lines_.size() == 3) out.rel_tol = std::max(out.rel_tol, kDuplicateFloor);
        return out;
    }

private:
    RMat sigma_;
    std::vector<int> powers_;
    double n_b_;
    PowerRoute route_;
    std::vector<UnitLine> lines_;
};

// Far along the line the integrand is orders below its value at tau = 0 and
// only has to be good against that scale; chasing its own relative digits
// out there sends the contour route to huge half-heights.
QuadratureSettings line_settings(const TauLine& line, const QuadratureSettings& so) {
    QuadratureSettings in = nested(so);
    const IntegralValue v0 = line(0.0, in);
    in.abs_tol = std::max(in.abs_tol, 1e-3 * so.rel_tol * std::abs(v0.value));
    return in;
}

// int_0^inf f(w) dw for f ~ w^{-p}, p > 1: [0,1] directly, the tail through
// w = z^{-m} with m = 1/(p-1) so the mapped integrand stays bounded at z = 0.
template <class V, class F>
QuadResult<V> integrate_power_tail(F&& f, double p, const QuadratureSettings& s) {
    const double m = p < 2.0 ? 1.0 / (p - 1.0) : 1.0;
    auto head = adaptive<V>(f, 0.0, 1.0, s);
    auto g = [&](double z) -> V {
        if (!(z > 0.0)) return V{};
        const double w = std::pow(z, -m);
        if (!std::isfinite(w)) return V{};
        return (m * std::pow(z, -m - 1.0)) * f(w);
    };
    // the tail only has to be good relative to the whole integral
    QuadratureSettings ts = s;
    ts.abs_tol = std::max(s.abs_tol, 0.5 * s.rel_tol * qnorm(head.value));
    auto tail = adaptive<V>(g, 0.0, 1.0, ts);
    QuadResult<V> out;
    out.value = head.value + tail.value;
    out.error = head.error + tail.error;
    out.converged = head.converged && tail.converged;
    out.evaluations = head.evaluations + tail.evaluations;
    return out;
}

// Beyond this multiple of the mass scale the rebuilt matrix loses its digits;
// integrands there are far down their power tail and are dropped.
constexpr double kTauCut = 1e8;

// Rebuilt-matrix evaluations are also slow out there (the correlations of
// Sigma + tau 11^T drift towards a singular limit), so stop once the
// remaining w^{-decay} tail is far below the requested accuracy.
double tau_limit(const TauLine& line, double L, double decay, double rate, const QuadratureSettings& s) {
    if (line.accurate_far_out()) return std::numeric_limits<double>::infinity();
    // the repeated-leg difference loses its relative digits quickly, so it
    // gets the shortest line that still respects the tolerance
    const double drop = line.fast() ? 0.1 * s.rel_tol : 1e-3 * s.rel_tol;
    const double wc = std::pow(drop, -1.0 / (decay - 1.0));
    return L * std::min(kTauCut, std::pow(wc, 1.0 / rate));
}

}  // namespace

CMat ShiftedSigma::materialize() const {
    const int n = base.size();
    switch (kind) {
        case ShiftKind::all_masses_plus_tau:
        case ShiftKind::all_masses_minus_s: {
            const cplx sh = kind == ShiftKind::all_masses_plus_tau ? parameter : -parameter;
            CMat m = to_complex(base);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) m(i, j) += sh;
            return m;
        }
        case ShiftKind::single_diagonal_minus_s: {
            if (leg < 0 || leg >= n) throw Error(ErrorKind::IndexOutOfRange, "shift leg out of range");
            CMat m = to_complex(base);
            m(leg, leg) -= parameter;
            return m;
        }
        case ShiftKind::single_offdiagonal_invariant_plus_4s: {
            if (leg < 0 || leg >= n || partner < 0 || partner >= n || leg == partner)
                throw Error(ErrorKind::IndexOutOfRange, "shift legs out of range");
            CMat m = to_complex(base);
            m(leg, partner) -= 2.0 * parameter;
            m(partner, leg) -= 2.0 * parameter;
            return m;
        }
        case ShiftKind::column_augmented:
            return to_complex(augment_sigma(base, multiplicity, parameter.real()));
    }
    throw Error(ErrorKind::Unsupported, "unknown shift kind");
}

RMat augment_sigma(const RMat& sigma, const std::vector<int>& multiplicity, double delta) {
    const int n = sigma.size();
    if (static_cast<int>(multiplicity.size()) != n)
        throw Error(ErrorKind::OutOfRange, "multiplicity list must match the leg count");
    std::vector<int> src;  // original leg behind every column
    for (int i = 0; i < n; ++i) src.push_back(i);
    for (int i = 0; i < n; ++i) {
        if (multiplicity[i] < 1) throw Error(ErrorKind::OutOfRange, "multiplicity must be at least 1");
        for (int c = 1; c < multiplicity[i]; ++c) src.push_back(i);
    }
    const int na = static_cast<int>(src.size());
    if (na > kMaxDim) throw Error(ErrorKind::AssemblyLimit, "augmented matrix exceeds the size cap");
    // gap measured in units of the conditional variance 1/R_kk, so the
    // augmented matrix stays positive definite however Sigma is scaled
    const RMat r = pd_inverse(sigma);
    RMat a(na);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j) {
            if (i != j && src[i] == src[j])
                a(i, j) = sigma(src[i], src[i]) - delta / r(src[i], src[i]);
            else
                a(i, j) = sigma(src[i], src[j]);
        }
    return a;
}

// ---------------------------------------------------------------- dimension shifts

IntegralValue raise_dimension_sigma(const RMat& sigma, const std::vector<int>& powers, double n, double n_b,
                                    const QuadratureSettings& s, PowerRoute route) {
    check_convergent(powers, n);
    const double a = 0.5 * (n - n_b);
    if (!(a > 0.0)) throw Error(ErrorKind::OutOfRange, "raise_dimension needs n above the base dimension");
    const double L = typical_scale(sigma);
    const TauLine line(sigma, powers, n_b, route);
    const QuadratureSettings so = line.attainable(s);
    const QuadratureSettings in = line_settings(line, so);
    const double decay = (total(powers) - 0.5 * n_b) / a;
    const double tmax = tau_limit(line, L, decay, a, so);
    double inner_err = 0.0;
    auto f = [&](double w) -> cplx {
        if (!(w > 0.0)) return 0.0;
        const double tau = L * std::pow(w, 1.0 / a);
        if (!std::isfinite(tau) || tau > tmax) return 0.0;
        const IntegralValue v = line(tau, in);
        inner_err = std::max(inner_err, v.abs_error);
        return v.value;
    };
    const auto q = integrate_power_tail<cplx>(f, decay, so);
    if (!q.converged) throw Error(ErrorKind::NonConvergence, "raise_dimension quadrature did not converge");
    const double pref = std::pow(L, a) / std::tgamma(a + 1.0);
    IntegralValue v;
    v.value = pref * q.value;
    v.abs_error = pref * (q.error + inner_err);
    v.method = Method::quadrature;
    return v;
}

IntegralValue raise_dimension(const KinematicConfig& cfg, const QuadratureSettings& s, std::optional<double> base_n) {
    validate(cfg);
    const auto p = powers_of(cfg);
    const double nb = base_n.value_or(static_cast<double>(total(p)));
    return raise_dimension_sigma(build_sigma(cfg).entries, p, cfg.dimension.n, nb, s);
}

IntegralValue lower_dimension_sigma(const RMat& sigma, double n, const QuadratureSettings& s) {
    const int N = sigma.size();
    check_convergent(std::vector<int>(N, 1), n);
    const double q = 0.5 * (N - n);
    if (!(q > 0.0)) throw Error(ErrorKind::OutOfRange, "lower_dimension needs n below N");
    const RMat r = pd_inverse(sigma);
    double kappa = 0.0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) kappa += r(i, j);
    QuadratureSettings cs = s;
    cs.contour_abscissa_c = contour_c(s, 0.5 / kappa);
    const QuadratureSettings in = nested(s);
    const double gq = std::tgamma(q + 1.0);
    const CMat base = to_complex(sigma);
    auto f = [&](cplx z) -> cplx {
        CMat m = base;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) m(i, j) -= z;
        return gq * std::pow(z, -(q + 1.0)) * j_unit_n(m, in).value;
    };
    return from_contour(integrate_contour_detailed(f, cs, true));
}

IntegralValue lower_dimension(const KinematicConfig& cfg, const QuadratureSettings& s) {
    validate(cfg);
    if (!all_unit(powers_of(cfg))) throw Error(ErrorKind::Unsupported, "lower_dimension handles unit powers");
    return lower_dimension_sigma(build_sigma(cfg).entries, cfg.dimension.n, s);
}

// ---------------------------------------------------------------- power raising

IntegralValue raise_power_single_sigma(const RMat& sigma, int k, int m, const QuadratureSettings& s) {
    const int N = sigma.size();
    if (k < 0 || k >= N) throw Error(ErrorKind::IndexOutOfRange, "raised leg out of range");
    if (m < 0) throw Error(ErrorKind::OutOfRange, "power excess must be non-negative");
    const RMat r = pd_inverse(sigma);
    QuadratureSettings cs = s;
    cs.contour_abscissa_c = contour_c(s, 0.5 / r(k, k));
    const QuadratureSettings in = nested(s);
    const double q = 0.5 * m;
    const double pref = ((m % 2 == 0) ? 1.0 : -1.0) / std::tgamma(m + 1.0) * std::tgamma(q + 1.0);
    const CMat base = to_complex(sigma);
    auto f = [&](cplx z) -> cplx {
        CMat mm = base;
        mm(k, k) -= z;
        return pref * std::pow(z, -(q + 1.0)) * j_unit_n(mm, in).value;
    };
    return from_contour(integrate_contour_detailed(f, cs, true));
}

IntegralValue raise_power_single(const KinematicConfig& cfg, int k, const QuadratureSettings& s) {
    validate(cfg);
    const auto p = powers_of(cfg);
    if (k < 0 || k >= cfg.n_legs()) throw Error(ErrorKind::IndexOutOfRange, "raised leg out of range");
    for (int i = 0; i < cfg.n_legs(); ++i)
        if (i != k && p[i] != 1) throw Error(ErrorKind::OutOfRange, "other legs must carry unit power");
    if (std::abs(cfg.dimension.n - total(p)) > 1e-12)
        throw Error(ErrorKind::OutOfRange, "power raising needs n = nu");
    return raise_power_single_sigma(build_sigma(cfg).entries, k, p[k] - 1, s);
}

IntegralValue raise_power_pair_sigma(const RMat& sigma, int k, int k2, int m, const QuadratureSettings& s) {
    const int N = sigma.size();
    if (k < 0 || k >= N || k2 < 0 || k2 >= N || k == k2)
        throw Error(ErrorKind::IndexOutOfRange, "raised legs out of range");
    if (m < 0) throw Error(ErrorKind::OutOfRange, "power excess must be non-negative");
    const RMat r = pd_inverse(sigma);
    const double lmax = r(k, k2) + std::sqrt(r(k, k) * r(k2, k2));
    QuadratureSettings cs = s;
    cs.contour_abscissa_c = contour_c(s, 0.25 / lmax);
    const QuadratureSettings in = nested(s);
    const double fm = std::tgamma(m + 1.0);
    const double pref = fm / (std::pow(4.0, m) * fm * fm);
    const CMat base = to_complex(sigma);
    auto f = [&](cplx z) -> cplx {
        CMat mm = base;
        mm(k, k2) -= 2.0 * z;
        mm(k2, k) -= 2.0 * z;
        return pref * std::pow(z, -(m + 1.0)) * j_unit_n(mm, in).value;
    };
    return from_contour(integrate_contour_detailed(f, cs, true));
}

IntegralValue raise_power_pair(const KinematicConfig& cfg, int k, int k2, const QuadratureSettings& s) {
    validate(cfg);
    const auto p = powers_of(cfg);
    const int N = cfg.n_legs();
    if (k < 0 || k >= N || k2 < 0 || k2 >= N || k == k2)
        throw Error(ErrorKind::IndexOutOfRange, "raised legs out of range");
    if (p[k] != p[k2]) throw Error(ErrorKind::OutOfRange, "pair raising needs equal powers on both legs");
    for (int i = 0; i < N; ++i)
        if (i != k && i != k2 && p[i] != 1) throw Error(ErrorKind::OutOfRange, "other legs must carry unit power");
    if (std::abs(cfg.dimension.n - total(p)) > 1e-12)
        throw Error(ErrorKind::OutOfRange, "power raising needs n = nu");
    return raise_power_pair_sigma(build_sigma(cfg).entries, k, k2, p[k] - 1, s);
}

IntegralValue raise_power_duplicate_sigma(const RMat& sigma, const std::vector<int>& powers,
                                          const QuadratureSettings& s) {
    const int nu = total(powers);
    if (nu > 7) throw Error(ErrorKind::AssemblyLimit, "repeated-leg route needs nu <= 7");
    if (all_unit(powers)) return j_unit_integer(sigma, sigma.size(), s);
    const QuadratureSettings in = duplicate_settings(s);
    IntegralValue v[3];
    for (int i = 0; i < 3; ++i) v[i] = j_unit_integer(augment_sigma(sigma, powers, kGaps[i]), nu, in);
    return extrapolate_gaps(v);
}

IntegralValue raise_power_duplicate(const KinematicConfig& cfg, const QuadratureSettings& s) {
    validate(cfg);
    const auto p = powers_of(cfg);
    if (std::abs(cfg.dimension.n - total(p)) > 1e-12)
        throw Error(ErrorKind::OutOfRange, "repeated-leg route needs n = nu");
    return raise_power_duplicate_sigma(build_sigma(cfg).entries, p, s);
}

// ---------------------------------------------------------------- dispatcher

namespace {

IntegralValue power_at_nu(const RMat& sigma, const std::vector<int>& powers, const QuadratureSettings& s,
                          PowerRoute route) {
    std::vector<int> raised;
    for (int i = 0; i < static_cast<int>(powers.size()); ++i)
        if (powers[i] > 1) raised.push_back(i);
    if (raised.empty()) return j_unit_integer(sigma, sigma.size(), s);
    if (route == PowerRoute::duplicate) return raise_power_duplicate_sigma(sigma, powers, s);
    if (raised.size() == 1) return raise_power_single_sigma(sigma, raised[0], powers[raised[0]] - 1, s);
    if (raised.size() == 2 && powers[raised[0]] == powers[raised[1]])
        return raise_power_pair_sigma(sigma, raised[0], raised[1], powers[raised[0]] - 1, s);
    if (route == PowerRoute::contour)
        throw Error(ErrorKind::Unsupported, "no contour route for this pattern of raised powers");
    return raise_power_duplicate_sigma(sigma, powers, s);
}

}  // namespace

IntegralValue evaluate_sigma(const RMat& sigma, const std::vector<int>& powers, double n,
                             const QuadratureSettings& s, PowerRoute route) {
    const int N = sigma.size();
    if (static_cast<int>(powers.size()) != N) throw Error(ErrorKind::OutOfRange, "powers must match the leg count");
    check_convergent(powers, n);
    const int nu = total(powers);
    if (all_unit(powers)) {
        if (is_integer(n) && (std::lround(n) == N || std::lround(n) == N - 1))
            return j_unit_integer(sigma, static_cast<int>(std::lround(n)), s);
        if (n > N) return raise_dimension_sigma(sigma, powers, n, N, s);
        return lower_dimension_sigma(sigma, n, s);
    }
    if (std::abs(n - nu) < 1e-12) return power_at_nu(sigma, powers, s, route);
    if (n > nu) return raise_dimension_sigma(sigma, powers, n, nu, s, route);
    if (is_integer(nu - n)) {
        KinematicConfig tmp = config_from_sigma(sigma, n, powers);
        IntegralValue out;
        out.method = Method::contour;
        for (const auto& t : expand_power_excess(tmp)) {
            const IntegralValue v = power_at_nu(sigma, t.powers, nested(s), route);
            out.value += t.coefficient * v.value;
            out.abs_error += std::abs(t.coefficient) * v.abs_error;
            out.method = v.method;
        }
        return out;
    }
    throw Error(ErrorKind::Unsupported, "no route for raised powers below n = nu at non-integer offset");
}

IntegralValue evaluate(const KinematicConfig& cfg, const QuadratureSettings& s) {
    validate(cfg);
    return evaluate_sigma(build_sigma(cfg).entries, powers_of(cfg), cfg.dimension.n, s);
}

// ---------------------------------------------------------------- eps expansion

namespace {

// Taylor coefficients of 1/Gamma(k - eps) up to eps^order.
std::vector<double> inverse_gamma_series(double k, int order) {
    std::vector<double> h(order + 1, 0.0);
    h[0] = -std::lgamma(k);
    double fact = 1.0;
    for (int j = 1; j <= order; ++j) {
        fact *= j;
        const double psi = boost::math::polygamma(j - 1, k);
        h[j] = -psi * ((j % 2 == 0) ? 1.0 : -1.0) / fact;
    }
    std::vector<double> e(order + 1, 0.0);
    e[0] = std::exp(h[0]);
    for (int n = 1; n <= order; ++n) {
        double acc = 0.0;
        for (int j = 1; j <= n; ++j) acc += j * h[j] * e[n - j];
        e[n] = acc / n;
    }
    return e;
}

}  // namespace

EpsSeries eps_expand_sigma(const RMat& sigma, const std::vector<int>& powers, int d, double k, int order,
                           const QuadratureSettings& s, PowerRoute route) {
    if (!(k > 0.0)) throw Error(ErrorKind::Unsupported, "eps expansion needs a positive shift k");
    if (order < 0) throw Error(ErrorKind::OutOfRange, "negative expansion order");
    check_convergent(powers, d);
    const double nb = d - 2.0 * k;
    const double L = typical_scale(sigma);
    const TauLine line(sigma, powers, nb, route);
    const QuadratureSettings so = line.attainable(s);
    const QuadratureSettings in = line_settings(line, so);
    const double decay = (total(powers) - 0.5 * nb) / k;
    const double tmax = tau_limit(line, L, decay, k, so);
    double inner_err = 0.0;
    auto f = [&](double w) -> CVec {
        CVec out(order + 1);
        if (!(w > 0.0)) return out;
        const double tau = L * std::pow(w, 1.0 / k);
        if (!std::isfinite(tau) || tau <= 0.0 || tau > tmax) return out;
        const IntegralValue v = line(tau, in);
        inner_err = std::max(inner_err, v.abs_error * std::pow(std::max(1.0, std::abs(std::log(tau))), order));
        const double lt = std::log(tau);
        double lp = 1.0;
        for (int j = 0; j <= order; ++j) {
            out.v[j] = lp * v.value;
            lp *= lt;
        }
        return out;
    };
    // log tau is singular at w = 0; w = v^3 leaves v^2 log v, which the
    // Kronrod rule takes without a cascade of subdivisions
    auto fv = [&](double v) -> CVec { return (3.0 * v * v) * f(v * v * v); };
    const auto q = order == 0 ? integrate_power_tail<CVec>(f, decay, so)
                              : integrate_power_tail<CVec>(fv, 3.0 * decay - 2.0, so);
    if (!q.converged) throw Error(ErrorKind::NonConvergence, "log-moment quadrature did not converge");
    const std::vector<double> g = inverse_gamma_series(k, order);
    const double pref = std::pow(L, k) / k;
    EpsSeries es;
    es.d_base = d;
    es.k_shift = k;
    for (int K = 0; K <= order; ++K) {
        cplx c = 0.0;
        double e = 0.0;
        double jf = 1.0;
        for (int j = 0; j <= K; ++j) {
            if (j > 0) jf *= j;
            const double w = g[K - j] * ((j % 2 == 0) ? 1.0 : -1.0) / jf;
            c += w * q.value.v[j];
            e += std::abs(w) * (q.error + inner_err);
        }
        IntegralValue iv;
        iv.value = pref * c;
        iv.abs_error = pref * e;
        iv.method = Method::quadrature;
        iv.converged = q.converged;
        es.coefficients.push_back(iv);
    }
    return es;
}

EpsSeries eps_expand(const KinematicConfig& cfg, const QuadratureSettings& s, std::optional<double> k_shift) {
    validate(cfg);
    if (!cfg.dimension.d) throw Error(ErrorKind::OutOfRange, "eps expansion needs an integer base dimension d");
    const int d = *cfg.dimension.d;
    const auto p = powers_of(cfg);
    double k = 0.5 * (d - total(p));
    if (k_shift) {
        k = *k_shift;
    } else if (!(k > 0.0) && all_unit(p) && d - cfg.n_legs() + 1 > 0) {
        k = 0.5 * (d - cfg.n_legs() + 1);
    } else if (!(k > 0.0)) {
        k = 0.5;  // base d - 1 through the general dispatcher
    }
    return eps_expand_sigma(build_sigma(cfg).entries, p, d, k, cfg.dimension.epsilon_order, s);
}

// ---------------------------------------------------------------- recurrences

RMat sigma_eta(const RMat& sigma, double t) {
    const int N = sigma.size();
    RMat m(N - 1);
    for (int j = 0; j < N - 1; ++j)
        for (int l = 0; l < N - 1; ++l)
            m(j, l) = sigma(j, l) + t * (sigma(j, N - 1) + sigma(l, N - 1)) + t * t * sigma(N - 1, N - 1);
    return m;
}

RMat sigma_merged(const RMat& sigma, double v) {
    const int N = sigma.size();
    const int a = N - 2, b = N - 1;
    RMat m(N - 1);
    for (int j = 0; j < N - 2; ++j)
        for (int l = 0; l < N - 2; ++l) m(j, l) = sigma(j, l);
    for (int j = 0; j < N - 2; ++j) m(j, a) = m(a, j) = v * sigma(j, a) + (1.0 - v) * sigma(j, b);
    m(a, a) = v * v * sigma(a, a) + 2.0 * v * (1.0 - v) * sigma(a, b) + (1.0 - v) * (1.0 - v) * sigma(b, b);
    return m;
}

namespace {

double residual(const IntegralValue& lhs, const IntegralValue& rhs) {
    return std::abs(lhs.value - rhs.value) / std::abs(lhs.value);
}

}  // namespace

RecurrenceResult recurrence_check_lower(const KinematicConfig& cfg, const QuadratureSettings& s) {
    validate(cfg);
    const int N = cfg.n_legs();
    if (N < 2) throw Error(ErrorKind::OutOfRange, "recurrence needs at least two legs");
    const auto p = powers_of(cfg);
    const RMat sigma = build_sigma(cfg).entries;
    const double n = cfg.dimension.n;
    const int nu = total(p), nuN = p[N - 1];
    const std::vector<int> inner_p(p.begin(), p.end() - 1);
    const double n_in = n - 2.0 * nuN;
    RecurrenceResult r;
    r.lhs = evaluate_sigma(sigma, p, n, s);
    const QuadratureSettings in = nested(s);
    double inner_err = 0.0;
    auto f = [&](double t) -> cplx {
        const IntegralValue v = evaluate_sigma(sigma_eta(sigma, t), inner_p, n_in, in);
        inner_err = std::max(inner_err, v.abs_error);
        return std::pow(t, nuN - 1) * std::pow(1.0 + t, nu - n) * v.value;
    };
    const auto q = integrate_halfline<cplx>(f, s);
    const double pref = ((nuN % 2 == 0) ? 1.0 : -1.0) / std::tgamma(nuN);
    r.rhs.value = pref * q.value;
    r.rhs.abs_error = std::abs(pref) * (q.error + inner_err);
    r.rhs.method = Method::quadrature;
    r.rhs.converged = q.converged;
    r.residual = residual(r.lhs, r.rhs);
    return r;
}

RecurrenceResult recurrence_check_merge(const KinematicConfig& cfg, const QuadratureSettings& s) {
    validate(cfg);
    const int N = cfg.n_legs();
    if (N < 2) throw Error(ErrorKind::OutOfRange, "merge needs at least two legs");
    const auto p = powers_of(cfg);
    const RMat sigma = build_sigma(cfg).entries;
    const double n = cfg.dimension.n;
    const int na = p[N - 2], nb = p[N - 1];
    std::vector<int> inner_p(p.begin(), p.end() - 1);
    inner_p.back() = na + nb;
    RecurrenceResult r;
    // the merged matrix is a congruence of Sigma, but check anyway on a grid
    for (int i = 0; i <= 16; ++i) {
        if (classify_definiteness(sigma_merged(sigma, i / 16.0)) != PdStatus::positive_definite) {
            r.skipped_indefinite = true;
            return r;
        }
    }
    r.lhs = evaluate_sigma(sigma, p, n, s);
    const QuadratureSettings in = nested(s);
    double inner_err = 0.0;
    auto f = [&](double v) -> cplx {
        const IntegralValue iv = evaluate_sigma(sigma_merged(sigma, v), inner_p, n, in);
        inner_err = std::max(inner_err, iv.abs_error);
        return std::pow(v, na - 1) * std::pow(1.0 - v, nb - 1) * iv.value;
    };
    const auto q = adaptive<cplx>(f, 0.0, 1.0, s);
    const double inv_beta = std::tgamma(na + nb) / (std::tgamma(na) * std::tgamma(nb));
    r.rhs.value = inv_beta * q.value;
    r.rhs.abs_error = inv_beta * (q.error + inner_err);
    r.rhs.method = Method::quadrature;
    r.rhs.converged = q.converged;
    r.residual = residual(r.lhs, r.rhs);
    return r;
}

// ---------------------------------------------------------------- power excess

std::vector<PowerTerm> expand_power_excess(const KinematicConfig& cfg) {
    const auto p = powers_of(cfg);
    const int N = static_cast<int>(p.size());
    const double kd = total(p) - cfg.dimension.n;
    if (!is_integer(kd) || std::lround(kd) < 1)
        throw Error(ErrorKind::OutOfRange, "power excess expansion needs nu - n a positive integer");
    const int k = static_cast<int>(std::lround(kd));
    std::vector<PowerTerm> out;
    std::vector<int> ks(N, 0);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const double kfact = std::tgamma(k + 1.0);
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == N - 1) {
            ks[i] = left;
            double c = sign * kfact;
            PowerTerm t;
            for (int j = 0; j < N; ++j) {
                // (nu_j)_{k_j} / k_j!
                double poch = 1.0;
                for (int r = 0; r < ks[j]; ++r) poch *= (p[j] + r);
                c *= poch / std::tgamma(ks[j] + 1.0);
                t.powers.push_back(p[j] + ks[j]);
            }
            t.coefficient = c;
            t.n = total(p) + k;
            out.push_back(t);
            return;
        }
        for (int x = left; x >= 0; --x) {
            ks[i] = x;
            rec(i + 1, left - x);
        }
    };
    rec(0, k);
    return out;
}

}  // namespace oloop
