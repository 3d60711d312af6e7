#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "orthantloop/common.hpp"

namespace oloop {

enum class InfiniteMap { rational, exponential };
enum class EndpointWeight { none, arcsine };

struct QuadratureSettings {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;
    double contour_abscissa_c = 0.0;    // 0 lets the caller pick
    double contour_halfheight_T = 0.0;  // starting half height, 0 means 16 c
    InfiniteMap infinite_domain_map = InfiniteMap::rational;
    EndpointWeight endpoint_weight = EndpointWeight::none;

    QuadratureSettings tightened(double factor) const {
        QuadratureSettings s = *this;
        s.rel_tol *= factor;
        s.abs_tol *= factor;
        return s;
    }
};

// Small complex vector used for integrands that return several moments at once.
struct CVec {
    std::vector<cplx> v;
    CVec() = default;
    explicit CVec(std::size_t n) : v(n) {}
    CVec& operator+=(const CVec& o) {
        if (v.size() < o.v.size()) v.resize(o.v.size());
        for (std::size_t i = 0; i < o.v.size(); ++i) v[i] += o.v[i];
        return *this;
    }
    CVec& operator-=(const CVec& o) {
        if (v.size() < o.v.size()) v.resize(o.v.size());
        for (std::size_t i = 0; i < o.v.size(); ++i) v[i] -= o.v[i];
        return *this;
    }
    CVec& operator*=(double s) {
        for (auto& x : v) x *= s;
        return *this;
    }
};
inline CVec operator+(CVec a, const CVec& b) { return a += b; }
inline CVec operator-(CVec a, const CVec& b) { return a -= b; }
inline CVec operator*(double s, CVec a) { return a *= s; }

inline double qnorm(double x) { return std::abs(x); }
inline double qnorm(const cplx& z) { return std::abs(z); }
inline double qnorm(const CVec& x) {
    double m = 0.0;
    for (const auto& z : x.v) m = std::max(m, std::abs(z));
    return m;
}
inline double qabs_dev(double x, double mean) { return std::abs(x - mean); }
inline double qabs_dev(const cplx& x, const cplx& mean) { return std::abs(x - mean); }
inline double qabs_dev(const CVec& x, const CVec& mean) { return qnorm(x - mean); }

template <class V>
struct QuadResult {
    V value{};
    double error = 0.0;
    bool converged = true;
    long evaluations = 0;
};

namespace detail {

// Gauss-Kronrod 10/21 nodes and weights.
inline constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452, 0.930157491355708226001207180059508,
    0.865063366688984510732096688423493, 0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784, 0.294392862701460198131126603103866,
    0.148874338981631210884826001129720, 0.0};
inline constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390, 0.054755896574351996031381300244580,
    0.075039674810919952767043140916190, 0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525535316, 0.134709217311473325928054001771707, 0.142775938577060080797094273138717,
    0.147739104901338491374841515972068, 0.149445554002916905664936468389821};
inline constexpr double kWg[5] = {0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
                                  0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
                                  0.295524224714752870173892994651338};

template <class V, class F>
void gk21(F& f, double a, double b, V& result, double& error) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    V fv[21];
    fv[0] = f(center);
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        fv[1 + 2 * j] = f(center - dx);
        fv[2 + 2 * j] = f(center + dx);
    }
    V kron = kWgk[10] * fv[0];
    V gauss = 0.0 * fv[0];
    double resabs = kWgk[10] * qnorm(fv[0]);
    for (int j = 0; j < 10; ++j) {
        const V pair = fv[1 + 2 * j] + fv[2 + 2 * j];
        kron = kron + kWgk[j] * pair;
        resabs += kWgk[j] * (qnorm(fv[1 + 2 * j]) + qnorm(fv[2 + 2 * j]));
        if (j % 2 == 1) gauss = gauss + kWg[j / 2] * pair;
    }
    const V mean = 0.5 * kron;
    double resasc = kWgk[10] * qabs_dev(fv[0], mean);
    for (int j = 0; j < 10; ++j)
        resasc += kWgk[j] * (qabs_dev(fv[1 + 2 * j], mean) + qabs_dev(fv[2 + 2 * j], mean));
    result = half * kron;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = qnorm(kron - gauss) * std::abs(half);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    error = err;
}

}  // namespace detail

// Adaptive bisection driven by the 21-point Kronrod rule.
template <class V, class F>
QuadResult<V> adaptive(F&& f, double a, double b, const QuadratureSettings& s) {
    struct Piece {
        double a, b, err;
        V val;
        bool operator<(const Piece& o) const { return err < o.err; }
    };
    QuadResult<V> out;
    std::priority_queue<Piece> heap;
    std::vector<Piece> done;
    V total{};
    double total_err = 0.0;
    {
        Piece p{a, b, 0.0, V{}};
        detail::gk21<V>(f, a, b, p.val, p.err);
        total = p.val;
        total_err = p.err;
        heap.push(p);
    }
    out.evaluations = 21;
    int pieces = 1;
    while (!heap.empty()) {
        const double target = std::max(s.abs_tol, s.rel_tol * qnorm(total));
        if (total_err <= target) break;
        if (pieces >= s.max_subdivisions) {
            out.converged = false;
            break;
        }
        Piece p = heap.top();
        heap.pop();
        const double mid = 0.5 * (p.a + p.b);
        if (!(mid > p.a && mid < p.b) || (p.b - p.a) < 1e-15 * std::max(1.0, std::abs(mid))) {
            done.push_back(p);
            if (heap.empty()) {
                out.converged = total_err <= target;
                break;
            }
            continue;
        }
        Piece l{p.a, mid, 0.0, V{}}, r{mid, p.b, 0.0, V{}};
        detail::gk21<V>(f, l.a, l.b, l.val, l.err);
        detail::gk21<V>(f, r.a, r.b, r.val, r.err);
        out.evaluations += 42;
        total = total - p.val + l.val + r.val;
        total_err += l.err + r.err - p.err;
        heap.push(l);
        heap.push(r);
        ++pieces;
    }
    while (!heap.empty()) {
        done.push_back(heap.top());
        heap.pop();
    }
    // resum in left-to-right order so rounding does not depend on the heap history
    std::sort(done.begin(), done.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });
    V sum = 0.0 * done.front().val;
    double err = 0.0;
    for (const auto& p : done) {
        sum = sum + p.val;
        err += p.err;
    }
    out.value = sum;
    out.error = err;
    return out;
}

template <class V, class F>
QuadResult<V> integrate_unit(F&& f, const QuadratureSettings& s) {
    if (s.endpoint_weight == EndpointWeight::arcsine) {
        auto g = [&](double th) { return std::cos(th) * f(std::sin(th)); };
        return adaptive<V>(g, 0.0, kPi / 2, s);
    }
    return adaptive<V>(f, 0.0, 1.0, s);
}

template <class V, class F>
QuadResult<V> integrate_halfline(F&& f, const QuadratureSettings& s) {
    if (s.infinite_domain_map == InfiniteMap::exponential) {
        auto g = [&](double t) { return (1.0 / (1.0 - t)) * f(-std::log1p(-t)); };
        return adaptive<V>(g, 0.0, 1.0, s);
    }
    auto g = [&](double t) {
        const double w = 1.0 - t;
        return (1.0 / (w * w)) * f(t / w);
    };
    return adaptive<V>(g, 0.0, 1.0, s);
}

IntegralValue integrate_01(const std::function<cplx(double)>& f, const QuadratureSettings& s = {});
IntegralValue integrate_0inf(const std::function<cplx(double)>& f, const QuadratureSettings& s = {});

struct ContourResult {
    IntegralValue value;
    double tail_estimate = 0.0;
    double final_halfheight = 0.0;
};

// (1/2 pi i) int_{c - i inf}^{c + i inf} f(s) ds along Re s = settings.contour_abscissa_c.
// conjugate_symmetric declares f(conj s) = conj f(s), halving the work.
// Throws TailDominates when the tail estimate stays above 10 rel_tol |value|.
ContourResult integrate_contour_detailed(const std::function<cplx(cplx)>& f, const QuadratureSettings& s,
                                         bool conjugate_symmetric = false);
IntegralValue integrate_contour(const std::function<cplx(cplx)>& f, const QuadratureSettings& s,
                                bool conjugate_symmetric = false);

}  // namespace oloop
