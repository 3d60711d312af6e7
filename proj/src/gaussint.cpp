#include "orthantloop/gaussint.hpp"

#include <cmath>
#include <vector>

#include "orthantloop/parallel.hpp"

namespace oloop {

double i_single(double r_jj) {
    if (!(r_jj > 0.0)) throw Error(ErrorKind::NonPositiveDiagonal, "i_single: R_jj must be positive");
    return std::sqrt(2.0 * kPi / r_jj);
}

double i_pair(double rho_ij) {
    if (!(std::abs(rho_ij) < 1.0)) throw Error(ErrorKind::OutOfRange, "i_pair: |rho| must be below 1");
    return -2.0 * kPi * std::asin(rho_ij);
}

double partial_correlation(const RMat& rho3, int i, int j, int k) {
    const RMat r = normalize(rho3);
    const double a = 1.0 - r(i, k) * r(i, k), b = 1.0 - r(j, k) * r(j, k);
    if (a < 1e-14 || b < 1e-14)
        throw Error(ErrorKind::DegenerateConditioning, "conditioning leg is (anti)collinear with a pair leg");
    return (r(i, j) - r(i, k) * r(j, k)) / (std::sqrt(a) * std::sqrt(b));
}

double i_pair_conditional(const RMat& rho3, int i, int j, int k) {
    return -std::pow(2.0 * kPi, 1.5) * std::asin(partial_correlation(rho3, i, j, k));
}

namespace {

// Schur complement eliminating labels a and r, no allocation.
template <class T>
Matrix<T> condition_on_pair(const Matrix<T>& m, int a, int r) {
    const int n = m.size();
    const T d00 = m(a, a), d01 = m(a, r), d11 = m(r, r);
    const T det = d00 * d11 - d01 * d01;
    if (det == T(0)) throw Error(ErrorKind::DegenerateConditioning, "conditioning block is singular");
    const T i00 = d11 / det, i01 = -d01 / det, i11 = d00 / det;
    int keep[kMaxDim];
    int nk = 0;
    for (int k = 0; k < n; ++k)
        if (k != a && k != r) keep[nk++] = k;
    Matrix<T> s(nk);
    for (int x = 0; x < nk; ++x) {
        const T ba = m(keep[x], a), br = m(keep[x], r);
        const T ya = i00 * ba + i01 * br;
        const T yr = i01 * ba + i11 * br;
        for (int y = x; y < nk; ++y) {
            const T v = m(keep[x], keep[y]) - (ya * m(a, keep[y]) + yr * m(r, keep[y]));
            s(x, y) = v;
            s(y, x) = v;
        }
    }
    return s;
}

template <class T>
Matrix<T> scale_anchor(const Matrix<T>& c, int a, double u) {
    Matrix<T> m = c;
    for (int j = 0; j < c.size(); ++j) {
        if (j == a) continue;
        m(a, j) *= u;
        m(j, a) *= u;
    }
    return m;
}

template <class T>
T arcsine_term(const Matrix<T>& c2) {
    return (2.0 / kPi) * std::asin(correlation(c2, 0, 1));
}

}  // namespace

template <class T>
int default_anchor(const Matrix<T>& cov) {
    const int n = cov.size();
    int best = 0;
    double best_val = INFINITY;
    for (int a = 0; a < n; ++a) {
        double worst = 0.0;
        for (int r = 0; r < n; ++r)
            if (r != a) worst = std::max(worst, magnitude(correlation(cov, a, r)));
        if (worst < best_val) {
            best_val = worst;
            best = a;
        }
    }
    return best;
}

template <class T>
Est<T> orthant_term(const Matrix<T>& c, const QuadratureSettings& s, int anchor) {
    const int n = c.size();
    if (n == 0) return {T(1), 0.0};
    if (n % 2 == 1) throw Error(ErrorKind::OutOfRange, "orthant_term needs an even number of labels");
    if (n == 2) {
        const T rho = correlation(c, 0, 1);
        if constexpr (std::is_same_v<T, double>) {
            if (!(std::abs(rho) < 1.0)) throw Error(ErrorKind::DegenerateConditioning, "|rho| >= 1 in arcsine term");
        }
        return {(2.0 / kPi) * std::asin(rho), 1e-16};
    }
    const int a = anchor < 0 ? default_anchor(c) : anchor;
    if (a >= n) throw Error(ErrorKind::IndexOutOfRange, "anchor out of range");
    const QuadratureSettings inner = s.tightened(0.1);
    Est<T> total{T(0), 0.0};
    for (int r = 0; r < n; ++r) {
        if (r == a) continue;
        const T rho = correlation(c, a, r);
        if constexpr (std::is_same_v<T, double>) {
            if (!(std::abs(rho) < 1.0 - 1e-15))
                throw Error(ErrorKind::DegenerateConditioning, "1 - rho^2 u^2 vanishes inside the unit interval");
        }
        if (rho == T(0)) continue;
        double inner_err = 0.0;
        auto f = [&](double u) -> T {
            const Matrix<T> m = scale_anchor(c, a, u);
            const Matrix<T> sub = condition_on_pair(m, a, r);
            const Est<T> e = n == 4 ? Est<T>{arcsine_term(sub), 1e-16} : orthant_term(sub, inner, -1);
            inner_err = std::max(inner_err, e.error);
            return (2.0 / kPi) * rho / std::sqrt(T(1.0 - u * u * rho * rho)) * e.value;
        };
        const auto q = adaptive<T>(f, 0.0, 1.0, s);
        if (!q.converged) throw Error(ErrorKind::NonConvergence, "orthant term quadrature did not converge");
        total.value += q.value;
        total.error += q.error + inner_err * magnitude(rho);
    }
    return total;
}

double i_quad(const RMat& rho4, int anchor, const QuadratureSettings& s) {
    if (rho4.size() != 4) throw Error(ErrorKind::OutOfRange, "i_quad needs a 4x4 matrix");
    return orthant_term(rho4, s, anchor).value;
}

cplx i_quad(const CMat& rho4, int anchor, const QuadratureSettings& s) {
    if (rho4.size() != 4) throw Error(ErrorKind::OutOfRange, "i_quad needs a 4x4 matrix");
    return orthant_term(rho4, s, anchor).value;
}

RMat rho_tilde(const RMat& rho6, int anchor, int partner, double u) {
    if (anchor == partner) throw Error(ErrorKind::OutOfRange, "anchor and partner must differ");
    const double rho = correlation(rho6, anchor, partner);
    if (!(std::abs(rho * u) < 1.0)) throw Error(ErrorKind::DegenerateConditioning, "|rho_ij u| >= 1");
    return condition_on_pair(scale_anchor(normalize(rho6), anchor, u), anchor, partner);
}

double i_hex(const RMat& rho6, int anchor, const QuadratureSettings& s) {
    if (rho6.size() != 6) throw Error(ErrorKind::OutOfRange, "i_hex needs a 6x6 matrix");
    return -orthant_term(rho6, s, anchor).value;
}

cplx i_hex(const CMat& rho6, int anchor, const QuadratureSettings& s) {
    if (rho6.size() != 6) throw Error(ErrorKind::OutOfRange, "i_hex needs a 6x6 matrix");
    return -orthant_term(rho6, s, anchor).value;
}

template <class T>
OrthantBreakdown<T> orthant_breakdown(const Matrix<T>& cov, const QuadratureSettings& s) {
    const int n = cov.size();
    if (n > 7) throw Error(ErrorKind::AssemblyLimit, "orthant assembly is limited to 7 labels");
    OrthantBreakdown<T> out;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) out.pair_sum += arcsine_term(submatrix(cov, {i, j}));

    std::vector<std::vector<int>> quads, hexes;
    for (int mask = 0; mask < (1 << n); ++mask) {
        const int bits = __builtin_popcount(mask);
        if (bits != 4 && bits != 6) continue;
        std::vector<int> idx;
        for (int k = 0; k < n; ++k)
            if (mask & (1 << k)) idx.push_back(k);
        (bits == 4 ? quads : hexes).push_back(idx);
    }
    std::vector<std::vector<int>> all = quads;
    all.insert(all.end(), hexes.begin(), hexes.end());
    std::vector<Est<T>> terms(all.size());
    parallel_for(static_cast<int>(all.size()),
                 [&](int t) { terms[t] = orthant_term(submatrix(cov, all[t]), s, -1); });
    for (std::size_t t = 0; t < all.size(); ++t) {
        if (t < quads.size())
            out.quad_sum += terms[t].value;
        else
            out.hex_sum -= terms[t].value;
        out.error += terms[t].error;
    }
    return out;
}

template <class T>
Est<T> orthant_probability(const Matrix<T>& cov, const QuadratureSettings& s) {
    const auto b = orthant_breakdown(cov, s);
    const double scale = std::ldexp(1.0, -cov.size());
    return {scale * b.bracket(), scale * b.error};
}

template int default_anchor(const RMat&);
template int default_anchor(const CMat&);
template Est<double> orthant_term(const RMat&, const QuadratureSettings&, int);
template Est<cplx> orthant_term(const CMat&, const QuadratureSettings&, int);
template OrthantBreakdown<double> orthant_breakdown(const RMat&, const QuadratureSettings&);
template OrthantBreakdown<cplx> orthant_breakdown(const CMat&, const QuadratureSettings&);
template Est<double> orthant_probability(const RMat&, const QuadratureSettings&);
template Est<cplx> orthant_probability(const CMat&, const QuadratureSettings&);

}  // namespace oloop
