#include "orthantloop/npoint.hpp"

#include <cmath>
#include <string>

namespace oloop {

namespace {

void require(const KinematicConfig& cfg, int n_legs, int n) {
    validate(cfg);
    if (cfg.n_legs() != n_legs)
        throw Error(ErrorKind::OutOfRange, "expected " + std::to_string(n_legs) + " legs");
    if (std::abs(cfg.dimension.n - n) > 1e-12)
        throw Error(ErrorKind::OutOfRange, "expected dimension " + std::to_string(n));
    for (int p : cfg.powers)
        if (p != 1) throw Error(ErrorKind::OutOfRange, "explicit evaluators need unit powers");
}

double sign_n(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

template <class T>
Matrix<T> inverse_checked(const Matrix<T>& sigma) {
    if constexpr (std::is_same_v<T, double>) {
        return pd_inverse(sigma);
    } else {
        return inverse(sigma);
    }
}

IntegralValue finish(const Est<cplx>& e, Method m) {
    IntegralValue v;
    v.value = e.value;
    v.abs_error = e.error + 1e-15 * std::abs(e.value);
    v.method = m;
    return v;
}

}  // namespace

template <class T>
Est<cplx> j_unit_n_inv(const Matrix<T>& r, cplx sqrt_det_sigma, const QuadratureSettings& s) {
    const int n = r.size();
    const cplx pref = sign_n(n) * 2.0 * std::pow(kPi, 0.5 * n) / sqrt_det_sigma;
    const Est<T> p = orthant_probability(r, s);
    return {pref * cplx(p.value), std::abs(pref) * p.error};
}

template <class T>
Est<cplx> j_unit_nm1_inv(const Matrix<T>& r, cplx sqrt_det_sigma, const QuadratureSettings& s) {
    const int n = r.size();
    const cplx pref = sign_n(n) * std::pow(2.0 * kPi, 0.5 * n) / (sqrt_det_sigma * std::pow(2.0, 0.5 * (n - 1)));
    cplx sum = 0.0;
    double err = 0.0;
    for (int j = 0; j < n; ++j) {
        T w = T(0);
        for (int k = 0; k < n; ++k) w += r(k, j);
        const cplx weight = cplx(w) / std::sqrt(cplx(2.0 * kPi * r(j, j)));
        if (n == 1) {
            sum += weight;
            continue;
        }
        const Est<T> p = orthant_probability(schur_complement(r, {j}), s);
        sum += weight * cplx(p.value);
        err += std::abs(weight) * p.error;
    }
    return {pref * sum, std::abs(pref) * err};
}

template <class T>
Est<cplx> j_unit_n(const Matrix<T>& sigma, const QuadratureSettings& s) {
    return j_unit_n_inv(inverse_checked(sigma), sqrt_det_ldl(sigma), s);
}

template <class T>
Est<cplx> j_unit_nm1(const Matrix<T>& sigma, const QuadratureSettings& s) {
    return j_unit_nm1_inv(inverse_checked(sigma), sqrt_det_ldl(sigma), s);
}

template Est<cplx> j_unit_n(const RMat&, const QuadratureSettings&);
template Est<cplx> j_unit_n(const CMat&, const QuadratureSettings&);
template Est<cplx> j_unit_nm1(const RMat&, const QuadratureSettings&);
template Est<cplx> j_unit_nm1(const CMat&, const QuadratureSettings&);
template Est<cplx> j_unit_n_inv(const RMat&, cplx, const QuadratureSettings&);
template Est<cplx> j_unit_n_inv(const CMat&, cplx, const QuadratureSettings&);
template Est<cplx> j_unit_nm1_inv(const RMat&, cplx, const QuadratureSettings&);
template Est<cplx> j_unit_nm1_inv(const CMat&, cplx, const QuadratureSettings&);

cplx j2_2d_sigma(const RMat& sigma) {
    const double m1 = std::sqrt(sigma(0, 0)), m2 = std::sqrt(sigma(1, 1));
    const double c = sigma(0, 1) / (m1 * m2);
    const KinematicAngle a = angle(c, kallen(m1 * m1, m2 * m2, m1 * m1 + m2 * m2 - 2 * sigma(0, 1)));
    if (a.tau == cplx(0.0)) return 1.0 / (m1 * m2);
    const cplx st = std::sin(a.tau);
    if (std::abs(st) < 1e-300) throw Error(ErrorKind::SingularMatrix, "two-point function at threshold");
    return a.tau / (m1 * m2 * st);
}

double j3_3d_sigma(const RMat& sigma) {
    const RMat r = pd_inverse(sigma);
    double omega = -kPi;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) omega += std::acos(-correlation(r, i, j));
    return -std::sqrt(kPi) * omega / (2.0 * sqrt_det_ldl(sigma).real());
}

IntegralValue j2_2d(const KinematicConfig& cfg) {
    require(cfg, 2, 2);
    const SigmaMatrix sm = build_sigma(cfg);
    IntegralValue v;
    v.value = j2_2d_sigma(sm.entries);
    v.abs_error = 1e-15 * std::abs(v.value);
    return v;
}

IntegralValue j3_3d(const KinematicConfig& cfg) {
    require(cfg, 3, 3);
    IntegralValue v;
    v.value = j3_3d_sigma(build_sigma(cfg).entries);
    v.abs_error = 1e-15 * std::abs(v.value);
    return v;
}

IntegralValue j3_2d(const KinematicConfig& cfg, const QuadratureSettings& s) {
    require(cfg, 3, 2);
    return finish(j_unit_nm1(build_sigma(cfg).entries, s), Method::closed_form);
}

IntegralValue j4_4d(const KinematicConfig& cfg, const QuadratureSettings& s) {
    require(cfg, 4, 4);
    return finish(j_unit_n(build_sigma(cfg).entries, s), Method::quadrature);
}

IntegralValue j5_5d(const KinematicConfig& cfg, const QuadratureSettings& s) {
    require(cfg, 5, 5);
    return finish(j_unit_n(build_sigma(cfg).entries, s), Method::quadrature);
}

IntegralValue j6_6d(const KinematicConfig& cfg, const QuadratureSettings& s) {
    require(cfg, 6, 6);
    return finish(j_unit_n(build_sigma(cfg).entries, s), Method::quadrature);
}

IntegralValue j7_7d(const KinematicConfig& cfg, const QuadratureSettings& s) {
    require(cfg, 7, 7);
    return finish(j_unit_n(build_sigma(cfg).entries, s), Method::quadrature);
}

IntegralValue j5_4d(const KinematicConfig& cfg, const QuadratureSettings& s) {
    require(cfg, 5, 4);
    return finish(j_unit_nm1(build_sigma(cfg).entries, s), Method::quadrature);
}

IntegralValue j_unit_integer(const RMat& sigma, int n, const QuadratureSettings& s) {
    const int N = sigma.size();
    if (n == N) {
        if (N == 2) {
            IntegralValue v;
            v.value = j2_2d_sigma(sigma);
            v.abs_error = 1e-15 * std::abs(v.value);
            return v;
        }
        if (N == 3) {
            IntegralValue v;
            v.value = j3_3d_sigma(sigma);
            v.abs_error = 1e-15 * std::abs(v.value);
            return v;
        }
        return finish(j_unit_n(sigma, s), Method::quadrature);
    }
    if (n == N - 1) return finish(j_unit_nm1(sigma, s), N <= 3 ? Method::closed_form : Method::quadrature);
    throw Error(ErrorKind::Unsupported, "integer evaluator covers n = N and n = N - 1 only");
}

}  // namespace oloop
