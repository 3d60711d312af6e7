#include "orthantloop/matrixops.hpp"

#include <algorithm>
#include <cmath>

namespace oloop {

const char* pd_status_name(PdStatus s) {
    switch (s) {
        case PdStatus::positive_definite: return "positive_definite";
        case PdStatus::positive_semidefinite: return "positive_semidefinite";
        case PdStatus::indefinite: return "indefinite";
    }
    return "unknown";
}

PdStatus classify_definiteness(const RMat& m, double rel_tol) {
    const int n = m.size();
    RMat a = m;
    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(a(i, i)));
    if (scale == 0.0) return n == 0 ? PdStatus::positive_definite : PdStatus::positive_semidefinite;
    const double tol = rel_tol * scale;

    std::vector<int> left(n);
    for (int i = 0; i < n; ++i) left[i] = i;
    bool semidefinite = false;
    while (!left.empty()) {
        auto it = std::max_element(left.begin(), left.end(), [&](int x, int y) { return a(x, x) < a(y, y); });
        const int p = *it;
        const double d = a(p, p);
        if (d < -tol) return PdStatus::indefinite;
        if (d <= tol) {
            // what is left must vanish for a semidefinite matrix
            for (int i : left)
                for (int j : left)
                    if (std::abs(a(i, j)) > std::sqrt(tol * scale)) return PdStatus::indefinite;
            semidefinite = true;
            break;
        }
        left.erase(it);
        for (int i : left)
            for (int j : left) a(i, j) -= a(i, p) * a(p, j) / d;
    }
    return semidefinite ? PdStatus::positive_semidefinite : PdStatus::positive_definite;
}

RMat cholesky(const RMat& m) {
    const int n = m.size();
    RMat l(n);
    for (int j = 0; j < n; ++j) {
        double s = m(j, j);
        for (int k = 0; k < j; ++k) s -= l(j, k) * l(j, k);
        if (!(s > 0.0)) throw Error(ErrorKind::NotPositiveDefinite, "cholesky: matrix is not positive definite");
        l(j, j) = std::sqrt(s);
        for (int i = j + 1; i < n; ++i) {
            double t = m(i, j);
            for (int k = 0; k < j; ++k) t -= l(i, k) * l(j, k);
            l(i, j) = t / l(j, j);
        }
    }
    return l;
}

static double norm_1(const RMat& m) {
    double best = 0.0;
    for (int j = 0; j < m.size(); ++j) {
        double s = 0.0;
        for (int i = 0; i < m.size(); ++i) s += std::abs(m(i, j));
        best = std::max(best, s);
    }
    return best;
}

double condition_number_1(const RMat& m) {
    try {
        return norm_1(m) * norm_1(inverse(m));
    } catch (const Error&) {
        return INFINITY;
    }
}

RMat cofactors_by_minors(const RMat& m) {
    const int n = m.size();
    RMat c(n);
    if (n == 1) {
        c(0, 0) = 1.0;
        return c;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            RMat minor(n - 1);
            for (int r = 0, rr = 0; r < n; ++r) {
                if (r == i) continue;
                for (int s = 0, ss = 0; s < n; ++s) {
                    if (s == j) continue;
                    minor(rr, ss++) = m(r, s);
                }
                ++rr;
            }
            c(i, j) = (((i + j) % 2) ? -1.0 : 1.0) * determinant(minor);
        }
    return c;
}

RMat cofactors(const RMat& m) {
    const int n = m.size();
    if (condition_number_1(m) > 1e8) return cofactors_by_minors(m);
    const double det = determinant(m);
    const RMat inv = inverse(m);
    RMat c(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c(i, j) = det * inv(j, i);
    return c;
}

RMat pd_inverse(const RMat& sigma) {
    const PdStatus st = classify_definiteness(sigma);
    if (st == PdStatus::positive_semidefinite) throw Error(ErrorKind::SingularMatrix, "matrix is singular");
    if (st == PdStatus::indefinite) throw Error(ErrorKind::NotPositiveDefinite, "matrix is not positive definite");
    RMat r = inverse(sigma);
    for (int i = 0; i < r.size(); ++i)
        for (int j = 0; j < i; ++j) r(i, j) = r(j, i) = 0.5 * (r(i, j) + r(j, i));
    return r;
}

CorrelationData correlation_data(const RMat& sigma) {
    const int n = sigma.size();
    double diag_prod = 1.0;
    for (int i = 0; i < n; ++i) {
        if (!(sigma(i, i) > 0.0))
            throw Error(ErrorKind::NonPositiveDiagonal, "correlation_data: non-positive diagonal entry");
        diag_prod *= sigma(i, i);
    }
    CorrelationData cd;
    cd.det_sigma = determinant(sigma);
    if (std::abs(cd.det_sigma) < 1e-12 * diag_prod)
        throw Error(ErrorKind::SingularMatrix, "correlation_data: determinant below 1e-12 * prod m_i^2");
    if (classify_definiteness(sigma) != PdStatus::positive_definite)
        throw Error(ErrorKind::NotPositiveDefinite, "correlation_data: sigma is not positive definite");
    cd.d_reduced = cd.det_sigma / diag_prod;
    cd.r_matrix = inverse(sigma);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) {
            const double avg = 0.5 * (cd.r_matrix(i, j) + cd.r_matrix(j, i));
            cd.r_matrix(i, j) = cd.r_matrix(j, i) = avg;
        }
    cd.cofactors = cofactors(sigma);
    cd.rho = normalize(cd.r_matrix);
    cd.rho_from_cofactors = normalize(cd.cofactors);
    return cd;
}

}  // namespace oloop
