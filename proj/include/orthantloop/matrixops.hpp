#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <type_traits>
#include <vector>

#include "orthantloop/common.hpp"

namespace oloop {

// Square matrix with inline storage, sized for at most kMaxDim rows.
template <class T>
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(int n, T fill = T{}) : n_(n) {
        if (n < 0 || n > kMaxDim)
            throw Error(ErrorKind::IndexOutOfRange, "matrix size out of range");
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) (*this)(i, j) = fill;
    }
    Matrix(std::initializer_list<std::initializer_list<T>> rows) : Matrix(static_cast<int>(rows.size())) {
        int i = 0;
        for (const auto& row : rows) {
            int j = 0;
            for (const auto& v : row) (*this)(i, j++) = v;
            ++i;
        }
    }

    static Matrix identity(int n) {
        Matrix m(n);
        for (int i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    int size() const { return n_; }
    T& operator()(int i, int j) { return a_[i * kMaxDim + j]; }
    const T& operator()(int i, int j) const { return a_[i * kMaxDim + j]; }

private:
    int n_ = 0;
    std::array<T, kMaxDim * kMaxDim> a_{};
};

using RMat = Matrix<double>;
using CMat = Matrix<cplx>;

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const cplx& z) { return std::abs(z); }

inline CMat to_complex(const RMat& m) {
    CMat c(m.size());
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) c(i, j) = m(i, j);
    return c;
}

template <class T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b) {
    const int n = a.size();
    Matrix<T> c(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const T aik = a(i, k);
            for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

template <class T>
bool is_symmetric(const Matrix<T>& m, double tol = 0.0) {
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < i; ++j)
            if (magnitude(m(i, j) - m(j, i)) > tol) return false;
    return true;
}

// Gauss-Jordan with partial pivoting.
template <class T>
Matrix<T> inverse(const Matrix<T>& m) {
    const int n = m.size();
    Matrix<T> a = m;
    Matrix<T> inv = Matrix<T>::identity(n);
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = magnitude(a(col, col));
        for (int r = col + 1; r < n; ++r)
            if (magnitude(a(r, col)) > best) {
                best = magnitude(a(r, col));
                piv = r;
            }
        if (best == 0.0) throw Error(ErrorKind::SingularMatrix, "matrix is singular");
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(a(col, j), a(piv, j));
                std::swap(inv(col, j), inv(piv, j));
            }
        const T d = T(1) / a(col, col);
        for (int j = 0; j < n; ++j) {
            a(col, j) *= d;
            inv(col, j) *= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const T f = a(r, col);
            if (f == T(0)) continue;
            for (int j = 0; j < n; ++j) {
                a(r, j) -= f * a(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

template <class T>
T determinant(const Matrix<T>& m) {
    const int n = m.size();
    Matrix<T> a = m;
    T det = T(1);
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = magnitude(a(col, col));
        for (int r = col + 1; r < n; ++r)
            if (magnitude(a(r, col)) > best) {
                best = magnitude(a(r, col));
                piv = r;
            }
        if (best == 0.0) return T(0);
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
            det = -det;
        }
        det *= a(col, col);
        for (int r = col + 1; r < n; ++r) {
            const T f = a(r, col) / a(col, col);
            for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
        }
    }
    return det;
}

// Square root of det via unpivoted LDL^T, multiplying principal roots of the
// pivots. For complex symmetric matrices with positive definite real part the
// pivots stay in the right half plane, so this is the continuous branch.
template <class T>
cplx sqrt_det_ldl(const Matrix<T>& m) {
    const int n = m.size();
    Matrix<T> a = m;
    cplx prod = 1.0;
    for (int k = 0; k < n; ++k) {
        const T d = a(k, k);
        if (d == T(0)) throw Error(ErrorKind::SingularMatrix, "zero pivot in LDL factorization");
        prod *= std::sqrt(cplx(d));
        for (int i = k + 1; i < n; ++i) {
            const T f = a(i, k) / d;
            for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return prod;
}

template <class T>
Matrix<T> submatrix(const Matrix<T>& m, const std::vector<int>& idx) {
    const int k = static_cast<int>(idx.size());
    Matrix<T> s(k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) s(i, j) = m(idx[i], idx[j]);
    return s;
}

template <class T>
Matrix<T> delete_index(const Matrix<T>& m, int i) {
    if (i < 0 || i >= m.size()) throw Error(ErrorKind::IndexOutOfRange, "delete_index: index out of range");
    std::vector<int> keep;
    for (int k = 0; k < m.size(); ++k)
        if (k != i) keep.push_back(k);
    return submatrix(m, keep);
}

template <class T>
Matrix<T> permute(const Matrix<T>& m, const std::vector<int>& order) {
    return submatrix(m, order);
}

// Schur complement of the block indexed by elim (at most two indices here,
// the general case goes through inverse()).
template <class T>
Matrix<T> schur_complement(const Matrix<T>& m, const std::vector<int>& elim) {
    const int n = m.size();
    std::vector<int> keep;
    for (int k = 0; k < n; ++k) {
        bool drop = false;
        for (int e : elim) drop = drop || (e == k);
        if (!drop) keep.push_back(k);
    }
    const int ne = static_cast<int>(elim.size());
    Matrix<T> dinv = inverse(submatrix(m, elim));
    const int nk = static_cast<int>(keep.size());
    Matrix<T> s(nk);
    for (int i = 0; i < nk; ++i)
        for (int j = i; j < nk; ++j) {
            T acc = m(keep[i], keep[j]);
            for (int p = 0; p < ne; ++p)
                for (int q = 0; q < ne; ++q) acc -= m(keep[i], elim[p]) * dinv(p, q) * m(elim[q], keep[j]);
            s(i, j) = acc;
            s(j, i) = acc;
        }
    return s;
}

// Normalized correlation C_ij / (sqrt C_ii sqrt C_jj), principal roots.
template <class T>
T correlation(const Matrix<T>& c, int i, int j) {
    if constexpr (std::is_same_v<T, double>) {
        return c(i, j) / std::sqrt(c(i, i) * c(j, j));
    } else {
        return c(i, j) / (std::sqrt(c(i, i)) * std::sqrt(c(j, j)));
    }
}

template <class T>
Matrix<T> normalize(const Matrix<T>& c) {
    const int n = c.size();
    Matrix<T> r(n);
    for (int i = 0; i < n; ++i) {
        r(i, i) = T(1);
        for (int j = 0; j < i; ++j) r(i, j) = r(j, i) = correlation(c, i, j);
    }
    return r;
}

enum class PdStatus { positive_definite, positive_semidefinite, indefinite };

const char* pd_status_name(PdStatus s);

// Diagonally pivoted symmetric elimination with pivot tolerance relative to
// the largest diagonal entry.
PdStatus classify_definiteness(const RMat& m, double rel_tol = 1e-12);

// Lower Cholesky factor; throws NotPositiveDefinite.
RMat cholesky(const RMat& m);

double condition_number_1(const RMat& m);

// Signed cofactors (-1)^(i+j) det(minor_ij).
RMat cofactors(const RMat& m);
RMat cofactors_by_minors(const RMat& m);

struct CorrelationData {
    RMat r_matrix;
    RMat rho;
    RMat rho_from_cofactors;
    RMat cofactors;
    double det_sigma = 0.0;
    double d_reduced = 0.0;
};

// Symmetrized inverse of a positive definite matrix. Semidefinite input throws
// SingularMatrix, indefinite input NotPositiveDefinite. No determinant floor, so
// rank-one dominated matrices like Sigma + tau 11^T pass.
RMat pd_inverse(const RMat& sigma);

// Requires positive definite sigma; throws SingularMatrix when
// |det| < 1e-12 * prod diag.
CorrelationData correlation_data(const RMat& sigma);

}  // namespace oloop
