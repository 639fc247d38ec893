#pragma once

// Dense complex linear algebra used throughout: the bilinear trace pairing
// <a,b> = Tr(a b^T), Kronecker products with lexicographic block flattening,
// principal submatrices indexed by (i,k) pairs, and tolerance-aware
// rank / kernel / eigenvalue helpers built on Eigen.

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

namespace posmap {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// 1-based (row, column-within-block) pair; flattens lexicographically,
/// (i,k) -> (i-1)*block_size + (k-1).
struct IndexPair {
    int i = 1;
    int k = 1;
};

inline Index flat_index(const IndexPair& p, Index block_size) {
    return static_cast<Index>(p.i - 1) * block_size + (p.k - 1);
}

/// Numerical tolerances. rank_tol is relative to the largest singular value;
/// entry_tol is absolute for entrywise comparisons.
struct Tolerance {
    double rank_tol = 1e-9;
    double entry_tol = 1e-9;
};

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Bilinear pairing <a,b> = Tr(a b^T) = sum_ij a_ij b_ij.
/// Plain transpose, no conjugation: pairing(i*E11, i*E11) = -1.
inline Complex pairing(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("pairing: shape mismatch");
    return (a.array() * b.array()).sum();
}

/// Kronecker product; entry of the (i,j) block at position (k,l) is
/// a(i,j)*b(k,l), consistent with the lexicographic flattening.
inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

inline Matrix identity(Index n) { return Matrix::Identity(n, n); }

inline Matrix matrix_unit(Index rows, Index cols, Index i, Index j) {
    Matrix e = Matrix::Zero(rows, cols);
    e(i, j) = 1.0;
    return e;
}

inline bool is_hermitian(const Matrix& a, double entry_tol = 1e-9) {
    if (a.rows() != a.cols()) return false;
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= entry_tol;
}

inline Matrix hermitian_part(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

/// Principal submatrix of rho selecting flattened rows/columns of J in order.
inline Matrix principal_submatrix(const Matrix& rho, const std::vector<IndexPair>& J,
                                  Index block_size) {
    if (rho.rows() != rho.cols() || rho.rows() % block_size != 0)
        throw DimensionError("principal_submatrix: side not divisible by block size");
    const Index side = rho.rows();
    Matrix out(static_cast<Index>(J.size()), static_cast<Index>(J.size()));
    for (size_t r = 0; r < J.size(); ++r) {
        const Index fr = flat_index(J[r], block_size);
        if (fr < 0 || fr >= side) throw std::out_of_range("principal_submatrix: index out of range");
        for (size_t c = 0; c < J.size(); ++c) {
            const Index fc = flat_index(J[c], block_size);
            if (fc < 0 || fc >= side) throw std::out_of_range("principal_submatrix: index out of range");
            out(static_cast<Index>(r), static_cast<Index>(c)) = rho(fr, fc);
        }
    }
    return out;
}

inline Index numerical_rank(const Matrix& a, const Tolerance& tol = {}) {
    if (a.rows() == 0 || a.cols() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(a);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    Index r = 0;
    for (Index i = 0; i < s.size(); ++i)
        if (s(i) > tol.rank_tol * s(0)) ++r;
    return r;
}

/// Orthonormal basis of the numerical right null space; columns of the result.
inline Matrix kernel_basis(const Matrix& a, const Tolerance& tol = {}) {
    if (a.rows() == 0) return Matrix::Identity(a.cols(), a.cols());
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double smax = s.size() > 0 ? s(0) : 0.0;
    Index rank = 0;
    for (Index i = 0; i < s.size(); ++i)
        if (s(i) > tol.rank_tol * smax) ++rank;
    return svd.matrixV().rightCols(a.cols() - rank);
}

/// Smallest eigenvalue and a unit eigenvector of a (symmetrized first).
inline std::pair<double, Vector> eig_hermitian_min(const Matrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("eig_hermitian_min: non-square input");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(a));
    return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

inline double min_eigenvalue(const Matrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("min_eigenvalue: non-square input");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(a));
    return es.eigenvalues()(0);
}

/// Random unit vector on the complex sphere (Gaussian normalized).
inline Vector random_unit_vector(Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
    return v / v.norm();
}

inline Matrix random_matrix(Index rows, Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix a(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) a(i, j) = Complex(g(rng), g(rng));
    return a;
}

// ---------------------------------------------------------------------------
// Real coordinates on the space of Hermitian N x N matrices.
//
// Basis ordering: the N diagonal units E_pp, then for each p < q the pair
// (E_pq + E_qp)/sqrt(2) and (i E_pq - i E_qp)/sqrt(2). Real dimension N^2.

inline Index hermitian_dim(Index n) { return n * n; }

inline RealVector hermitian_coords(const Matrix& x) {
    const Index n = x.rows();
    RealVector c(n * n);
    Index t = 0;
    for (Index p = 0; p < n; ++p) c(t++) = x(p, p).real();
    const double s = std::sqrt(2.0);
    for (Index p = 0; p < n; ++p)
        for (Index q = p + 1; q < n; ++q) {
            c(t++) = s * x(p, q).real();
            c(t++) = s * x(p, q).imag();
        }
    return c;
}

inline Matrix hermitian_from_coords(const RealVector& c, Index n) {
    Matrix x = Matrix::Zero(n, n);
    Index t = 0;
    for (Index p = 0; p < n; ++p) x(p, p) = c(t++);
    const double s = 1.0 / std::sqrt(2.0);
    for (Index p = 0; p < n; ++p)
        for (Index q = p + 1; q < n; ++q) {
            const double re = c(t++) * s;
            const double im = c(t++) * s;
            x(p, q) = Complex(re, im);
            x(q, p) = Complex(re, -im);
        }
    return x;
}

/// Evaluates the real pair (Re f, Im f) of the linear functional
/// X |-> sum_pq G_pq X_pq over Hermitian X, in hermitian_coords order.
/// Used to turn complex matrix equations into real constraint rows.
inline std::pair<RealVector, RealVector> functional_rows(const Matrix& g) {
    const Index n = g.rows();
    RealVector re(n * n), im(n * n);
    Index t = 0;
    for (Index p = 0; p < n; ++p) {
        re(t) = g(p, p).real();
        im(t) = g(p, p).imag();
        ++t;
    }
    const double s = 1.0 / std::sqrt(2.0);
    for (Index p = 0; p < n; ++p)
        for (Index q = p + 1; q < n; ++q) {
            Complex f1 = s * (g(p, q) + g(q, p));
            Complex f2 = Complex(0, 1) * s * (g(p, q) - g(q, p));
            re(t) = f1.real();
            im(t) = f1.imag();
            ++t;
            re(t) = f2.real();
            im(t) = f2.imag();
            ++t;
        }
    return {re, im};
}

}  // namespace posmap
