#pragma once

// Linear maps M_m -> M_n represented canonically by their Choi matrices.
//
// The Choi matrix of phi is C = sum_ij |i><j| (x) phi(|i><j|); its
// ((i,k),(j,l)) entry is the (k,l) entry of phi(|i><j|). All pairings are
// the bilinear <a,b> = Tr(a b^T), under which <a (x) b, C_phi> = <b, phi(a)>.

#include <functional>
#include <utility>

#include "posmap/matrix.hpp"

namespace posmap {

struct MapRep {
    Index m = 0;  ///< input side dimension (acts on M_m)
    Index n = 0;  ///< output side dimension (lands in M_n)
    Matrix choi;  ///< (m*n) x (m*n)
};

inline bool is_hermiticity_preserving(const MapRep& phi, double entry_tol = 1e-9) {
    return is_hermitian(phi.choi, entry_tol);
}

/// Builds the Choi matrix of a linear map given by its action on matrices.
inline MapRep choi_of(Index m, Index n, const std::function<Matrix(const Matrix&)>& apply_fn) {
    Matrix c = Matrix::Zero(m * n, m * n);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j) {
            Matrix img = apply_fn(matrix_unit(m, m, i, j));
            if (img.rows() != n || img.cols() != n)
                throw DimensionError("choi_of: apply_fn returned wrong shape");
            c.block(i * n, j * n, n, n) = img;
        }
    return MapRep{m, n, std::move(c)};
}

inline MapRep map_of_choi(Matrix choi, Index m, Index n) {
    if (choi.rows() != m * n || choi.cols() != m * n)
        throw DimensionError("map_of_choi: Choi shape inconsistent with (m,n)");
    return MapRep{m, n, std::move(choi)};
}

/// Ad_s : x -> s* x s for an m x n matrix s.
inline MapRep ad(const Matrix& s) {
    const Index m = s.rows(), n = s.cols();
    return choi_of(m, n, [&](const Matrix& x) { return s.adjoint() * x * s; });
}

inline MapRep identity_map(Index r) {
    return choi_of(r, r, [](const Matrix& x) { return x; });
}

inline MapRep transpose_map(Index r) {
    return choi_of(r, r, [](const Matrix& x) { return x.transpose().eval(); });
}

/// phi(a) via the contraction phi(a)_{kl} = sum_ij a_ij C_{(i,k),(j,l)}.
inline Matrix apply_map(const MapRep& phi, const Matrix& a) {
    if (a.rows() != phi.m || a.cols() != phi.m)
        throw DimensionError("apply: input shape mismatch");
    Matrix out = Matrix::Zero(phi.n, phi.n);
    for (Index i = 0; i < phi.m; ++i)
        for (Index j = 0; j < phi.m; ++j)
            out += a(i, j) * phi.choi.block(i * phi.n, j * phi.n, phi.n, phi.n);
    return out;
}

/// Flip of a Choi matrix: the tensor-factor swap (i,k),(j,l) -> (k,i),(l,j).
inline Matrix flip(const Matrix& choi, Index m, Index n) {
    Matrix out(m * n, m * n);
    for (Index i = 0; i < m; ++i)
        for (Index k = 0; k < n; ++k)
            for (Index j = 0; j < m; ++j)
                for (Index l = 0; l < n; ++l)
                    out(k * m + i, l * m + j) = choi(i * n + k, j * n + l);
    return out;
}

/// Adjoint map phi* with <a, phi*(b)> = <phi(a), b>; its Choi matrix is the
/// flip of C_phi.
inline MapRep adjoint(const MapRep& phi) {
    return MapRep{phi.n, phi.m, flip(phi.choi, phi.m, phi.n)};
}

/// phi2 after phi1 (mathematical order phi2 o phi1), built over matrix units.
inline MapRep compose(const MapRep& phi2, const MapRep& phi1) {
    if (phi1.n != phi2.m) throw DimensionError("compose: inner dimensions mismatch");
    return choi_of(phi1.m, phi2.n,
                   [&](const Matrix& x) { return apply_map(phi2, apply_map(phi1, x)); });
}

/// lambda_{i,j} : M_2 -> M_r placing a 2x2 matrix on rows/columns {i,j}
/// (1-based, i != j). Its adjoint extracts the {i,j} principal 2x2 block.
inline MapRep lambda_embed(int i, int j, Index r) {
    if (i == j) throw std::invalid_argument("lambda_embed: indices must differ");
    if (i < 1 || j < 1 || i > r || j > r) throw std::out_of_range("lambda_embed: index out of range");
    return choi_of(2, r, [&](const Matrix& a) {
        Matrix out = Matrix::Zero(r, r);
        out(i - 1, i - 1) = a(0, 0);
        out(i - 1, j - 1) = a(0, 1);
        out(j - 1, i - 1) = a(1, 0);
        out(j - 1, j - 1) = a(1, 1);
        return out;
    });
}

/// The corner embedding S: M_r -> M_n and corner compression T: M_n -> M_r,
/// with T = S*.
inline std::pair<MapRep, MapRep> st_maps(Index r, Index n) {
    if (r > n) throw std::invalid_argument("st_maps: requires r <= n");
    MapRep S = choi_of(r, n, [&](const Matrix& a) {
        Matrix out = Matrix::Zero(n, n);
        out.topLeftCorner(r, r) = a;
        return out;
    });
    MapRep T = choi_of(n, r, [&](const Matrix& a) {
        return a.topLeftCorner(r, r).eval();
    });
    return {std::move(S), std::move(T)};
}

struct SvdReduction {
    Matrix u;      ///< m x m, nonsingular
    Matrix sigma;  ///< m x n, sum_{i<=r} E_ii
    Matrix v;      ///< n x n, unitary
    Index r = 0;   ///< numerical rank
};

/// Writes s = u * sigma * v^* with sigma = sum_{i<=r}|i><i|, singular values
/// absorbed into u.
inline SvdReduction svd_reduce(const Matrix& s, const Tolerance& tol = {}) {
    if (s.norm() == 0.0) throw std::invalid_argument("svd_reduce: zero matrix");
    const Index m = s.rows(), n = s.cols();
    Eigen::JacobiSVD<Matrix> svd(s, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Index r = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol.rank_tol * sv(0)) ++r;
    Matrix d = Matrix::Identity(m, m);
    for (Index i = 0; i < r; ++i) d(i, i) = sv(i);
    SvdReduction out;
    out.u = svd.matrixU() * d;
    out.sigma = Matrix::Zero(m, n);
    for (Index i = 0; i < r; ++i) out.sigma(i, i) = 1.0;
    out.v = svd.matrixV();
    out.r = r;
    return out;
}

/// Rank-r partial isometry shape sum_{i<=r}|i><i| in M_{m x n}.
inline Matrix sigma_matrix(Index m, Index n, Index r) {
    Matrix s = Matrix::Zero(m, n);
    for (Index i = 0; i < r; ++i) s(i, i) = 1.0;
    return s;
}

/// <psi, phi> = <C_psi, C_phi>.
inline Complex pairing_maps(const MapRep& psi, const MapRep& phi) {
    return pairing(psi.choi, phi.choi);
}

/// <rho, phi> = <rho, C_phi>; agrees with pairing_maps when rho = C_psi.
inline Complex pairing_state_map(const Matrix& rho, const MapRep& phi) {
    return pairing(rho, phi.choi);
}

}  // namespace posmap
