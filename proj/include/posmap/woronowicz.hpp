#pragma once

// Exposedness criterion for completely positive maps through the kernel of
// the hat matrix.
//
// For phi: M_m -> M_n, the hat matrix is the n x (m^2 n) block row
// [phi(E_11) ... phi(E_1m) phi(E_21) ...] acting on C^m (x) C^m (x) C^n by
// hat(phi)(x (x) y (x) z) = phi(|x><y_bar|) z. The subspace N_phi is spanned
// by the vectors xi (x) xi_bar (x) eta with phi(|xi><xi|) eta = 0; it always
// sits inside ker hat(phi). A unital, irreducible completely positive phi
// generates an exposed ray of the cone of completely positive maps iff
// N_phi = ker hat(phi).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "posmap/map_algebra.hpp"

namespace posmap {

/// The n x (m^2 n) hat matrix; column ((i*m + j)*n + k) is phi(E_ij) e_k.
inline Matrix hat_matrix(const MapRep& phi) {
    const Index m = phi.m, n = phi.n;
    Matrix h(n, m * m * n);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j)
            h.middleCols((i * m + j) * n, n) = phi.choi.block(i * n, j * n, n, n);
    return h;
}

/// vec_rowmajor(a) (x) eta, the coordinates of a (x) eta in C^{m^2 n}.
inline Vector tensor_vector(const Matrix& a, const Vector& eta) {
    const Index m = a.rows(), n = eta.size();
    Vector w(m * m * n);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j) w.segment((i * m + j) * n, n) = a(i, j) * eta;
    return w;
}

inline Index hat_kernel_dim(const MapRep& phi, const Tolerance& tol = {}) {
    return phi.m * phi.m * phi.n - numerical_rank(hat_matrix(phi), tol);
}

namespace detail {

/// Appends w to the orthonormal column set q if its residual after two
/// Gram-Schmidt passes is significant; returns true on growth.
inline bool grow_basis(Matrix& q, Vector w, double tol = 1e-8) {
    const double n0 = w.norm();
    if (n0 <= tol) return false;
    for (int pass = 0; pass < 2; ++pass)
        if (q.cols() > 0) w -= q * (q.adjoint() * w);
    if (w.norm() <= tol * n0) return false;
    q.conservativeResize(q.rows(), q.cols() + 1);
    q.col(q.cols() - 1) = w / w.norm();
    return true;
}

}  // namespace detail

/// Orthonormal basis of N_phi by randomized sampling: draw unit xi, collect
/// xi (x) xi_bar (x) eta over the kernel of phi(|xi><xi|). Sampling stops
/// after 10 m consecutive draws without growth, or at the hard cap.
inline Matrix n_phi_basis(const MapRep& phi, long budget = 0, std::uint64_t seed = 42,
                          const Tolerance& tol = {}) {
    const Index m = phi.m, n = phi.n;
    Matrix q(m * m * n, 0);
    std::mt19937_64 rng(seed);
    const int stall_limit = static_cast<int>(10 * m);
    const long cap = budget > 0 ? budget : 100 * m * m * n;
    int stall = 0;
    for (long draw = 0; draw < cap && stall < stall_limit; ++draw) {
        const Vector xi = random_unit_vector(m, rng);
        const Matrix p = xi * xi.adjoint();
        const Matrix k = kernel_basis(apply_map(phi, p), tol);
        bool grew = false;
        for (Index c = 0; c < k.cols(); ++c)
            grew = detail::grow_basis(q, tensor_vector(p, k.col(c))) || grew;
        stall = grew ? 0 : stall + 1;
    }
    return q;
}

/// Largest distance of a unit column of b from the span of the orthonormal
/// columns of q.
inline double max_span_residual(const Matrix& q, const Matrix& b) {
    double worst = 0.0;
    for (Index c = 0; c < b.cols(); ++c) {
        Vector w = b.col(c);
        const double n0 = w.norm();
        if (n0 == 0) continue;
        if (q.cols() > 0) w -= q * (q.adjoint() * w);
        worst = std::max(worst, w.norm() / n0);
    }
    return worst;
}

inline bool is_unital(const MapRep& phi, double entry_tol = 1e-9) {
    return (apply_map(phi, identity(phi.m)) - identity(phi.n)).cwiseAbs().maxCoeff() <= entry_tol;
}

/// phi(1) = c * 1 for some c > 0; the exposedness criterion is scale
/// invariant, so this is the hypothesis actually tested.
inline bool is_unital_up_to_scale(const MapRep& phi, double entry_tol = 1e-9) {
    const Matrix u = apply_map(phi, identity(phi.m));
    const double c = u.trace().real() / static_cast<double>(phi.n);
    if (c <= entry_tol) return false;
    return (u - c * identity(phi.n)).cwiseAbs().maxCoeff() <= entry_tol * std::max(1.0, c);
}

/// Complex dimension of {x in M_n : x phi(a) = phi(a) x for all a}, computed
/// from the stacked row-major vectorized commutator equations. Dimension 1
/// means the range algebra acts irreducibly.
inline Index commutant_dimension(const MapRep& phi, const Tolerance& tol = {}) {
    const Index m = phi.m, n = phi.n;
    Matrix rows(m * m * n * n, n * n);
    const Matrix id = identity(n);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j) {
            const Matrix b = phi.choi.block(i * n, j * n, n, n);
            rows.middleRows((i * m + j) * n * n, n * n) =
                kron(b, id) - kron(id, b.transpose());
        }
    return n * n - numerical_rank(rows, tol);
}

enum class WoronowiczVerdict {
    exposed_by_theorem,
    condition_fails,
    not_unital_or_irreducible_but_condition_holds
};

struct WoronowiczReport {
    Index dim_ker_hat = 0;
    Index dim_n = 0;
    bool condition_holds = false;  ///< N_phi = ker hat(phi)
    double hat_residual = 0.0;     ///< max |hat * v| over the N_phi basis
    double span_residual = 0.0;    ///< distance of ker hat(phi) from span N_phi
    bool unital = false;
    Index commutant_dim = 0;
    bool irreducible = false;
    WoronowiczVerdict verdict = WoronowiczVerdict::condition_fails;
};

/// Runs the full criterion: a unital irreducible positive phi with
/// N_phi = ker hat(phi) generates an exposed ray. Unitality is taken up to a
/// positive scalar since exposedness is scale invariant.
inline WoronowiczReport woronowicz_verdict(const MapRep& phi, long budget = 0,
                                           std::uint64_t seed = 42,
                                           const Tolerance& tol = {}) {
    WoronowiczReport rep;
    const Matrix hat = hat_matrix(phi);
    rep.dim_ker_hat = phi.m * phi.m * phi.n - numerical_rank(hat, tol);
    const Matrix q = n_phi_basis(phi, budget, seed, tol);
    rep.dim_n = q.cols();
    for (Index c = 0; c < q.cols(); ++c)
        rep.hat_residual = std::max(rep.hat_residual, (hat * q.col(c)).norm());
    rep.span_residual = max_span_residual(q, kernel_basis(hat, tol));
    rep.condition_holds = rep.dim_n == rep.dim_ker_hat && rep.span_residual <= 1e-6;

    rep.unital = is_unital_up_to_scale(phi, tol.entry_tol);
    rep.commutant_dim = commutant_dimension(phi, tol);
    rep.irreducible = rep.commutant_dim == 1;

    if (!rep.condition_holds)
        rep.verdict = WoronowiczVerdict::condition_fails;
    else if (rep.unital && rep.irreducible)
        rep.verdict = WoronowiczVerdict::exposed_by_theorem;
    else
        rep.verdict = WoronowiczVerdict::not_unital_or_irreducible_but_condition_holds;
    return rep;
}

// ---------------------------------------------------------------------------
// Structured generating families for N_phi of the benchmark maps: the
// identity on M_r, the corner embedding S: M_r -> M_n, and the corner
// compression T: M_n -> M_r. Each family is a list of parametric generators
// xi (x) xi_bar (x) eta_i whose random instantiations span N_phi (for the
// identity and S) or a proper subspace of ker hat(T) (for T).

enum class FamilyKind { identity_r, embed_s, compress_t };

struct FamilyDims {
    Index r = 0;  ///< corner size
    Index n = 0;  ///< ambient output size (embed_s), unused otherwise
    Index m = 0;  ///< ambient input size (compress_t), unused otherwise
};

/// Number of generators; the index i runs over 2..r for all three kinds
/// (the -1 slot of eta_i lives in the corner space C^r).
inline int family_generator_count(FamilyKind kind, const FamilyDims& d) {
    (void)kind;
    return static_cast<int>(d.r - 1);
}

/// One instantiation of generator i (0-based, i < family_generator_count):
/// xi = (1, a_2, ..)^T and eta_i has conj(a_{i+2}) in slot 1 and -1 in slot
/// i+2, padded by free coordinates b on the S variant.
inline Vector family_generator(FamilyKind kind, const FamilyDims& d, int i,
                               std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto cpx = [&] { return Complex(u(rng), u(rng)); };
    const Index in_dim = kind == FamilyKind::compress_t ? d.m : d.r;
    const Index out_dim = kind == FamilyKind::embed_s ? d.n
                          : kind == FamilyKind::compress_t ? d.r
                                                           : d.r;
    Vector xi(in_dim);
    xi(0) = 1.0;
    for (Index t = 1; t < in_dim; ++t) xi(t) = cpx();
    Vector eta = Vector::Zero(out_dim);
    eta(0) = std::conj(xi(i + 1));
    if (i + 1 < out_dim) eta(i + 1) = -1.0;
    if (kind == FamilyKind::embed_s)
        for (Index t = d.r; t < d.n; ++t) eta(t) = cpx();
    return tensor_vector(xi * xi.adjoint(), eta);
}

/// Span dimension of 3x(ambient dim) random instantiations of generator i.
inline Index family_component_dim(FamilyKind kind, const FamilyDims& d, int i,
                                  std::uint64_t seed = 42, const Tolerance& tol = {}) {
    const Index in_dim = kind == FamilyKind::compress_t ? d.m : d.r;
    const Index out_dim = kind == FamilyKind::embed_s ? d.n
                          : kind == FamilyKind::compress_t ? d.r
                                                           : d.r;
    const Index ambient = in_dim * in_dim * out_dim;
    std::mt19937_64 rng(seed);
    Matrix cols(ambient, 3 * ambient);
    for (Index c = 0; c < cols.cols(); ++c) cols.col(c) = family_generator(kind, d, i, rng);
    return numerical_rank(cols, tol);
}

/// Orthonormal basis of the span of all generators of the family.
inline Matrix family_span(FamilyKind kind, const FamilyDims& d, std::uint64_t seed = 42) {
    const Index in_dim = kind == FamilyKind::compress_t ? d.m : d.r;
    const Index out_dim = kind == FamilyKind::embed_s ? d.n
                          : kind == FamilyKind::compress_t ? d.r
                                                           : d.r;
    const Index ambient = in_dim * in_dim * out_dim;
    std::mt19937_64 rng(seed);
    Matrix q(ambient, 0);
    const int gens = family_generator_count(kind, d);
    for (int rep = 0; rep < 3 * static_cast<int>(ambient); ++rep)
        for (int i = 0; i < gens; ++i)
            detail::grow_basis(q, family_generator(kind, d, i, rng));
    return q;
}

/// zeta_k = sum_{j<=r} |k j j> in C^m (x) C^m (x) C^r; for k > r these lie
/// in ker hat(T) but outside N_T, witnessing the strict gap for the corner
/// compression.
inline Vector zeta_vector(Index m, Index r, Index k) {
    if (k < 1 || k > m) throw std::out_of_range("zeta_vector: k out of range");
    Vector z = Vector::Zero(m * m * r);
    for (Index j = 0; j < r; ++j) z(((k - 1) * m + j) * r + j) = 1.0;
    return z;
}

// ---------------------------------------------------------------------------
// Kernel-inclusion factorization test.

struct FactorResult {
    bool factors = false;
    std::optional<Matrix> x;          ///< n x n with hat(psi) = x * hat(phi)
    std::optional<Vector> violating;  ///< kernel vector of hat(phi) missed by hat(psi)
    double residual = 0.0;
};

/// psi factors through phi (psi = chi o phi for linear chi on the range)
/// iff ker hat(phi) <= ker hat(psi); on success returns a least-squares x
/// with hat(psi) = x hat(phi).
inline FactorResult factor_through(const MapRep& psi, const MapRep& phi,
                                   const Tolerance& tol = {}) {
    if (psi.m != phi.m) throw DimensionError("factor_through: input dimensions differ");
    const Matrix hphi = hat_matrix(phi);
    const Matrix hpsi = hat_matrix(psi);
    const double scale = std::max(1.0, hpsi.cwiseAbs().maxCoeff());
    FactorResult out;
    const Matrix k = kernel_basis(hphi, tol);
    for (Index c = 0; c < k.cols(); ++c) {
        const double res = (hpsi * k.col(c)).norm();
        if (res > 1e-8 * scale) {
            out.factors = false;
            out.violating = k.col(c);
            out.residual = res;
            return out;
        }
    }
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(hphi.transpose());
    Matrix x = cod.solve(hpsi.transpose()).transpose();
    out.residual = (x * hphi - hpsi).norm();
    out.factors = out.residual <= 1e-7 * scale;
    if (out.factors) out.x = x;
    return out;
}

}  // namespace posmap
