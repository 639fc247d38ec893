#pragma once

// Numerical bi-dual face computation.
//
// For a positive map phi, the dual face phi' is cut out by the rank-one
// maps Ad_s with <Ad_s, phi> = 0; the bi-dual face phi'' is the set of
// positive psi annihilating all of them. Writing s = |xi><eta|, membership
// of a positive psi is equivalent to psi(|xi_bar><xi_bar|) eta_bar = 0 for
// every sample in the zero variety (the matching vector lies in the kernel
// of the PSD value, so the scalar pairing vanishing upgrades to a vector
// equation). Those vector equations, together with the first-order
// consequences of positivity along directions where phi vanishes entirely,
// form a real homogeneous linear system on Hermitian Choi matrices whose
// solution space always contains the ray through C_phi. Solution dimension 1
// certifies that the face is the ray, i.e. that phi generates an exposed ray.

#include <cstdint>
#include <vector>

#include "posmap/map_algebra.hpp"

namespace posmap {

/// One point of the zero variety: the rank-one s = |xi><eta| with
/// <Ad_s, phi> = 0; residual is the actual pairing magnitude at the sample.
struct ZeroVarietySample {
    Vector xi;       ///< unit vector in C^m
    Vector eta;      ///< unit vector in C^n
    double residual; ///< |<Ad_s, phi>|
};

/// Real homogeneous linear system on Hermitian (mn) x (mn) matrices in
/// hermitian_coords coordinates, one block of rows per constraint.
struct FaceConstraintSystem {
    Index m = 0;
    Index n = 0;
    RealMatrix rows;          ///< each row is one real linear functional
    bool empty_variety = false;
    int solution_dim = -1;    ///< set by bidual_dimension
};

namespace detail {

/// Rows asserting psi(P) eta_bar = 0 for P = |xi_bar><xi_bar|, appended to out.
inline void append_kernel_rows(std::vector<RealVector>& out, const Vector& xi,
                               const Vector& eta, Index m, Index n) {
    const Matrix p = xi.conjugate() * xi.transpose();  // |xi_bar><xi_bar|
    const Vector v = eta.conjugate();
    for (Index k = 0; k < n; ++k) {
        // coefficient of X_{(i,k),(j,l)} in e_k^T psi_X(P) v is P_ij v_l
        Matrix g = Matrix::Zero(m * n, m * n);
        for (Index i = 0; i < m; ++i)
            for (Index j = 0; j < m; ++j)
                for (Index l = 0; l < n; ++l) g(i * n + k, j * n + l) = p(i, j) * v(l);
        auto [re, im] = functional_rows(g);
        out.push_back(re);
        out.push_back(im);
    }
}

/// Rows asserting psi(a) = 0 entrywise for a fixed input matrix a.
inline void append_annihilation_rows(std::vector<RealVector>& out, const Matrix& a,
                                     Index m, Index n) {
    for (Index k = 0; k < n; ++k)
        for (Index l = 0; l < n; ++l) {
            Matrix g = Matrix::Zero(m * n, m * n);
            for (Index i = 0; i < m; ++i)
                for (Index j = 0; j < m; ++j) g(i * n + k, j * n + l) = a(i, j);
            auto [re, im] = functional_rows(g);
            out.push_back(re);
            out.push_back(im);
        }
}

/// Basis of {x in C^m : phi(x x^*) = 0}, detected through the PSD trace form
/// x -> Tr phi(|x><x|).
inline Matrix vanishing_input_space(const MapRep& phi, const Tolerance& tol = {}) {
    Matrix w(phi.m, phi.m);
    for (Index i = 0; i < phi.m; ++i)
        for (Index j = 0; j < phi.m; ++j)
            w(j, i) = apply_map(phi, matrix_unit(phi.m, phi.m, i, j)).trace();
    return kernel_basis(hermitian_part(w), tol);
}

}  // namespace detail

/// Scalar Eq-style functional of one sample: X -> <C_{Ad_s}, X>, real on
/// Hermitian X. Used for membership spot checks and the closed-form tests.
inline RealVector scalar_constraint_row(const ZeroVarietySample& s, Index m, Index n) {
    const Vector w = kron(s.xi, s.eta.conjugate());
    const Matrix c = w.conjugate() * w.transpose();  // Choi of Ad_{|xi><eta|}
    return functional_rows(c).first;
}

/// Draws points of the zero variety {rank-one s : <Ad_s, phi> = 0}.
/// Structured families come first: matrix-unit directions, the theta-family
/// |i> -e^{-i theta}|j> against <k| + e^{i theta}<l|, and the directions on
/// which phi vanishes identically; random unit xi fill the remaining budget,
/// one sample per kernel vector of phi(|xi_bar><xi_bar|).
inline std::vector<ZeroVarietySample> sample_zero_variety(const MapRep& phi, int count,
                                                          std::uint64_t seed,
                                                          const Tolerance& tol = {}) {
    std::vector<ZeroVarietySample> samples;
    const double scale = std::max(1.0, phi.choi.cwiseAbs().maxCoeff());
    const double accept = 1e-9 * scale;

    auto residual_of = [&](const Vector& xi, const Vector& eta) {
        const Vector w = kron(xi, eta.conjugate());
        return std::abs((w.adjoint() * phi.choi * w)(0, 0));
    };
    auto try_emit_kernel = [&](const Vector& xi) {
        const Matrix a = apply_map(phi, xi.conjugate() * xi.transpose());
        const Matrix k = kernel_basis(a, tol);
        for (Index c = 0; c < k.cols(); ++c) {
            Vector eta = k.col(c).conjugate();
            const double res = residual_of(xi, eta);
            if (res <= accept) samples.push_back({xi, eta, res});
        }
    };
    auto try_emit_pair = [&](Vector xi, Vector eta) {
        xi /= xi.norm();
        eta /= eta.norm();
        const double res = residual_of(xi, eta);
        if (res <= accept) samples.push_back({xi, eta, res});
    };

    // matrix-unit directions
    for (Index i = 0; i < phi.m && static_cast<int>(samples.size()) < count; ++i)
        try_emit_kernel(Vector::Unit(phi.m, i));
    // theta-family on every pair of input and output coordinates
    for (Index i = 0; i < phi.m; ++i)
        for (Index j = i + 1; j < phi.m; ++j)
            for (Index k = 0; k < phi.n; ++k)
                for (Index l = k + 1; l < phi.n; ++l)
                    for (int t = 0; t < 16 && static_cast<int>(samples.size()) < count; ++t) {
                        const double theta = 2.0 * M_PI * t / 16.0;
                        const Complex e(std::cos(theta), std::sin(theta));
                        Vector xi = Vector::Unit(phi.m, i) - std::conj(e) * Vector::Unit(phi.m, j);
                        Vector etabar = Vector::Unit(phi.n, k) + e * Vector::Unit(phi.n, l);
                        try_emit_pair(xi, etabar.conjugate());
                    }
    // directions where phi vanishes identically
    const Matrix kin = detail::vanishing_input_space(phi, tol);
    for (Index c = 0; c < kin.cols() && static_cast<int>(samples.size()) < count; ++c)
        try_emit_kernel(kin.col(c).conjugate());

    std::mt19937_64 rng(seed);
    int draws = 0;
    const int max_draws = std::max(count, 64);
    while (static_cast<int>(samples.size()) < count && draws < max_draws) {
        try_emit_kernel(random_unit_vector(phi.m, rng));
        ++draws;
    }
    return samples;
}

/// Assembles the real constraint rows of the bi-dual system from samples.
inline FaceConstraintSystem build_constraints(const std::vector<ZeroVarietySample>& samples,
                                              Index m, Index n) {
    FaceConstraintSystem sys;
    sys.m = m;
    sys.n = n;
    sys.empty_variety = samples.empty();
    std::vector<RealVector> rows;
    for (const auto& s : samples) detail::append_kernel_rows(rows, s.xi, s.eta, m, n);
    sys.rows.resize(static_cast<Index>(rows.size()), hermitian_dim(m * n));
    for (size_t r = 0; r < rows.size(); ++r) sys.rows.row(static_cast<Index>(r)) = rows[r];
    return sys;
}

/// Appends the first-order positivity closure: if phi(x x^*) = 0 then every
/// positive psi in the face satisfies psi(x y^* + y x^*) = 0 for all y
/// (expand psi((x+ty)(x+ty)^*) >= 0 to first order in t).
inline void append_positivity_closure(FaceConstraintSystem& sys, const MapRep& phi,
                                      const Tolerance& tol = {}) {
    const Matrix kin = detail::vanishing_input_space(phi, tol);
    if (kin.cols() == 0) return;
    std::vector<RealVector> rows;
    for (Index c = 0; c < kin.cols(); ++c) {
        const Vector x = kin.col(c);
        for (Index j = 0; j < phi.m; ++j) {
            const Vector e = Vector::Unit(phi.m, j);
            detail::append_annihilation_rows(rows, x * e.adjoint() + e * x.adjoint(), phi.m, phi.n);
            detail::append_annihilation_rows(
                rows, Complex(0, 1) * (x * e.adjoint() - e * x.adjoint()), phi.m, phi.n);
        }
    }
    const Index old = sys.rows.rows();
    sys.rows.conservativeResize(old + static_cast<Index>(rows.size()), hermitian_dim(sys.m * sys.n));
    for (size_t r = 0; r < rows.size(); ++r) sys.rows.row(old + static_cast<Index>(r)) = rows[r];
}

struct BidualResult {
    int dimension = 0;
    RealMatrix basis;          ///< columns: hermitian_coords of solution basis
    bool empty_variety = false;
    int sample_count = 0;
    FaceConstraintSystem system;
};

/// Solves the bi-dual face system for phi; `budget` is the sample budget
/// (<= 0 selects the default 40 (mn)^2). Dimension 1 certifies that phi
/// generates an exposed ray; larger dimensions are inconclusive evidence.
inline BidualResult bidual_dimension(const MapRep& phi, int budget = 0,
                                     std::uint64_t seed = 42, const Tolerance& tol = {}) {
    const Index dim = hermitian_dim(phi.m * phi.n);
    if (budget <= 0) budget = static_cast<int>(40 * (phi.m * phi.n) * (phi.m * phi.n));
    auto samples = sample_zero_variety(phi, budget, seed, tol);

    BidualResult out;
    out.sample_count = static_cast<int>(samples.size());
    out.system = build_constraints(samples, phi.m, phi.n);
    append_positivity_closure(out.system, phi, tol);
    out.empty_variety = out.system.empty_variety;
    if (out.system.rows.rows() == 0) {
        out.dimension = static_cast<int>(dim);
        out.basis = RealMatrix::Identity(dim, dim);
        out.system.solution_dim = out.dimension;
        return out;
    }
    // normalize rows so the rank tolerance is meaningful
    RealMatrix a = out.system.rows;
    for (Index r = 0; r < a.rows(); ++r) {
        const double nrm = a.row(r).norm();
        if (nrm > 0) a.row(r) /= nrm;
    }
    Eigen::BDCSVD<RealMatrix> svd(a, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double smax = s.size() > 0 ? s(0) : 0.0;
    Index rank = 0;
    for (Index i = 0; i < s.size(); ++i)
        if (s(i) > tol.rank_tol * smax) ++rank;
    out.dimension = static_cast<int>(dim - rank);
    out.basis = svd.matrixV().rightCols(dim - rank);
    out.system.solution_dim = out.dimension;
    // replace the raw rows by an equivalent compressed system spanning the
    // same functional space, so results stay small
    out.system.rows =
        s.head(rank).asDiagonal() * svd.matrixV().leftCols(rank).transpose();
    return out;
}

/// psi in phi'' (modulo sampling sufficiency): every constraint evaluates to
/// ~0 on C_psi.
inline bool bidual_membership(const MapRep& psi, const FaceConstraintSystem& sys,
                              double tol = 1e-8) {
    if (psi.m != sys.m || psi.n != sys.n)
        throw DimensionError("bidual_membership: dimension mismatch");
    if (sys.rows.rows() == 0) return true;
    const RealVector c = hermitian_coords(hermitian_part(psi.choi));
    const double scale = std::max(1.0, c.norm());
    for (Index r = 0; r < sys.rows.rows(); ++r) {
        const double nrm = sys.rows.row(r).norm();
        if (nrm == 0) continue;
        if (std::abs(sys.rows.row(r).dot(c)) / nrm > tol * scale) return false;
    }
    return true;
}

}  // namespace posmap
