#pragma once

// Cone membership: block-positivity (Choi matrices of positive maps) via
// alternating eigenvector descent over product vectors, complete positivity
// via the Choi spectrum, superpositivity at 2x2 via the PPT criterion, and
// the closed-form test for the special 4x4 witness family.

#include <optional>
#include <random>
#include <vector>

#include "posmap/map_algebra.hpp"

namespace posmap {

/// The 4x4 family rho_{a,b,alpha,beta}: a, b on the (1,1)/(2,2) diagonal
/// corners, alpha at ((1,1),(2,2)), beta at ((1,2),(2,1)).
struct SpecialWitnessForm {
    double a = 0;
    double b = 0;
    Complex alpha{0, 0};
    Complex beta{0, 0};

    Matrix realize() const {
        Matrix rho = Matrix::Zero(4, 4);
        rho(0, 0) = a;
        rho(3, 3) = b;
        rho(0, 3) = alpha;
        rho(3, 0) = std::conj(alpha);
        rho(1, 2) = beta;
        rho(2, 1) = std::conj(beta);
        return rho;
    }
};

enum class ConeMethod { closed_form, alternating_minimization, psd_check, ppt_check };

struct ConeVerdict {
    bool member = false;
    double margin = 0.0;  ///< min product expectation, min eigenvalue, or closed-form slack
    std::optional<Vector> certificate_xi;   ///< left factor of a violating product vector
    std::optional<Vector> certificate_eta;  ///< right factor (or eigenvector, xi unused)
    ConeMethod method = ConeMethod::closed_form;
};

/// Block-positivity of rho_{a,b,alpha,beta}: member iff |alpha|+|beta| <= sqrt(ab).
inline ConeVerdict block_positive_special(const SpecialWitnessForm& w, double entry_tol = 1e-9) {
    if (w.a < 0 || w.b < 0) throw std::invalid_argument("block_positive_special: a, b must be >= 0");
    ConeVerdict v;
    v.method = ConeMethod::closed_form;
    v.margin = std::sqrt(w.a * w.b) - std::abs(w.alpha) - std::abs(w.beta);
    v.member = v.margin >= -entry_tol;
    if (!v.member) {
        // the grid argument of the closed form: a violating product vector has
        // the pattern (p, p e^{it}, q e^{i(h-t)}, q e^{ih})
        // phases chosen so both off-diagonal contributions come out at -|.|:
        // the alpha term carries e^{ih}, the beta term e^{i(h-2t)}
        const double h = M_PI - std::arg(w.alpha);
        const double t = (std::arg(w.beta) - std::arg(w.alpha)) / 2.0;
        Vector xi(2), eta(2);
        double p, q;
        if (w.a == 0 && w.b == 0) {
            p = q = 1.0 / std::sqrt(2.0);
        } else {
            // minimize p^2 a + q^2 b - 2 p q (|alpha|+|beta|) over the unit circle
            Eigen::Matrix2d quad;
            quad << w.a, -(std::abs(w.alpha) + std::abs(w.beta)),
                -(std::abs(w.alpha) + std::abs(w.beta)), w.b;
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(quad);
            p = es.eigenvectors()(0, 0);
            q = es.eigenvectors()(1, 0);
        }
        xi << p, q * Complex(std::cos(h - t), std::sin(h - t));
        eta << 1.0, Complex(std::cos(t), std::sin(t));
        const double nx = xi.norm(), ne = eta.norm();
        if (nx > 0 && ne > 0) {
            v.certificate_xi = xi / nx;
            v.certificate_eta = eta / ne;
        }
    }
    return v;
}

namespace detail {

/// (<xi| (x) I) rho (|xi> (x) I): the n x n contraction over the first factor.
inline Matrix contract_first(const Matrix& rho, const Vector& xi, Index m, Index n) {
    Matrix out = Matrix::Zero(n, n);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j)
            out += std::conj(xi(i)) * xi(j) * rho.block(i * n, j * n, n, n);
    return out;
}

/// (I (x) <eta|) rho (I (x) |eta>): the m x m contraction over the second factor.
inline Matrix contract_second(const Matrix& rho, const Vector& eta, Index m, Index n) {
    Matrix out = Matrix::Zero(m, m);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j)
            out(i, j) = (eta.adjoint() * rho.block(i * n, j * n, n, n) * eta)(0, 0);
    return out;
}

}  // namespace detail

struct ProductMinimum {
    double value = 0.0;
    Vector xi;
    Vector eta;
};

/// Upper bound on min over unit product vectors xi (x) eta of <xi(x)eta|rho|xi(x)eta>,
/// by alternating minimal-eigenvector descent with multi-start. The objective is
/// monotone nonincreasing per half-step; per-restart seeds derive from `seed`.
/// Optional `trace` collects the objective after every half-step.
inline ProductMinimum min_product_expectation(const Matrix& rho, Index m, Index n,
                                              int restarts = 64, int max_iters = 200,
                                              std::uint64_t seed = 42,
                                              std::vector<double>* trace = nullptr) {
    if (rho.rows() != m * n || rho.cols() != m * n)
        throw DimensionError("min_product_expectation: rho shape mismatch");
    if (!is_hermitian(rho, 1e-9 * std::max(1.0, rho.cwiseAbs().maxCoeff())))
        throw std::invalid_argument("min_product_expectation: rho must be Hermitian");

    ProductMinimum best;
    best.value = std::numeric_limits<double>::infinity();
    for (int rs = 0; rs < restarts; ++rs) {
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(rs + 1));
        Vector xi = random_unit_vector(m, rng);
        Vector eta = random_unit_vector(n, rng);
        double value = std::real((kron(xi, eta).adjoint() * rho * kron(xi, eta))(0, 0));
        for (int it = 0; it < max_iters; ++it) {
            auto [ve, eta_new] = eig_hermitian_min(detail::contract_first(rho, xi, m, n));
            eta = eta_new;
            if (trace) trace->push_back(ve);
            auto [vx, xi_new] = eig_hermitian_min(detail::contract_second(rho, eta, m, n));
            xi = xi_new;
            if (trace) trace->push_back(vx);
            if (value - vx < 1e-12) {
                value = vx;
                break;
            }
            value = vx;
        }
        if (value < best.value) {
            best.value = value;
            best.xi = xi;
            best.eta = eta;
        }
    }
    return best;
}

/// Positive-map test: phi is positive iff C_phi is block-positive. A negative
/// certificate is conclusive; a nonnegative minimum certifies membership at
/// the given restart budget.
inline ConeVerdict is_positive_map(const MapRep& phi, int restarts = 64,
                                   std::uint64_t seed = 42, double entry_tol = 1e-9) {
    auto mn = min_product_expectation(phi.choi, phi.m, phi.n, restarts, 200, seed);
    ConeVerdict v;
    v.method = ConeMethod::alternating_minimization;
    v.margin = mn.value;
    v.member = mn.value >= -entry_tol;
    if (!v.member) {
        v.certificate_xi = mn.xi;
        v.certificate_eta = mn.eta;
    }
    return v;
}

/// Complete positivity: C_phi positive semidefinite.
inline ConeVerdict is_completely_positive(const MapRep& phi, double entry_tol = 1e-9) {
    auto [val, vec] = eig_hermitian_min(phi.choi);
    ConeVerdict v;
    v.method = ConeMethod::psd_check;
    v.margin = val;
    v.member = val >= -entry_tol;
    if (!v.member) v.certificate_eta = vec;
    return v;
}

/// Partial transpose on the second tensor factor of M_m (x) M_n.
inline Matrix partial_transpose(const Matrix& rho, Index m, Index n) {
    Matrix out(m * n, m * n);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j)
            out.block(i * n, j * n, n, n) = rho.block(i * n, j * n, n, n).transpose();
    return out;
}

/// Superpositivity for M_2 -> M_2 via the 2 (x) 2 PPT criterion. Other
/// dimensions are unsupported (general separability is out of scope).
inline ConeVerdict is_superpositive_2x2(const MapRep& phi, double entry_tol = 1e-9) {
    if (phi.m != 2 || phi.n != 2)
        throw std::invalid_argument("is_superpositive_2x2: only M_2 -> M_2 supported");
    const double e1 = min_eigenvalue(phi.choi);
    const double e2 = min_eigenvalue(partial_transpose(phi.choi, 2, 2));
    ConeVerdict v;
    v.method = ConeMethod::ppt_check;
    v.margin = std::min(e1, e2);
    v.member = v.margin >= -entry_tol;
    if (!v.member) {
        auto bad = e1 <= e2 ? phi.choi : partial_transpose(phi.choi, 2, 2);
        v.certificate_eta = eig_hermitian_min(bad).second;
    }
    return v;
}

}  // namespace posmap
