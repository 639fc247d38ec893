#include <catch2/catch_amalgamated.hpp>

#include "posmap/cone.hpp"

using namespace posmap;

namespace {

// Independent oracle: exact minimum of <xi (x) eta| rho |xi (x) eta> over
// unit product vectors in C^2 (x) C^n, by gridding xi = (cos a, sin a e^{ib})
// up to phase and taking the exact minimal eigenvalue of the contraction.
double grid_product_minimum(const Matrix& rho, Index n, double step) {
    double best = std::numeric_limits<double>::infinity();
    for (double a = 0.0; a <= M_PI / 2 + step; a += step)
        for (double b = 0.0; b < 2 * M_PI; b += step) {
            Vector xi(2);
            xi << std::cos(a), std::sin(a) * Complex(std::cos(b), std::sin(b));
            best = std::min(best, min_eigenvalue(detail::contract_first(rho, xi, 2, n)));
        }
    return best;
}

SpecialWitnessForm random_form(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SpecialWitnessForm w;
    w.a = 2.0 * u(rng);
    w.b = 2.0 * u(rng);
    const double ra = 1.5 * u(rng), pa = 2 * M_PI * u(rng);
    const double rb = 1.5 * u(rng), pb = 2 * M_PI * u(rng);
    w.alpha = ra * Complex(std::cos(pa), std::sin(pa));
    w.beta = rb * Complex(std::cos(pb), std::sin(pb));
    return w;
}

}  // namespace

TEST_CASE("special form realizes at the stated slots") {
    SpecialWitnessForm w{1.0, 2.0, Complex(0.3, 0.4), Complex(0.0, -0.5)};
    Matrix rho = w.realize();
    CHECK(rho(0, 0) == Complex(1, 0));
    CHECK(rho(3, 3) == Complex(2, 0));
    CHECK(rho(0, 3) == w.alpha);
    CHECK(rho(3, 0) == std::conj(w.alpha));
    CHECK(rho(1, 2) == w.beta);
    CHECK(rho(2, 1) == std::conj(w.beta));
    CHECK(is_hermitian(rho));
}

TEST_CASE("closed-form membership boundary") {
    CHECK(block_positive_special({1, 1, Complex(0.5, 0), Complex(0.5, 0)}).member);
    CHECK(block_positive_special({1, 1, Complex(0.6, 0), Complex(0.5, 0)}).member == false);
    auto v = block_positive_special({1, 1, Complex(0.6, 0), Complex(0.5, 0)});
    CHECK(v.margin == Catch::Approx(-0.1));
    CHECK_THROWS_AS(block_positive_special({-1, 1, {}, {}}), std::invalid_argument);
}

TEST_CASE("violation certificates actually violate") {
    std::mt19937_64 rng(31);
    int found = 0;
    for (int rep = 0; rep < 200 && found < 25; ++rep) {
        SpecialWitnessForm w = random_form(rng);
        auto v = block_positive_special(w);
        if (v.member) continue;
        ++found;
        REQUIRE(v.certificate_xi.has_value());
        Vector prod = kron(*v.certificate_xi, *v.certificate_eta);
        const double val = std::real((prod.adjoint() * w.realize() * prod)(0, 0));
        CHECK(val < 1e-9);
    }
    CHECK(found >= 25);
}

TEST_CASE("alternating minimization agrees with the closed form off the boundary") {
    std::mt19937_64 rng(33);
    int tested = 0;
    for (int rep = 0; rep < 400 && tested < 60; ++rep) {
        SpecialWitnessForm w = random_form(rng);
        auto cf = block_positive_special(w);
        if (std::abs(cf.margin) < 1e-3) continue;
        ++tested;
        auto am = is_positive_map(map_of_choi(w.realize(), 2, 2), 16, 42u + rep);
        CHECK(am.member == cf.member);
    }
    CHECK(tested >= 60);
}

TEST_CASE("grid oracle confirms the closed form on both sides") {
    std::mt19937_64 rng(35);
    int pos = 0, neg = 0;
    for (int rep = 0; rep < 200 && (pos < 5 || neg < 5); ++rep) {
        SpecialWitnessForm w = random_form(rng);
        auto cf = block_positive_special(w);
        if (std::abs(cf.margin) < 1e-2) continue;
        const double g = grid_product_minimum(w.realize(), 2, M_PI / 100);
        if (cf.member && pos < 5) {
            ++pos;
            CHECK(g > -1e-3);
        } else if (!cf.member && neg < 5) {
            ++neg;
            CHECK(g < 0.0);
        }
    }
    CHECK(pos == 5);
    CHECK(neg == 5);
}

TEST_CASE("objective trace is monotone nonincreasing within a restart") {
    std::mt19937_64 rng(37);
    Matrix rho = hermitian_part(random_matrix(6, 6, rng));
    std::vector<double> trace;
    min_product_expectation(rho, 2, 3, 1, 50, 42, &trace);
    for (size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1] + 1e-10);
}

TEST_CASE("minimization is deterministic for a fixed seed") {
    std::mt19937_64 rng(39);
    Matrix rho = hermitian_part(random_matrix(4, 4, rng));
    auto a = min_product_expectation(rho, 2, 2, 8, 100, 7);
    auto b = min_product_expectation(rho, 2, 2, 8, 100, 7);
    CHECK(a.value == b.value);
    CHECK(a.xi == b.xi);
}

TEST_CASE("positivity of Ad maps and failure of negated ones") {
    std::mt19937_64 rng(41);
    Matrix s = random_matrix(2, 3, rng);
    CHECK(is_positive_map(ad(s)).member);
    auto bad = is_positive_map(map_of_choi(-ad(s).choi, 2, 3));
    CHECK(bad.member == false);
    REQUIRE(bad.certificate_xi.has_value());
    Vector prod = kron(*bad.certificate_xi, *bad.certificate_eta);
    CHECK(std::real((prod.adjoint() * (-ad(s).choi) * prod)(0, 0)) < 0.0);
}

TEST_CASE("transpose map is positive but not completely positive") {
    MapRep t = transpose_map(2);
    CHECK(is_positive_map(t).member);
    CHECK(is_completely_positive(t).member == false);
    CHECK(is_completely_positive(identity_map(2)).member);
    std::mt19937_64 rng(45);
    CHECK(is_completely_positive(ad(random_matrix(2, 2, rng))).member);
}

TEST_CASE("partial transpose and 2x2 superpositivity") {
    std::mt19937_64 rng(43);
    Matrix rho = random_matrix(4, 4, rng);
    Matrix pt = partial_transpose(rho, 2, 2);
    CHECK((partial_transpose(pt, 2, 2) - rho).cwiseAbs().maxCoeff() == 0.0);
    CHECK(pt(0, 1) == rho(1, 0));

    // the identity map is not superpositive: its Choi matrix is entangled
    CHECK(is_superpositive_2x2(identity_map(2)).member == false);
    // a map with separable Choi matrix is superpositive
    Matrix sep = Matrix::Zero(4, 4);
    for (int k = 0; k < 4; ++k) {
        Vector x = random_unit_vector(2, rng), y = random_unit_vector(2, rng);
        Vector w = kron(x, y);
        sep += w * w.adjoint();
    }
    CHECK(is_superpositive_2x2(map_of_choi(sep, 2, 2)).member);
    CHECK_THROWS_AS(is_superpositive_2x2(identity_map(3)), std::invalid_argument);
}

TEST_CASE("member-inclusive boundary at entry tolerance") {
    auto v = block_positive_special({1, 1, Complex(0.5 + 1e-12, 0), Complex(0.5, 0)});
    CHECK(v.member);
}
