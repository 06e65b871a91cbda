#include <doctest.h>

#include <cmath>
#include <random>

#include "adelic/cohomology.hpp"
#include "adelic/lattice.hpp"
#include "test_paths.hpp"

using namespace adelic;

namespace {

MetrizedLattice q_lattice(const Eigen::MatrixXd& gen) {
    return MetrizedLattice::create(rationals(), static_cast<int>(gen.rows()), gen);
}

MetrizedLattice scalar_lattice(double c) {
    Eigen::MatrixXd g(1, 1);
    g(0, 0) = c;
    return q_lattice(g);
}

Eigen::MatrixXd random_generator(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> cv(0.5, 2.0);
    while (true) {
        Eigen::MatrixXd g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) = u(rng);
        const double det = std::abs(g.determinant());
        double hadamard = 1.0;
        for (int i = 0; i < n; ++i) hadamard *= g.row(i).norm();
        if (det < 0.05 * hadamard) continue;
        return g * std::pow(cv(rng) / det, 1.0 / n);
    }
}

}  // namespace

TEST_CASE("h0: examples") {
    CHECK(h0(scalar_lattice(1.0), 1e-13).value == doctest::Approx(0.08290152003105464).epsilon(1e-10));
    // theta(cZ) ~ 1/c for small c, so h0(e^-5 Z) ~ 5.
    CHECK(h0(bv_twist(scalar_lattice(1.0), -5.0), 1e-13).value ==
          doctest::Approx(5.0).epsilon(1e-6));
    CHECK(h0(bv_twist(scalar_lattice(1.0), 5.0), 1e-13).value ==
          doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(h0(scalar_lattice(1.0), 1e-13).value >= 0.0);
}

TEST_CASE("h1: dual-side h0") {
    const double tol = 1e-13;
    CHECK(h1(scalar_lattice(1.0), tol).value ==
          doctest::Approx(h0(scalar_lattice(1.0), tol).value).epsilon(1e-14));
    // h1(2Z) = h0((1/2)Z) = log 2 + h0(2Z) by Poisson.
    CHECK(h1(scalar_lattice(2.0), tol).value ==
          doctest::Approx(std::log(2.0) + h0(scalar_lattice(2.0), tol).value).epsilon(1e-12));
    CHECK(h1(scalar_lattice(2.0), tol).value >= 0.0);
}

TEST_CASE("rr_residual: exact identities on examples") {
    CHECK(std::abs(rr_residual(scalar_lattice(1.0), 1e-13).value) < 1e-13);
    Bounded r = rr_residual(scalar_lattice(2.0), 1e-13);
    CHECK(std::abs(r.value) < 1e-12);
    CHECK(std::abs(r.value) <= r.bound);
    // h0 - h1 must equal -log 2 for 2Z.
    const double diff = h0(scalar_lattice(2.0), 1e-13).value - h1(scalar_lattice(2.0), 1e-13).value;
    CHECK(diff == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("serre_residual: multiplicative identity on examples") {
    CHECK(std::abs(serre_residual(scalar_lattice(1.0), 1e-13).value) < 1e-13);
    CHECK(std::abs(serre_residual(scalar_lattice(2.0), 1e-13).value) < 1e-12);
    FieldPtr q5 = load_field(data_path("fields/q_sqrt5.json"));
    Bounded s = serre_residual(standard_lattice(q5), 1e-12);
    CHECK(std::abs(s.value) < 1e-10);
    CHECK(std::abs(s.value) <= s.bound);
}

TEST_CASE("randomized rr/serre suite over Q and quadratic fields") {
    std::mt19937_64 rng(8101);
    const double tol = 1e-12;
    for (int n = 1; n <= 4; ++n) {
        for (int rep = 0; rep < 6; ++rep) {
            MetrizedLattice l = q_lattice(random_generator(rng, n));
            Bounded rr = rr_residual(l, tol);
            Bounded se = serre_residual(l, tol);
            CAPTURE(n);
            CHECK(std::abs(rr.value) <= rr.bound + 1e-14);
            CHECK(std::abs(rr.value) < 1e-10);
            CHECK(std::abs(se.value) <= se.bound + 1e-14);
            CHECK(std::abs(se.value) < 1e-10);
        }
    }
    for (const char* name : {"fields/q_i.json", "fields/q_sqrt5.json"}) {
        FieldPtr f = load_field(data_path(name));
        for (int r = 1; r <= 2; ++r) {
            for (int rep = 0; rep < 4; ++rep) {
                Eigen::MatrixXd g = random_generator(rng, 2 * r);
                MetrizedLattice l = MetrizedLattice::create(f, r, g);
                CAPTURE(name);
                CAPTURE(r);
                CHECK(std::abs(rr_residual(l, tol).value) < 1e-10);
                CHECK(std::abs(serre_residual(l, tol).value) < 1e-10);
            }
        }
    }
}

TEST_CASE("identities hold on the standard lattices of every shipped fixture") {
    for (const char* name : {"fields/q_i.json", "fields/q_sqrt5.json", "fields/q_sqrt2.json",
                             "fields/q_sqrt_m3.json"}) {
        CAPTURE(name);
        FieldPtr f = load_field(data_path(name));
        for (const MetrizedLattice& l : {standard_lattice(f), kappa_lattice(f)}) {
            const Bounded rr = rr_residual(l, 1e-12);
            const Bounded se = serre_residual(l, 1e-12);
            CHECK(std::abs(rr.value) <= rr.bound + 1e-14);
            CHECK(std::abs(se.value) <= se.bound + 1e-14);
        }
    }
}

TEST_CASE("exchange symmetry: rr(L) = -rr(dual L) as computed expressions") {
    std::mt19937_64 rng(8102);
    for (int rep = 0; rep < 5; ++rep) {
        MetrizedLattice l = q_lattice(random_generator(rng, 3));
        const double a = rr_residual(l, 1e-12).value;
        const double b = rr_residual(dual(l), 1e-12).value;
        CHECK(a == doctest::Approx(-b).epsilon(1e-11).scale(1.0));
    }
}

TEST_CASE("h0 decays to zero monotonically under expanding twists") {
    std::mt19937_64 rng(8103);
    MetrizedLattice l = q_lattice(random_generator(rng, 2));
    double prev = h0(bv_twist(l, 0.0), 1e-13).value;
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
        const double cur = h0(bv_twist(l, t), 1e-13).value;
        CHECK(cur <= prev + 1e-13);
        prev = cur;
    }
    CHECK(prev == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
}
