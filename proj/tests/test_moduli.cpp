#include <doctest.h>

#include <cmath>
#include <random>

#include "adelic/errors.hpp"
#include "adelic/moduli.hpp"
#include "adelic/numerics.hpp"
#include "adelic/stability.hpp"
#include "test_paths.hpp"

using namespace adelic;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("chart_to_lattice: rank-2 shape examples") {
    ModuliChart chart = make_chart(rationals(), 2);
    SUBCASE("tau = i gives the square lattice") {
        MetrizedLattice l = chart_to_lattice(chart, {0.0, 1.0}, 1.0);
        CHECK((l.gram() - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-14);
    }
    SUBCASE("tau = 1/2 + i sqrt3/2 gives the hexagonal lattice of covolume 1") {
        MetrizedLattice l = chart_to_lattice(chart, {0.5, std::sqrt(3.0) / 2.0}, 1.0);
        CHECK(covolume(l) == doctest::Approx(1.0).epsilon(1e-13));
        // Hexagonal: all three pairwise-minimal vectors have equal norm.
        const double s = min_norm(l);
        CHECK(enumerate_ball(l, s * (1.0 + 1e-9)).size() == 7);
    }
    SUBCASE("points outside the fundamental domain are rejected") {
        CHECK_THROWS_AS(chart_to_lattice(chart, {0.0, 0.5}, 1.0), Error);   // |tau| < 1
        CHECK_THROWS_AS(chart_to_lattice(chart, {0.7, 1.0}, 1.0), Error);   // |x| > 1/2
        CHECK_THROWS_AS(chart_to_lattice(chart, {0.0, 1.0}, -2.0), Error);  // bad covolume
    }
}

TEST_CASE("chart semistability criterion agrees with SVP-based is_semistable") {
    ModuliChart chart = make_chart(rationals(), 2);
    std::mt19937_64 rng(10001);
    std::uniform_real_distribution<double> ux(-0.5, 0.5);
    std::uniform_real_distribution<double> uy(0.0, 1.0);
    int checked = 0;
    while (checked < 250) {
        const double x = ux(rng);
        // y ranges over the fundamental domain up to 2, crossing the y = 1
        // semistability boundary.
        const double y = std::sqrt(1.0 - x * x) + uy(rng) * (2.0 - std::sqrt(1.0 - x * x));
        MetrizedLattice l = chart_to_lattice(chart, {x, y}, 1.0);
        const bool chart_says = y <= 1.0 + 1e-12;
        CHECK(is_semistable(l).semistable == chart_says);
        ++checked;
    }
}

TEST_CASE("moduli_volume: closed values") {
    CHECK(moduli_volume(rationals(), 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(moduli_volume(rationals(), 2) == doctest::Approx(kPi / 3.0 - 1.0).epsilon(1e-14));
    FieldPtr qi = load_field(data_path("fields/q_i.json"));
    CHECK(moduli_volume(qi, 1) == doctest::Approx(0.25).epsilon(1e-14));
    FieldPtr q5 = load_field(data_path("fields/q_sqrt5.json"));
    CHECK(moduli_volume(q5, 1) == doctest::Approx(0.9624236501192069).epsilon(1e-13));
    CHECK(moduli_volume(load_field(data_path("fields/q_sqrt_m3.json")), 1) ==
          doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(moduli_volume(load_field(data_path("fields/q_sqrt2.json")), 1) ==
          doctest::Approx(2.0 * std::log(1.0 + std::sqrt(2.0))).epsilon(1e-13));
    CHECK_THROWS_AS(moduli_volume(qi, 2), Error);
    try {
        moduli_volume(qi, 2);
    } catch (const Error& e) {
        CHECK(e.code() == errc::unsupported);
    }
}

TEST_CASE("chart_nodes: weights sum to the slice mass") {
    SUBCASE("(Q,1) point") {
        auto nodes = chart_nodes(make_chart(rationals(), 1), 100,
                                 QuadratureSpec::Rule::gauss_legendre, 1);
        REQUIRE(nodes.size() == 1);
        CHECK(nodes[0].weight == 1.0);
    }
    SUBCASE("(Q,2) Gauss-Legendre tensor") {
        auto nodes = chart_nodes(make_chart(rationals(), 2), 576,
                                 QuadratureSpec::Rule::gauss_legendre, 1);
        double mass = 0.0;
        for (const ChartNode& n : nodes) mass += n.weight;
        CHECK(mass == doctest::Approx(kPi / 3.0 - 1.0).epsilon(1e-12));
    }
    SUBCASE("(Q(sqrt5),1) torus mass is exact") {
        FieldPtr q5 = load_field(data_path("fields/q_sqrt5.json"));
        auto nodes = chart_nodes(make_chart(q5, 1), 64,
                                 QuadratureSpec::Rule::gauss_legendre, 1);
        double mass = 0.0;
        for (const ChartNode& n : nodes) mass += n.weight;
        CHECK(mass == doctest::Approx(moduli_volume(q5, 1)).epsilon(1e-13));
    }
    SUBCASE("(Q,2) Monte Carlo is deterministic per seed") {
        auto a = chart_nodes(make_chart(rationals(), 2), 2000,
                             QuadratureSpec::Rule::monte_carlo, 99);
        auto b = chart_nodes(make_chart(rationals(), 2), 2000,
                             QuadratureSpec::Rule::monte_carlo, 99);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].params == b[i].params);
    }
}

TEST_CASE("degree invariance: chart mass does not depend on the degree slice") {
    ModuliChart chart = make_chart(rationals(), 2);
    QuadratureSpec spec;
    spec.v_panels = 2;
    spec.chart_points = 144;
    // Same chart rule evaluated on two disjoint N-windows: per-N chart mass
    // is the same number.
    auto sum_mass = [&](double lo, double hi) {
        DegreeSliceIter it = degree_slice_iter(chart, lo, hi, spec);
        double mass = 0.0;
        while (auto p = it.next()) mass += p->weight;
        return mass;  // = chart mass * log(hi/lo)
    };
    const double m1 = sum_mass(1.0, std::exp(1.0));
    const double m2 = sum_mass(5.0, 5.0 * std::exp(1.0));
    CHECK(m1 == doctest::Approx(m2).epsilon(1e-12));
    CHECK(m1 == doctest::Approx(kPi / 3.0 - 1.0).epsilon(1e-10));
}

TEST_CASE("degree_slice_iter: spec integrals") {
    SUBCASE("constant integrand over (Q,2) x N in [1, e]") {
        QuadratureSpec spec;
        spec.v_panels = 4;
        spec.chart_points = 400;
        DegreeSliceIter it = degree_slice_iter(make_chart(rationals(), 2), 1.0, std::exp(1.0), spec);
        double total = 0.0;
        while (auto p = it.next()) total += p->weight;
        CHECK(total == doctest::Approx(kPi / 3.0 - 1.0).epsilon(1e-10));
    }
    SUBCASE("N^-2 over (Q,1), N in [1, big) integrates to 1/2") {
        QuadratureSpec spec;
        spec.v_panels = 40;
        DegreeSliceIter it = degree_slice_iter(make_chart(rationals(), 1), 1.0, 1e7, spec);
        KahanAccumulator acc;
        while (auto p = it.next()) acc.add(p->weight * std::pow(p->n_value, -2.0));
        CHECK(acc.total() == doctest::Approx(0.5).epsilon(1e-9));
    }
    SUBCASE("lattices carry the covolume matching N") {
        QuadratureSpec spec;
        spec.v_panels = 1;
        DegreeSliceIter it = degree_slice_iter(make_chart(rationals(), 1), 2.0, 3.0, spec);
        while (auto p = it.next())
            CHECK(covolume(p->lattice) == doctest::Approx(1.0 / p->n_value).epsilon(1e-12));
    }
    SUBCASE("empty range yields an empty stream") {
        QuadratureSpec spec;
        DegreeSliceIter it = degree_slice_iter(make_chart(rationals(), 1), 2.0, 2.0, spec);
        CHECK(it.size() == 0);
        CHECK_FALSE(it.next().has_value());
    }
}

TEST_CASE("monte carlo volume cross-check at 10^6 samples") {
    MonteCarloResult mc = monte_carlo_chart([](double, double) { return 1.0; }, 1000000, 777);
    CHECK(std::abs(mc.value - (kPi / 3.0 - 1.0)) <= 3.0 * mc.sigma);
}

TEST_CASE("quadrature spec JSON parsing") {
    QuadratureSpec s = QuadratureSpec::from_json_text(
        R"({"v_panels": 12, "v_max": "8.5", "chart_rule": "monte-carlo",
            "chart_points": 1000, "seed": 42})");
    CHECK(s.v_panels == 12);
    CHECK(s.v_max == 8.5);
    CHECK(s.chart_rule == QuadratureSpec::Rule::monte_carlo);
    CHECK(s.chart_points == 1000);
    CHECK(s.seed == 42);
    CHECK_THROWS_AS(QuadratureSpec::from_json_text(R"({"chart_rule": "simpson"})"), Error);
}

TEST_CASE("unsupported moduli pairs fail loudly") {
    FieldPtr qi = load_field(data_path("fields/q_i.json"));
    CHECK_THROWS_AS(make_chart(qi, 2), Error);
    CHECK_THROWS_AS(make_chart(rationals(), 3), Error);
}
