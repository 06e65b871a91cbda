#include "adelic/cohomology.hpp"

#include <cmath>

#include "adelic/errors.hpp"

namespace adelic {

Bounded h0(const MetrizedLattice& lattice, double tol) {
    const ThetaValue t = theta(lattice, tol);
    // d log(theta) = d theta / theta and theta >= 1.
    return {std::log(t.value), t.tail_bound / t.value};
}

Bounded h1(const MetrizedLattice& lattice, double tol) {
    return h0(dual(lattice), tol);
}

Bounded rr_residual(const MetrizedLattice& lattice, double tol) {
    const Bounded a = h0(lattice, tol);
    const Bounded b = h1(lattice, tol);
    const double expected = degree(lattice) -
                            0.5 * lattice.rank_over_field() * lattice.field()->log_abs_disc();
    return {(a.value - b.value) - expected, a.bound + b.bound};
}

Bounded serre_residual(const MetrizedLattice& lattice, double tol) {
    const ThetaValue t = theta(lattice, tol);
    const ThetaValue td = theta(dual(lattice), tol);
    const double factor =
        std::exp(degree(lattice)) *
        std::pow(std::abs(static_cast<double>(lattice.field()->discriminant)),
                 -0.5 * lattice.rank_over_field());
    return {t.value - td.value * factor, t.tail_bound + td.tail_bound * factor};
}

}  // namespace adelic
