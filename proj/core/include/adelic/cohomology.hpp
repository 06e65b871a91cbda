#pragma once

#include "adelic/lattice.hpp"

namespace adelic {

/// A value together with a propagated rigorous bound on its error. Tests
/// assert |value| <= bound for the residual identities instead of comparing
/// against magic constants.
struct Bounded {
    double value = 0.0;
    double bound = 0.0;
};

/// h^0 = log theta(L). Always >= 0 since theta >= 1.
Bounded h0(const MetrizedLattice& lattice, double tol);

/// h^1 = h^0 of the dual lattice (Serre duality taken as the definition).
Bounded h1(const MetrizedLattice& lattice, double tol);

/// Additive Riemann-Roch defect:
///   (h0 - h1) - (deg - (r/2) log|disc|).
/// Identically zero by Poisson summation; the returned bound is the
/// propagated theta tail error.
Bounded rr_residual(const MetrizedLattice& lattice, double tol);

/// Multiplicative Serre duality / Riemann-Roch defect:
///   e^{h0} - e^{h1} * N(L) * |disc|^{-r/2},  N(L) = e^{deg(L)}.
Bounded serre_residual(const MetrizedLattice& lattice, double tol);

}  // namespace adelic
