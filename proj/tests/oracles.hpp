#pragma once

// Test-side oracles, implemented independently of the library code paths
// they are used to check. Everything here is a direct, naive computation:
// coefficient-box enumeration, term-by-term series, classical special
// functions, and parallelogram-index saturation for brute-force slopes.

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace oracles {

using Complex = std::complex<double>;

/// All lattice vectors of norm <= radius by brute force over a coefficient
/// box (no LLL, no pruning). Rows of `generator` are the basis.
std::vector<Eigen::VectorXd> naive_ball(const Eigen::MatrixXd& generator, double radius);

/// Integer coefficient vectors of the same set.
std::vector<Eigen::VectorXi> naive_ball_coeffs(const Eigen::MatrixXd& generator, double radius);

/// Direct theta summation sum exp(-pi |v|^2) over a box that is grown until
/// the value stabilises to ~1e-15.
double naive_theta(const Eigen::MatrixXd& generator);

/// Riemann zeta for complex s (Re s > -12 or so), Euler-Maclaurin.
Complex riemann_zeta(Complex s);

/// Gamma function for complex argument, Lanczos with reflection.
Complex gamma_fn(Complex s);

/// Completed zeta pi^(-s/2) Gamma(s/2) zeta(s).
Complex completed_zeta(Complex s);

/// Exponential integral E1(x), x > 0.
double expint_e1(double x);

/// Brute-force maximal slope over proper sublattices spanned by enumerated
/// vectors of norm <= radius (ranks 1 and, for 3x3 generators, rank 2 with
/// exact saturation via parallelogram point counting). Returns the maximal
/// slope found; degree convention deg = -log covol (lattices over Q).
double brute_force_max_slope(const Eigen::MatrixXd& generator, double radius);

}  // namespace oracles
