#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace adelic {

/// Result of a numerical integration: value, an error estimate that is
/// intended to dominate the true error, and the number of integrand calls.
struct QuadratureResult {
    std::complex<double> value{0.0, 0.0};
    double err = 0.0;
    long evaluations = 0;
    bool converged = true;

    double real() const { return value.real(); }
};

struct QuadOptions {
    double tol = 1e-12;      // absolute target for the error estimate
    int max_panels = 4000;   // refinement budget
    bool throw_on_failure = true;
};

using Integrand1D = std::function<std::complex<double>(double)>;
using Integrand2D = std::function<std::complex<double>(double, double)>;

/// Adaptive Gauss-Kronrod (7,15) integration of f over [a, b].
QuadratureResult quad_1d(const Integrand1D& f, double a, double b, const QuadOptions& opts = {});

/// Adaptive integration over [a, inf). The upper limit is extended by
/// doubling until the last increment falls below tol/4; the final increment
/// is folded into the reported error, so decay of f is required.
QuadratureResult quad_1d_to_inf(const Integrand1D& f, double a, const QuadOptions& opts = {});

/// Integral of f(x, y) against the hyperbolic measure dx dy / y^2 over the
/// truncated domain {|x| <= 1/2, x^2 + y^2 >= 1, y <= 1}. The substitution
/// u = 1/y turns the measure into Lebesgue du dx, which is what is
/// integrated internally.
QuadratureResult quad_chart(const Integrand2D& f, const QuadOptions& opts = {});

/// Monte Carlo estimate of integral of f dx dy / y^2 over the same truncated
/// domain. Returns (estimate, sigma) where sigma is the 1-standard-deviation
/// statistical error. Deterministic for a fixed seed.
struct MonteCarloResult {
    double value = 0.0;
    double sigma = 0.0;
    std::uint64_t samples = 0;
};
MonteCarloResult monte_carlo_chart(const std::function<double(double, double)>& f,
                                   std::uint64_t samples, std::uint64_t seed);

/// Neumaier compensated accumulator; summation order still matters for the
/// low-order bits, so callers keep a fixed schedule.
class KahanAccumulator {
  public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double total() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Gauss-Legendre nodes/weights on [-1, 1], computed by Newton iteration.
/// Deterministic for a given n.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Rigorous upper bound for the upper incomplete gamma function
/// Gamma(a, x) = int_x^inf t^(a-1) e^(-t) dt, valid for x > max(a - 1, 0).
double upper_gamma_bound(double a, double x);

/// Upper bound for int_X^inf t^p e^(-c t) dt, c > 0, X > max(p/c, 0).
double tail_pow_exp_bound(double p, double c, double X);

}  // namespace adelic
