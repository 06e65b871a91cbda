#include <cmath>
#include <limits>
#include <vector>

#include "adelic/errors.hpp"
#include "adelic/lattice.hpp"
#include "adelic/numerics.hpp"

namespace adelic {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

double theta_tail_bound(double lambda, int dim, double radius) {
    // Points of a lattice with shortest vector lambda carry disjoint open
    // balls of radius lambda/2, so #{|v| <= u} <= (2u/lambda + 1)^dim. With
    // C(u) = #{R < |v| <= u}, partial integration gives
    //   sum_{|v| > R} e^(-pi |v|^2) <= int_R^inf 2 pi u e^(-pi u^2) C(u) du,
    // and expanding the binomial reduces each term to an upper incomplete
    // gamma function.
    if (!(lambda > 0.0) || radius < 0.0) return std::numeric_limits<double>::infinity();
    const double x = kPi * radius * radius;
    if (x <= 0.5 * dim + 1e-9) return std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (int k = 0; k <= dim; ++k) {
        total += binom(dim, k) * std::pow(2.0 / lambda, k) * std::pow(kPi, -0.5 * k) *
                 upper_gamma_bound(0.5 * k + 1.0, x);
    }
    return total;
}

ThetaValue theta(const MetrizedLattice& lattice, double tol, const EnumerateOptions& opts) {
    if (!(tol > 0.0)) fail(errc::domain_error, "theta: tol must be positive");
    const int dim = lattice.ambient_dim();
    const double lambda = min_norm(lattice);

    double radius = std::max(lambda, std::sqrt((0.5 * dim + 2.0) / kPi));
    double bound = theta_tail_bound(lambda, dim, radius);
    int guard = 0;
    while (!(bound <= 0.9 * tol) && ++guard < 2000) {
        radius *= 1.1;
        bound = theta_tail_bound(lambda, dim, radius);
    }
    if (!(bound <= 0.9 * tol))
        fail(errc::non_convergence, "theta: could not find a radius meeting the tolerance");

    std::vector<Eigen::VectorXd> vectors = enumerate_ball(lattice, radius, opts);
    // Canonical order is by increasing norm; summing in reverse adds the
    // smallest exponentials first.
    KahanAccumulator acc;
    for (std::size_t i = vectors.size(); i-- > 0;)
        acc.add(std::exp(-kPi * vectors[i].squaredNorm()));
    ThetaValue out;
    out.value = acc.total();
    out.tail_bound = bound;
    out.radius = radius;
    if (out.value < 1.0) out.value = 1.0;  // zero vector contributes 1; guard roundoff
    return out;
}

}  // namespace adelic
