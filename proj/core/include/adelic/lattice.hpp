#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <vector>

#include "adelic/field_data.hpp"

namespace adelic {

/// A full-rank lattice in weighted Minkowski space, given by a generator
/// matrix whose rows form a Z-basis. For a field of degree n and module rank
/// r the ambient dimension is N = r * n. Immutable after construction.
class MetrizedLattice {
  public:
    /// Validates shape and non-degeneracy: the generator must be square of
    /// size rank * degree, and |det| must exceed 1e-12 times the Hadamard
    /// bound (product of row norms). Near-singular input is rejected here,
    /// not at operation time.
    static MetrizedLattice create(FieldPtr field, int rank_over_field, Eigen::MatrixXd generator);

    const FieldPtr& field() const { return field_; }
    int rank_over_field() const { return rank_; }
    const Eigen::MatrixXd& generator() const { return generator_; }
    int ambient_dim() const { return static_cast<int>(generator_.rows()); }

    Eigen::MatrixXd gram() const { return generator_ * generator_.transpose(); }

  private:
    MetrizedLattice(FieldPtr field, int rank, Eigen::MatrixXd gen)
        : field_(std::move(field)), rank_(rank), generator_(std::move(gen)) {}

    FieldPtr field_;
    int rank_;
    Eigen::MatrixXd generator_;
};

/// |det(generator)|.
double covolume(const MetrizedLattice& lattice);

/// Arakelov degree: (r/2) log|disc| - log covolume. Normalised so the
/// standard lattice O_F has degree 0 and the additive Riemann-Roch residual
/// reduces to the Poisson summation defect.
double degree(const MetrizedLattice& lattice);

/// Euclidean dual: generator' = (generator^-1)^T. For module lattices the
/// trace-form/different bookkeeping is certified by the field loader, so
/// this is also the arithmetic dual kappa tensor inverse.
MetrizedLattice dual(const MetrizedLattice& lattice);

/// Scale the generator by e^t. Shifts the degree by -r*n*t and every slope
/// by the same amount, so stability status is preserved.
MetrizedLattice bv_twist(const MetrizedLattice& lattice, double t);

/// O_F itself as a rank-1 metrized lattice (degree 0).
MetrizedLattice standard_lattice(const FieldPtr& field);

/// The dualizing lattice: the inverse different with the same metric
/// convention. degree(kappa) - degree(standard) = log|disc|.
MetrizedLattice kappa_lattice(const FieldPtr& field);

struct EnumerateOptions {
    double capacity = 1e8;  // abort when the vector count would exceed this
};

/// All lattice vectors of Euclidean norm <= radius, zero vector included,
/// in a canonical deterministic order (by norm, then lexicographic
/// coefficients). Fincke-Pohst enumeration on an LLL-reduced basis.
std::vector<Eigen::VectorXd> enumerate_ball(const MetrizedLattice& lattice, double radius,
                                            const EnumerateOptions& opts = {});

/// Same vectors, as integer coefficient rows with respect to the lattice's
/// own generator (row i of the result * generator = vector i).
Eigen::MatrixXi enumerate_coefficients(const MetrizedLattice& lattice, double radius,
                                       const EnumerateOptions& opts = {});

/// Euclidean length of a shortest nonzero vector (exact SVP via enumeration).
double min_norm(const MetrizedLattice& lattice);

/// A theta series evaluation together with a rigorous bound on the discarded
/// tail and the enumeration radius that was used.
struct ThetaValue {
    double value = 1.0;
    double tail_bound = 0.0;
    double radius = 0.0;
};

/// theta(L) = sum_{v in L} exp(-pi |v|^2), with tail_bound <= tol.
/// The cutoff radius is chosen from the shortest-vector length via a
/// shell-counting bound; see theta_tail_bound.
ThetaValue theta(const MetrizedLattice& lattice, double tol, const EnumerateOptions& opts = {});

/// Upper bound for sum over |v| > radius of exp(-pi |v|^2), given a lower
/// bound lambda for the shortest nonzero vector length of the lattice.
/// Rigorous for radius >= lambda > 0.
double theta_tail_bound(double lambda, int dim, double radius);

/// Load a lattice JSON file {"field": path-or-"Q", "rank_over_field": r,
/// "generator": [[...]]}. A relative field path is resolved against the
/// lattice file's directory.
MetrizedLattice load_lattice(const std::filesystem::path& path);

}  // namespace adelic
