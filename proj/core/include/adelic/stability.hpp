#pragma once

#include <vector>

#include "adelic/lattice.hpp"

namespace adelic {

/// A saturated sublattice of a MetrizedLattice, carried as integer
/// coefficient rows with respect to the parent's generator together with the
/// induced generator (coeffs * parent generator).
struct SubLattice {
    Eigen::MatrixXi coeffs;        // k x N, rows in canonical HNF
    Eigen::MatrixXd sub_generator; // k x N, rows in ambient coordinates
    int rank = 0;                  // module rank (k / degree in module mode)
    double degree = 0.0;
    double slope = 0.0;
};

/// Arakelov slope deg/rank; rank is the module rank over the field.
double slope(const MetrizedLattice& lattice);

struct MaxSlopeResult {
    SubLattice sub;
    bool certified = true;
};

/// A proper saturated sublattice of maximal slope. Certified-exact for
/// rank <= 3 over Q (rank-1 candidates from exact SVP on L, corank-1 from
/// exact SVP on the dual); module mode supports rank 1 trivially and rank 2
/// over quadratic fields through O_F-lines (experimental). Higher ranks
/// throw Error(uncertified_rank) unless allow_uncertified is set, in which
/// case a best-effort answer is returned with certified = false.
/// Ties are broken by larger rank, then lexicographically smallest
/// canonical coefficient basis.
MaxSlopeResult max_slope_sub(const MetrizedLattice& lattice, bool allow_uncertified = false);

struct Semistability {
    bool semistable = true;
    bool certified = true;
    double lattice_slope = 0.0;
    SubLattice certificate;  // the maximizing proper sublattice
};

/// Semistable iff no proper saturated sublattice has slope exceeding
/// slope(L) + 1e-12.
Semistability is_semistable(const MetrizedLattice& lattice, bool allow_uncertified = false);

struct HNStep {
    int rank = 0;        // module rank of the step
    double degree = 0.0;
    double slope = 0.0;  // degree / rank of the step lattice itself
    Eigen::MatrixXi coeffs;
    Eigen::MatrixXd sub_generator;
};

/// Canonical slope filtration. steps.back() is the full lattice; successive
/// quotient slopes (d_i - d_{i-1}) / (r_i - r_{i-1}) strictly decrease, i.e.
/// the rank-degree polygon is concave. A semistable lattice yields the
/// single full step.
struct HNFiltration {
    std::vector<HNStep> steps;
    bool certified = true;

    /// Polygon vertices (rank, degree), starting at (0, 0).
    std::vector<std::pair<double, double>> polygon() const;
    /// Slopes of the graded quotients, in filtration order.
    std::vector<double> quotient_slopes() const;
};

HNFiltration hn_filtration(const MetrizedLattice& lattice, bool allow_uncertified = false);

}  // namespace adelic
