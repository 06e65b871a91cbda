#pragma once

#include <Eigen/Dense>

namespace adelic::intlin {

using IMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

/// Canonical row Hermite normal form of the row span: staircase shape,
/// positive pivots, entries above each pivot reduced into [0, pivot).
/// Zero rows are trimmed, so the result has rank(m) rows.
IMat hnf_rows(IMat m);

/// Basis of {x in Z^N : m x = 0} as rows ((N - rank) x N), in HNF. The
/// kernel of an integer matrix is saturated by construction.
IMat right_kernel(const IMat& m);

/// Saturation of the row span of m: (Q-span of rows) intersected with Z^N,
/// returned in HNF. Computed as the right kernel of the right kernel.
IMat saturate_rows(const IMat& m);

/// For a saturated full-row-rank k x N matrix c, returns an N x N
/// unimodular matrix whose first k rows span the same sublattice as c.
IMat unimodular_completion(const IMat& c);

/// True if the two matrices span the same sublattice of Z^N.
bool same_row_span(const IMat& a, const IMat& b);

}  // namespace adelic::intlin
