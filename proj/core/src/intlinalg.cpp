#include "intlinalg.hpp"

#include <cstdlib>
#include <vector>

#include "adelic/errors.hpp"

namespace adelic::intlin {

namespace {

/// Gcd-style elimination below the staircase: after the call, rows pivot..N-1
/// of column col are zero except possibly row pivot. Returns true if the
/// column carries a pivot. All operations are row-unimodular; the optional
/// tracker is called for every elementary operation so callers can maintain
/// transforms.
struct OpTracker {
    virtual void add_row(Eigen::Index dst, Eigen::Index src, long long q) = 0;
    virtual void swap_rows(Eigen::Index i, Eigen::Index j) = 0;
    virtual void negate_row(Eigen::Index i) = 0;
    virtual ~OpTracker() = default;
};

void do_add(IMat& m, Eigen::Index dst, Eigen::Index src, long long q, OpTracker* t) {
    m.row(dst) -= q * m.row(src);
    if (t) t->add_row(dst, src, q);
}
void do_swap(IMat& m, Eigen::Index i, Eigen::Index j, OpTracker* t) {
    if (i == j) return;
    m.row(i).swap(m.row(j));
    if (t) t->swap_rows(i, j);
}
void do_negate(IMat& m, Eigen::Index i, OpTracker* t) {
    m.row(i) = -m.row(i);
    if (t) t->negate_row(i);
}

bool eliminate_column(IMat& m, Eigen::Index pivot_row, Eigen::Index col, OpTracker* t) {
    const Eigen::Index n = m.rows();
    while (true) {
        Eigen::Index best = -1;
        for (Eigen::Index i = pivot_row; i < n; ++i)
            if (m(i, col) != 0 && (best < 0 || std::llabs(m(i, col)) < std::llabs(m(best, col))))
                best = i;
        if (best < 0) return false;
        do_swap(m, pivot_row, best, t);
        bool clean = true;
        for (Eigen::Index i = pivot_row + 1; i < n; ++i) {
            if (m(i, col) == 0) continue;
            const long long q = m(i, col) / m(pivot_row, col);
            if (q != 0) do_add(m, i, pivot_row, q, t);
            if (m(i, col) != 0) clean = false;
        }
        if (clean) break;
    }
    if (m(pivot_row, col) < 0) do_negate(m, pivot_row, t);
    return true;
}

/// Reduce to staircase over the first `cols` columns; returns the pivot
/// columns. Rows below the staircase are zero in those columns.
std::vector<Eigen::Index> staircase(IMat& m, Eigen::Index cols, OpTracker* t) {
    std::vector<Eigen::Index> pivots;
    Eigen::Index r = 0;
    for (Eigen::Index c = 0; c < cols && r < m.rows(); ++c) {
        if (eliminate_column(m, r, c, t)) {
            pivots.push_back(c);
            ++r;
        }
    }
    return pivots;
}

}  // namespace

IMat hnf_rows(IMat m) {
    std::vector<Eigen::Index> pivots = staircase(m, m.cols(), nullptr);
    const Eigen::Index rank = static_cast<Eigen::Index>(pivots.size());
    // Reduce entries above each pivot into [0, pivot).
    for (Eigen::Index r = 0; r < rank; ++r) {
        const Eigen::Index c = pivots[static_cast<std::size_t>(r)];
        for (Eigen::Index i = 0; i < r; ++i) {
            long long q = m(i, c) / m(r, c);
            if (m(i, c) - q * m(r, c) < 0) --q;  // floor division
            if (q != 0) m.row(i) -= q * m.row(r);
        }
    }
    return m.topRows(rank);
}

IMat right_kernel(const IMat& m) {
    const Eigen::Index n = m.cols();
    // Row-reduce [m^T | I]; rows whose m^T-part vanishes carry a kernel basis
    // in the identity part, and they are primitive because the accumulated
    // transform is unimodular.
    IMat a(n, m.rows() + n);
    a.leftCols(m.rows()) = m.transpose();
    a.rightCols(n) = IMat::Identity(n, n);
    std::vector<Eigen::Index> pivots = staircase(a, m.rows(), nullptr);
    const Eigen::Index rank = static_cast<Eigen::Index>(pivots.size());
    IMat kernel(n - rank, n);
    for (Eigen::Index i = rank; i < n; ++i) kernel.row(i - rank) = a.row(i).rightCols(n);
    return hnf_rows(kernel);
}

IMat saturate_rows(const IMat& m) {
    return right_kernel(right_kernel(m));
}

namespace {

struct InverseTracker final : OpTracker {
    explicit InverseTracker(Eigen::Index n) : inv(IMat::Identity(n, n)) {}
    void add_row(Eigen::Index dst, Eigen::Index src, long long q) override {
        // P <- E P with E = I - q e_dst e_src^T, so Pinv <- Pinv E^{-1}:
        // column src gains q times column dst.
        inv.col(src) += q * inv.col(dst);
    }
    void swap_rows(Eigen::Index i, Eigen::Index j) override { inv.col(i).swap(inv.col(j)); }
    void negate_row(Eigen::Index i) override { inv.col(i) = -inv.col(i); }
    IMat inv;
};

}  // namespace

IMat unimodular_completion(const IMat& c) {
    const Eigen::Index k = c.rows();
    const Eigen::Index n = c.cols();
    IMat a = c.transpose();
    InverseTracker tracker(n);
    std::vector<Eigen::Index> pivots = staircase(a, k, &tracker);
    if (static_cast<Eigen::Index>(pivots.size()) != k)
        fail(errc::invariant_violation, "unimodular_completion: input rows are dependent");
    // P c^T = [T; 0]  =>  c = T^T F with F the first k rows of (P^{-1})^T.
    // Saturation of c forces |det T| = 1, so F spans the same sublattice.
    IMat e = tracker.inv.transpose();
    if (!same_row_span(e.topRows(k), c))
        fail(errc::invariant_violation, "unimodular_completion: input must be saturated");
    return e;
}

bool same_row_span(const IMat& a, const IMat& b) {
    const IMat ha = hnf_rows(a);
    const IMat hb = hnf_rows(b);
    return ha.rows() == hb.rows() && ha.cols() == hb.cols() && ha == hb;
}

}  // namespace adelic::intlin
