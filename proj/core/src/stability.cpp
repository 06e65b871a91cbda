#include "adelic/stability.hpp"

#include <cmath>
#include <set>
#include <vector>

#include "adelic/errors.hpp"
#include "intlinalg.hpp"

namespace adelic {

namespace {

using intlin::IMat;

IMat to_imat(const Eigen::MatrixXi& m) { return m.cast<long long>(); }

Eigen::MatrixXi to_int(const IMat& m) {
    Eigen::MatrixXi out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = static_cast<int>(m(i, j));
    return out;
}

/// Degree of the sublattice spanned by the given saturated coefficient rows,
/// in the parent's metric: (r_sub/2) log|disc| - log covol_k, where covol_k
/// is the k-dimensional volume and r_sub the module rank.
SubLattice make_sub(const MetrizedLattice& parent, const IMat& coeffs_hnf) {
    SubLattice s;
    s.coeffs = to_int(coeffs_hnf);
    s.sub_generator = s.coeffs.cast<double>() * parent.generator();
    const int n = parent.field()->degree;
    const Eigen::Index k = coeffs_hnf.rows();
    if (k % n != 0)
        fail(errc::not_a_module, "sublattice rank is not a multiple of the field degree");
    s.rank = static_cast<int>(k) / n;
    const Eigen::MatrixXd gram = s.sub_generator * s.sub_generator.transpose();
    const double covol = std::sqrt(gram.determinant());
    s.degree = 0.5 * s.rank * parent.field()->log_abs_disc() - std::log(covol);
    s.slope = s.degree / s.rank;
    return s;
}

bool lex_less(const Eigen::MatrixXi& a, const Eigen::MatrixXi& b) {
    if (a.rows() != b.rows()) return a.rows() < b.rows();
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (a(i, j) != b(i, j)) return a(i, j) < b(i, j);
    return false;
}

/// Slope maximisation with the documented tie convention: slope first
/// (1e-12 window), then larger rank, then lexicographically smallest
/// canonical basis.
bool better(const SubLattice& a, const SubLattice& b) {
    if (a.slope > b.slope + 1e-12) return true;
    if (b.slope > a.slope + 1e-12) return false;
    if (a.rank != b.rank) return a.rank > b.rank;
    return lex_less(a.coeffs, b.coeffs);
}

std::vector<Eigen::VectorXi> shortest_vector_coeffs(const MetrizedLattice& lattice) {
    const double lambda = min_norm(lattice);
    const Eigen::MatrixXi coeffs = enumerate_coefficients(lattice, lambda * (1.0 + 1e-9));
    std::vector<Eigen::VectorXi> out;
    const double cutoff2 = lambda * lambda * (1.0 + 3e-9);
    for (Eigen::Index i = 0; i < coeffs.rows(); ++i) {
        Eigen::VectorXi x = coeffs.row(i).transpose();
        if (x.isZero()) continue;
        Eigen::VectorXd v = lattice.generator().transpose() * x.cast<double>();
        if (v.squaredNorm() <= cutoff2) out.push_back(std::move(x));
    }
    return out;
}

struct CandidateSet {
    std::set<std::vector<long long>> seen;
    std::vector<SubLattice> subs;

    void add(const MetrizedLattice& parent, IMat coeffs) {
        coeffs = intlin::hnf_rows(coeffs);
        if (coeffs.rows() == 0 || coeffs.rows() == coeffs.cols()) return;  // proper only
        std::vector<long long> key(coeffs.data(), coeffs.data() + coeffs.size());
        key.push_back(coeffs.rows());
        if (!seen.insert(std::move(key)).second) return;
        subs.push_back(make_sub(parent, coeffs));
    }
};

/// Multiplication-by-x acting on ambient row vectors, assembled from the
/// coordinates of x's embedding row. Columns 0..r1-1 are the real places;
/// the remaining columns hold sqrt(2)-weighted complex pairs.
Eigen::MatrixXd row_mult_matrix(const NumberFieldData& field, const Eigen::VectorXd& emb_row,
                                int copies) {
    const int n = field.degree;
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < field.r1; ++i) block(i, i) = emb_row(i);
    for (int p = 0; p < field.r2; ++p) {
        const int c = field.r1 + 2 * p;
        const double re = emb_row(c) / std::sqrt(2.0);
        const double im = emb_row(c + 1) / std::sqrt(2.0);
        block(c, c) = re;
        block(c, c + 1) = im;
        block(c + 1, c) = -im;
        block(c + 1, c + 1) = re;
    }
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n * copies, n * copies);
    for (int b = 0; b < copies; ++b) out.block(b * n, b * n, n, n) = block;
    return out;
}

/// The O_F-line through the lattice vector with the given coefficients:
/// coefficient rows of omega_j * v for every basis element, saturated.
IMat module_line_coeffs(const MetrizedLattice& lattice, const Eigen::VectorXi& x) {
    const NumberFieldData& field = *lattice.field();
    const int n = field.degree;
    const Eigen::Index N = lattice.generator().rows();
    const Eigen::MatrixXd& gen = lattice.generator();
    const Eigen::MatrixXd gen_inv = gen.inverse();
    IMat rows(n, N);
    Eigen::RowVectorXd v = x.cast<double>().transpose() * gen;
    for (int j = 0; j < n; ++j) {
        const Eigen::MatrixXd mult =
            row_mult_matrix(field, field.basis_embedding.row(j), lattice.rank_over_field());
        Eigen::RowVectorXd w = v * mult;
        Eigen::RowVectorXd y = w * gen_inv;
        for (Eigen::Index c = 0; c < N; ++c) {
            const double r = std::round(y(c));
            if (std::abs(y(c) - r) > 1e-7)
                fail(errc::not_a_module,
                     "lattice is not stable under the ring action; module-mode stability "
                     "requires an O_F-module lattice");
            rows(j, c) = static_cast<long long>(r);
        }
    }
    return intlin::saturate_rows(rows);
}

MaxSlopeResult max_slope_sub_q(const MetrizedLattice& lattice, bool allow_uncertified) {
    const Eigen::Index N = lattice.generator().rows();
    CandidateSet cands;

    // Rank-1 candidates: saturated lines through shortest vectors.
    for (const Eigen::VectorXi& x : shortest_vector_coeffs(lattice))
        cands.add(lattice, intlin::saturate_rows(to_imat(x.transpose())));

    // Corank-1 candidates: kernels of shortest dual vectors. For N = 2 the
    // rank-1 route above already covers them.
    if (N >= 3) {
        const MetrizedLattice dl = dual(lattice);
        for (const Eigen::VectorXi& y : shortest_vector_coeffs(dl))
            cands.add(lattice, intlin::right_kernel(to_imat(y.transpose())));
    }

    bool certified = N <= 3;
    if (!certified) {
        if (!allow_uncertified)
            fail(errc::uncertified_rank,
                 "max_slope_sub: exact search is certified only for rank <= 3 over Q; "
                 "pass allow_uncertified for a best-effort answer");
        // Best effort: saturations of small sets of short vectors.
        const double covol = covolume(lattice);
        const double radius =
            2.0 * std::sqrt(static_cast<double>(N)) * std::pow(covol, 1.0 / static_cast<double>(N));
        Eigen::MatrixXi coeffs = enumerate_coefficients(lattice, radius);
        std::vector<Eigen::VectorXi> vs;
        for (Eigen::Index i = 0; i < coeffs.rows() && vs.size() < 48; ++i) {
            if (coeffs.row(i).isZero()) continue;
            vs.push_back(coeffs.row(i).transpose());
        }
        for (std::size_t a = 0; a < vs.size(); ++a)
            for (std::size_t b = a + 1; b < vs.size(); ++b) {
                IMat pair(2, N);
                pair.row(0) = to_imat(vs[a].transpose());
                pair.row(1) = to_imat(vs[b].transpose());
                const IMat sat = intlin::saturate_rows(pair);
                if (sat.rows() >= 2) cands.add(lattice, sat);
            }
    }

    if (cands.subs.empty())
        fail(errc::domain_error, "max_slope_sub: lattice has no proper nonzero sublattices");
    const SubLattice* best = &cands.subs.front();
    for (const SubLattice& s : cands.subs)
        if (better(s, *best)) best = &s;
    return {*best, certified};
}

MaxSlopeResult max_slope_sub_module(const MetrizedLattice& lattice, bool allow_uncertified) {
    const int r = lattice.rank_over_field();
    const int n = lattice.field()->degree;
    if (r == 1)
        fail(errc::domain_error,
             "max_slope_sub: a rank-1 module lattice has no proper sub vector sheaves");
    if (r != 2 || n != 2) {
        if (!allow_uncertified)
            fail(errc::uncertified_rank,
                 "max_slope_sub: module mode supports rank 2 over quadratic fields only");
    }
    // O_F-lines through short vectors. Experimental: the enumeration radius
    // is heuristic, so the result is reported as uncertified.
    const Eigen::Index N = lattice.generator().rows();
    const double covol = covolume(lattice);
    const double radius = std::max(
        min_norm(lattice) * (1.0 + 1e-9),
        2.0 * std::sqrt(static_cast<double>(N)) * std::pow(covol, 1.0 / static_cast<double>(N)));
    Eigen::MatrixXi coeffs = enumerate_coefficients(lattice, radius);
    CandidateSet cands;
    for (Eigen::Index i = 0; i < coeffs.rows(); ++i) {
        if (coeffs.row(i).isZero()) continue;
        cands.add(lattice, module_line_coeffs(lattice, coeffs.row(i).transpose()));
    }
    if (cands.subs.empty())
        fail(errc::domain_error, "max_slope_sub: no candidate O_F-lines found");
    const SubLattice* best = &cands.subs.front();
    for (const SubLattice& s : cands.subs)
        if (better(s, *best)) best = &s;
    return {*best, false};
}

}  // namespace

double slope(const MetrizedLattice& lattice) {
    return degree(lattice) / lattice.rank_over_field();
}

MaxSlopeResult max_slope_sub(const MetrizedLattice& lattice, bool allow_uncertified) {
    if (lattice.field()->is_rationals()) return max_slope_sub_q(lattice, allow_uncertified);
    return max_slope_sub_module(lattice, allow_uncertified);
}

Semistability is_semistable(const MetrizedLattice& lattice, bool allow_uncertified) {
    Semistability out;
    out.lattice_slope = slope(lattice);
    const bool trivial = lattice.field()->is_rationals() ? lattice.generator().rows() == 1
                                                         : lattice.rank_over_field() == 1;
    if (trivial) {
        out.semistable = true;
        out.certified = true;
        return out;
    }
    MaxSlopeResult ms = max_slope_sub(lattice, allow_uncertified);
    out.certificate = ms.sub;
    out.certified = ms.certified;
    out.semistable = ms.sub.slope <= out.lattice_slope + 1e-12;
    return out;
}

std::vector<std::pair<double, double>> HNFiltration::polygon() const {
    std::vector<std::pair<double, double>> v;
    v.emplace_back(0.0, 0.0);
    for (const HNStep& s : steps) v.emplace_back(s.rank, s.degree);
    return v;
}

std::vector<double> HNFiltration::quotient_slopes() const {
    std::vector<double> v;
    double pr = 0.0, pd = 0.0;
    for (const HNStep& s : steps) {
        v.push_back((s.degree - pd) / (s.rank - pr));
        pr = s.rank;
        pd = s.degree;
    }
    return v;
}

namespace {

HNStep full_step(const MetrizedLattice& lattice) {
    HNStep s;
    s.rank = lattice.rank_over_field();
    s.degree = degree(lattice);
    s.slope = slope(lattice);
    const Eigen::Index N = lattice.generator().rows();
    s.coeffs = Eigen::MatrixXi::Identity(N, N);
    s.sub_generator = lattice.generator();
    return s;
}

}  // namespace

HNFiltration hn_filtration(const MetrizedLattice& lattice, bool allow_uncertified) {
    HNFiltration out;
    Semistability ss = is_semistable(lattice, allow_uncertified);
    out.certified = ss.certified;
    if (ss.semistable) {
        out.steps.push_back(full_step(lattice));
        return out;
    }

    const MaxSlopeResult ms = max_slope_sub(lattice, allow_uncertified);
    HNStep first;
    first.rank = ms.sub.rank;
    first.degree = ms.sub.degree;
    first.slope = ms.sub.slope;
    first.coeffs = ms.sub.coeffs;
    first.sub_generator = ms.sub.sub_generator;
    out.steps.push_back(first);
    out.certified = out.certified && ms.certified;

    // Quotient lattice: complete the sub basis to a unimodular basis, then
    // project the complementary rows onto the orthogonal complement of the
    // sub, expressed in an orthonormal frame so the quotient is again a
    // square-generator lattice.
    const Eigen::Index N = lattice.generator().rows();
    const Eigen::Index k = ms.sub.coeffs.rows();
    const IMat e = intlin::unimodular_completion(to_imat(ms.sub.coeffs));
    const Eigen::MatrixXd ebot =
        e.bottomRows(N - k).cast<double>() * lattice.generator();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(ms.sub.sub_generator.transpose());
    const Eigen::MatrixXd qfull = qr.householderQ();
    const Eigen::MatrixXd w = qfull.rightCols(N - k);
    MetrizedLattice quotient = MetrizedLattice::create(
        lattice.field(), lattice.rank_over_field() - ms.sub.rank, ebot * w);

    const HNFiltration rest = hn_filtration(quotient, allow_uncertified);
    out.certified = out.certified && rest.certified;
    for (const HNStep& qs : rest.steps) {
        // Lift: preimage of the quotient step under the projection.
        IMat lifted(k + qs.coeffs.rows(), N);
        lifted.topRows(k) = to_imat(ms.sub.coeffs);
        lifted.bottomRows(qs.coeffs.rows()) =
            to_imat(qs.coeffs) * e.bottomRows(N - k);
        const IMat sat = intlin::hnf_rows(lifted);
        if (sat.rows() == N) {
            out.steps.push_back(full_step(lattice));
        } else {
            const SubLattice sub = make_sub(lattice, sat);
            HNStep st;
            st.rank = sub.rank;
            st.degree = sub.degree;
            st.slope = sub.slope;
            st.coeffs = sub.coeffs;
            st.sub_generator = sub.sub_generator;
            out.steps.push_back(st);
        }
    }

    // The polygon of a slope filtration built this way must be concave.
    const std::vector<double> mus = out.quotient_slopes();
    for (std::size_t i = 1; i < mus.size(); ++i)
        if (!(mus[i] < mus[i - 1] + 1e-9))
            fail(errc::invariant_violation, "hn_filtration: quotient slopes are not decreasing");
    return out;
}

}  // namespace adelic
