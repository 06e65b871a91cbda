#include <algorithm>
#include <cmath>
#include <vector>

#include "adelic/errors.hpp"
#include "adelic/lattice.hpp"

namespace adelic {

namespace {

using IMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

struct Gso {
    Eigen::MatrixXd mu;        // mu(i, j), j < i
    Eigen::VectorXd bstar2;    // |b_i*|^2
};

Gso gram_schmidt(const Eigen::MatrixXd& b) {
    const Eigen::Index n = b.rows();
    Gso g;
    g.mu = Eigen::MatrixXd::Zero(n, n);
    g.bstar2 = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd bstar = b;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < i; ++j) {
            g.mu(i, j) = b.row(i).dot(bstar.row(j)) / g.bstar2(j);
            bstar.row(i) -= g.mu(i, j) * bstar.row(j);
        }
        g.bstar2(i) = bstar.row(i).squaredNorm();
    }
    return g;
}

/// LLL with delta = 0.99 on the rows of basis; the unimodular transform is
/// accumulated so that reduced = transform * original.
void lll_reduce(Eigen::MatrixXd& b, IMat& u) {
    const Eigen::Index n = b.rows();
    u = IMat::Identity(n, n);
    if (n <= 1) return;
    const double delta = 0.99;
    Gso g = gram_schmidt(b);
    Eigen::Index k = 1;
    int guard = 0;
    while (k < n && ++guard < 100000) {
        for (Eigen::Index j = k - 1; j >= 0; --j) {
            const double q = std::round(g.mu(k, j));
            if (q != 0.0) {
                b.row(k) -= q * b.row(j);
                u.row(k) -= static_cast<long long>(q) * u.row(j);
                for (Eigen::Index l = 0; l < j; ++l) g.mu(k, l) -= q * g.mu(j, l);
                g.mu(k, j) -= q;
            }
        }
        if (g.bstar2(k) >= (delta - g.mu(k, k - 1) * g.mu(k, k - 1)) * g.bstar2(k - 1)) {
            ++k;
        } else {
            b.row(k).swap(b.row(k - 1));
            u.row(k).swap(u.row(k - 1));
            g = gram_schmidt(b);  // full GSO recompute; dimensions here are tiny
            k = std::max<Eigen::Index>(1, k - 1);
        }
    }
}

/// Fincke-Pohst over the reduced basis. Emits one representative of each
/// +-pair (the trailing nonzero coefficient positive); the caller mirrors.
void fp_enumerate(const Eigen::MatrixXd& r_upper, double radius2,
                  std::vector<Eigen::VectorXi>& out, double capacity) {
    const Eigen::Index n = r_upper.rows();
    Eigen::VectorXi x = Eigen::VectorXi::Zero(n);
    Eigen::VectorXd partial = Eigen::VectorXd::Zero(n + 1);  // sum over levels > i of y^2
    Eigen::VectorXd center_acc = Eigen::VectorXd::Zero(n);
    // Iterative depth-first traversal from level n-1 down to 0.
    struct Range {
        int lo, hi, cur;
    };
    std::vector<Range> ranges(n);
    const double slack = 1e-9 * (1.0 + radius2);
    auto level_range = [&](Eigen::Index i) -> Range {
        double proj = 0.0;
        for (Eigen::Index j = i + 1; j < n; ++j) proj += r_upper(i, j) * x(j);
        center_acc(i) = proj;
        const double rem = radius2 + slack - partial(i + 1);
        if (rem < 0.0) return {1, 0, 1};
        const double halfwidth = std::sqrt(rem) / r_upper(i, i);
        const double center = -proj / r_upper(i, i);
        int lo = static_cast<int>(std::ceil(center - halfwidth - 1e-12));
        int hi = static_cast<int>(std::floor(center + halfwidth + 1e-12));
        // Half-space restriction at the top of the still-zero suffix.
        bool suffix_zero = true;
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (x(j) != 0) { suffix_zero = false; break; }
        if (suffix_zero) lo = std::max(lo, 0);
        return {lo, hi, lo};
    };
    Eigen::Index level = n - 1;
    ranges[level] = level_range(level);
    while (true) {
        if (ranges[level].cur > ranges[level].hi) {
            // exhausted: backtrack
            ++level;
            if (level >= n) break;
            ++ranges[level].cur;
            continue;
        }
        x(level) = ranges[level].cur;
        const double y = r_upper(level, level) * x(level) + center_acc(level);
        partial(level) = partial(level + 1) + y * y;
        if (partial(level) > radius2 + slack) {
            ++ranges[level].cur;
            continue;
        }
        if (level == 0) {
            bool nonzero = false;
            for (Eigen::Index j = 0; j < n; ++j)
                if (x(j) != 0) { nonzero = true; break; }
            if (nonzero) {
                out.push_back(x);
                if (2.0 * out.size() + 1.0 > capacity)
                    fail(errc::capacity_exceeded,
                         "enumerate: vector count exceeds the configured ceiling");
            }
            ++ranges[level].cur;
        } else {
            --level;
            ranges[level] = level_range(level);
        }
    }
}

struct CanonEntry {
    double norm2;
    Eigen::VectorXi coeffs;  // w.r.t. the original basis
};

std::vector<CanonEntry> enumerate_canonical(const MetrizedLattice& lattice, double radius,
                                            const EnumerateOptions& opts) {
    if (radius < 0.0) fail(errc::domain_error, "enumerate: radius must be >= 0");
    const Eigen::Index n = lattice.generator().rows();
    Eigen::MatrixXd reduced = lattice.generator();
    IMat u;
    lll_reduce(reduced, u);
    Eigen::LLT<Eigen::MatrixXd> llt(reduced * reduced.transpose());
    if (llt.info() != Eigen::Success)
        fail(errc::invariant_violation, "enumerate: Gram matrix not positive definite");
    const Eigen::MatrixXd r_upper = llt.matrixL().transpose();

    std::vector<Eigen::VectorXi> half;
    fp_enumerate(r_upper, radius * radius, half, opts.capacity);

    std::vector<CanonEntry> entries;
    entries.reserve(2 * half.size() + 1);
    entries.push_back({0.0, Eigen::VectorXi::Zero(n)});
    const double accept2 = radius * radius * (1.0 + 4e-15) + 1e-13;
    for (const Eigen::VectorXi& xr : half) {
        Eigen::VectorXi coeffs(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            long long c = 0;
            for (Eigen::Index j = 0; j < n; ++j) c += static_cast<long long>(xr(j)) * u(j, i);
            coeffs(i) = static_cast<int>(c);
        }
        Eigen::VectorXd v = lattice.generator().transpose() * coeffs.cast<double>();
        const double norm2 = v.squaredNorm();
        if (norm2 > accept2) continue;
        entries.push_back({norm2, coeffs});
        entries.push_back({norm2, -coeffs});
    }
    std::sort(entries.begin(), entries.end(), [](const CanonEntry& a, const CanonEntry& b) {
        if (a.norm2 != b.norm2) return a.norm2 < b.norm2;
        return std::lexicographical_compare(a.coeffs.data(), a.coeffs.data() + a.coeffs.size(),
                                            b.coeffs.data(), b.coeffs.data() + b.coeffs.size());
    });
    return entries;
}

}  // namespace

std::vector<Eigen::VectorXd> enumerate_ball(const MetrizedLattice& lattice, double radius,
                                            const EnumerateOptions& opts) {
    std::vector<CanonEntry> entries = enumerate_canonical(lattice, radius, opts);
    std::vector<Eigen::VectorXd> out;
    out.reserve(entries.size());
    for (const CanonEntry& e : entries)
        out.push_back(lattice.generator().transpose() * e.coeffs.cast<double>());
    return out;
}

Eigen::MatrixXi enumerate_coefficients(const MetrizedLattice& lattice, double radius,
                                       const EnumerateOptions& opts) {
    std::vector<CanonEntry> entries = enumerate_canonical(lattice, radius, opts);
    Eigen::MatrixXi out(entries.size(), lattice.generator().rows());
    for (std::size_t i = 0; i < entries.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = entries[i].coeffs;
    return out;
}

double min_norm(const MetrizedLattice& lattice) {
    Eigen::MatrixXd reduced = lattice.generator();
    IMat u;
    lll_reduce(reduced, u);
    double r = reduced.row(0).norm();
    for (Eigen::Index i = 1; i < reduced.rows(); ++i) r = std::min(r, reduced.row(i).norm());
    // r is an upper bound for lambda_1; enumerate inside it for the true min.
    std::vector<CanonEntry> entries =
        enumerate_canonical(lattice, r * (1.0 + 1e-12), EnumerateOptions{});
    double best = r;
    for (const CanonEntry& e : entries)
        if (e.norm2 > 0.0) {
            best = std::sqrt(e.norm2);
            break;  // canonical order is by norm
        }
    return best;
}

}  // namespace adelic
