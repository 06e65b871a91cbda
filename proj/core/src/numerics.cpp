#include "adelic/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>

#include "adelic/errors.hpp"

namespace adelic {

namespace {

// QUADPACK 15-point Kronrod rule with embedded 7-point Gauss rule.
// Nodes are symmetric about 0; only the non-negative half is tabulated.
constexpr double kK15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
constexpr double kK15Weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
// Gauss-7 weights for nodes 1, 3, 5, 7 of the Kronrod set.
constexpr double kG7Weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct PanelResult {
    std::complex<double> k15;
    double err;
};

PanelResult gk15(const Integrand1D& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    std::complex<double> sk(0.0, 0.0), sg(0.0, 0.0);
    for (int i = 0; i < 8; ++i) {
        std::complex<double> fv;
        if (i == 7) {
            fv = f(c);
        } else {
            fv = f(c - h * kK15Nodes[i]) + f(c + h * kK15Nodes[i]);
        }
        sk += kK15Weights[i] * fv;
        // Gauss-7 uses nodes 1, 3, 5 and the centre node 7.
        if (i % 2 == 1) sg += kG7Weights[i / 2] * fv;
    }
    sk *= h;
    sg *= h;
    // Plain |K15 - G7|; overestimates the Kronrod error on smooth integrands.
    return {sk, std::abs(sk - sg)};
}

struct Segment {
    double a, b;
    std::complex<double> value;
    double err;
    bool operator<(const Segment& o) const { return err < o.err; }
};

}  // namespace

QuadratureResult quad_1d(const Integrand1D& f, double a, double b, const QuadOptions& opts) {
    QuadratureResult out;
    if (a == b) return out;
    double sign = 1.0;
    double lo = a, hi = b;
    if (lo > hi) {
        std::swap(lo, hi);
        sign = -1.0;
    }
    std::priority_queue<Segment> heap;
    PanelResult first = gk15(f, lo, hi);
    heap.push({lo, hi, first.k15, first.err});
    double total_err = first.err;
    long evals = 15;
    int panels = 1;
    while (total_err > opts.tol && heap.top().err > 0.0 && panels < opts.max_panels) {
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        PanelResult left = gk15(f, worst.a, mid);
        PanelResult right = gk15(f, mid, worst.b);
        evals += 30;
        panels += 1;
        total_err += left.err + right.err - worst.err;
        heap.push({worst.a, mid, left.k15, left.err});
        heap.push({mid, worst.b, right.k15, right.err});
    }
    // Recompute the totals from the leaves so the incremental error tracking
    // cannot drift.
    std::complex<double> total(0.0, 0.0);
    total_err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        total_err += heap.top().err;
        heap.pop();
    }
    out.value = sign * total;
    out.err = total_err;
    out.evaluations = evals;
    out.converged = total_err <= opts.tol;
    if (!out.converged && opts.throw_on_failure)
        fail(errc::non_convergence, "quad_1d: panel budget exhausted before tolerance");
    return out;
}

QuadratureResult quad_1d_to_inf(const Integrand1D& f, double a, const QuadOptions& opts) {
    QuadratureResult acc;
    double lo = a;
    double len = std::max(1.0, std::abs(a));
    QuadOptions piece = opts;
    piece.tol = opts.tol / 4.0;
    piece.throw_on_failure = false;
    for (int k = 0; k < 60; ++k) {
        const double hi = lo + len;
        QuadratureResult part = quad_1d(f, lo, hi, piece);
        acc.value += part.value;
        acc.err += part.err;
        acc.evaluations += part.evaluations;
        if (!part.converged) acc.converged = false;
        if (std::abs(part.value) < opts.tol / 4.0 && k > 0) {
            // Fold the last increment into the error as the truncation bound.
            acc.err += std::abs(part.value);
            if (!acc.converged && opts.throw_on_failure)
                fail(errc::non_convergence, "quad_1d_to_inf: tolerance not reached");
            return acc;
        }
        lo = hi;
        len *= 2.0;
    }
    if (opts.throw_on_failure)
        fail(errc::non_convergence, "quad_1d_to_inf: integrand does not appear to decay");
    acc.converged = false;
    return acc;
}

QuadratureResult quad_chart(const Integrand2D& f, const QuadOptions& opts) {
    // u = 1/y: region becomes { |x| <= 1/2, 1 <= u <= 1/sqrt(1 - x^2) },
    // measure du dx.
    QuadOptions inner = opts;
    inner.tol = opts.tol / 4.0;
    inner.throw_on_failure = false;
    long evals = 0;
    double inner_err = 0.0;
    auto outer = [&](double x) {
        const double umax = 1.0 / std::sqrt(1.0 - x * x);
        QuadratureResult row = quad_1d([&](double u) { return f(x, 1.0 / u); }, 1.0, umax, inner);
        evals += row.evaluations;
        inner_err += row.err;
        return row.value;
    };
    QuadOptions outer_opts = opts;
    outer_opts.tol = opts.tol / 2.0;
    QuadratureResult res = quad_1d(outer, -0.5, 0.5, outer_opts);
    res.evaluations += evals;
    res.err += inner_err;
    res.converged = res.err <= opts.tol * 2.0;
    return res;
}

MonteCarloResult monte_carlo_chart(const std::function<double(double, double)>& f,
                                   std::uint64_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(-0.5, 0.5);
    const double ymin = std::sqrt(3.0) / 2.0;
    std::uniform_real_distribution<double> uy(ymin, 1.0);
    const double box = 1.0 * (1.0 - ymin);
    KahanAccumulator sum, sumsq;
    for (std::uint64_t i = 0; i < samples; ++i) {
        const double x = ux(rng);
        const double y = uy(rng);
        double v = 0.0;
        if (x * x + y * y >= 1.0) v = f(x, y) / (y * y);
        sum.add(v);
        sumsq.add(v * v);
    }
    const double n = static_cast<double>(samples);
    const double mean = sum.total() / n;
    const double var = std::max(0.0, sumsq.total() / n - mean * mean);
    MonteCarloResult out;
    out.value = box * mean;
    out.sigma = box * std::sqrt(var / n);
    out.samples = samples;
    return out;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) fail(errc::domain_error, "gauss_legendre: n must be positive");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[n - 1 - i] = weights[i];
    }
}

double upper_gamma_bound(double a, double x) {
    if (x <= 0.0) fail(errc::domain_error, "upper_gamma_bound: x must be positive");
    if (a <= 1.0) {
        // t^(a-1) is non-increasing on [x, inf).
        return std::pow(x, a - 1.0) * std::exp(-x);
    }
    if (x <= a - 1.0)
        fail(errc::domain_error, "upper_gamma_bound: requires x > a - 1");
    // t^(a-1) <= x^(a-1) exp((a-1)(t/x - 1)) for t >= x.
    return std::pow(x, a - 1.0) * std::exp(-x) / (1.0 - (a - 1.0) / x);
}

double tail_pow_exp_bound(double p, double c, double X) {
    if (c <= 0.0 || X <= 0.0) fail(errc::domain_error, "tail_pow_exp_bound: need c, X > 0");
    // substitute u = c t
    return upper_gamma_bound(p + 1.0, c * X) / std::pow(c, p + 1.0);
}

}  // namespace adelic
