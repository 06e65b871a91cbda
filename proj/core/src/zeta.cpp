#include "adelic/zeta.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "adelic/errors.hpp"
#include "adelic/numerics.hpp"

namespace adelic {

namespace {

constexpr double kPi = 3.14159265358979323846;

// QUADPACK (7,15) pair, non-negative half; the Gauss weight is zero on the
// Kronrod-only nodes.
constexpr double kK15N[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
};
constexpr double kK15W[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr double kG7W[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

/// Lower bound for the squared shortest-vector length anywhere on the
/// semistable covolume-V slice.
///   (Q, 1):  lambda^2 = V^2 exactly;
///   (Q, 2):  lambda^2 = V/y >= V on the y <= 1 chart;
///   (F, 1):  AM-GM over the weighted coordinates gives
///            lambda^2 >= n (V / sqrt|disc|)^(2/n); unit scalings preserve
///            the coordinate product, so the bound is torus-uniform.
double slice_min_norm2(const NumberFieldData& field, int rank, double v) {
    if (field.is_rationals() && rank == 1) return v * v;
    if (field.is_rationals() && rank == 2) return v;
    if (rank == 1) {
        const double n = field.degree;
        return n * std::pow(v / field.sqrt_abs_disc(), 2.0 / n);
    }
    fail(errc::unsupported, "slice_min_norm2: unsupported (field, rank)");
}

/// Upper bound for theta - 1 on the covolume-V slice.
double slice_theta_m1_bound(const NumberFieldData& field, int rank, double v) {
    const double lam2 = slice_min_norm2(field, rank, v);
    const double lam = std::sqrt(lam2);
    const int dim = rank * field.degree;
    return theta_tail_bound(lam, dim, lam * (1.0 - 1e-12));
}

/// (1+x)^A - 1 <= c_A(x0) * x for 0 <= x <= x0.
double power_lipschitz(double a, double x0) {
    return a * std::max(1.0, std::pow(1.0 + x0, a - 1.0));
}

struct KernelNode {
    double tau = 0.0;   // log V
    double g = 0.0;     // chart integral of theta^A - 1 at covolume e^tau
    double gdiff = 0.0; // |fine - coarse| chart resolution difference
    double terr = 0.0;  // propagated theta tail error
    double wk = 0.0;    // Kronrod weight including the dV/V substitution
    double wg = 0.0;    // embedded Gauss weight (0 on Kronrod-only nodes)
    int panel = 0;
};

struct Kernel {
    std::vector<KernelNode> nodes;
    int panels = 0;
    double v_lo = 1.0;
    double v_hi = 1.0;
};

struct KernelSum {
    Complex value{};
    double err = 0.0;  // quadrature |K-G| + chart resolution + theta tails
};

KernelSum kernel_sum(const Kernel& k, Complex s) {
    KahanAccumulator re, im, aux;
    std::vector<Complex> panel_diff(static_cast<std::size_t>(k.panels), Complex(0.0, 0.0));
    for (const KernelNode& n : k.nodes) {
        const Complex w = std::exp(s * n.tau);
        const Complex term = n.g * w;
        re.add(n.wk * term.real());
        im.add(n.wk * term.imag());
        panel_diff[static_cast<std::size_t>(n.panel)] += (n.wk - n.wg) * term;
        aux.add(n.wk * (n.gdiff + n.terr) * std::abs(w));
    }
    KernelSum out;
    out.value = Complex(re.total(), im.total());
    double quad_err = 0.0;
    for (const Complex& d : panel_diff) quad_err += std::abs(d);
    out.err = quad_err + aux.total();
    return out;
}

}  // namespace

const char* method_name(ZetaPoint::Method m) {
    return m == ZetaPoint::Method::direct ? "direct" : "continued";
}

struct ZetaEvaluator::Impl {
    ModuliChart chart;
    double volume = 0.0;
    double v_max = 0.0;
    double v_c = 0.0;       // dense cutoff for the direct path
    double eps_dense = 0.0; // theta*-1 bound on the dual slice at covol 1/v_c
    double theta_tol = 1e-13;
    Kernel sparse;                      // covol in [1, v_max]
    mutable std::once_flag dense_once;
    mutable std::optional<Kernel> dense;  // covol in [v_c, 1], direct path only
    const ZetaSpec* spec = nullptr;

    /// Bound for int_{v_max}^inf (theta^A - 1) V^(Re s) dV/V over the slice.
    double sparse_tail(double re_s) const {
        const NumberFieldData& f = *spec->field;
        const int rank = spec->rank;
        const double m0 = slice_theta_m1_bound(f, rank, v_max);
        if (!std::isfinite(m0)) return std::numeric_limits<double>::infinity();
        const double ca = power_lipschitz(spec->A, m0);
        const double lam2 = slice_min_norm2(f, rank, v_max);
        const double big_k = m0 * std::exp(kPi * lam2);
        double integral;
        if (f.is_rationals() && rank == 1) {
            // lambda^2 = V^2: substitute u = V^2.
            if (kPi * v_max * v_max <= 0.5 * re_s) return std::numeric_limits<double>::infinity();
            integral = 0.5 * tail_pow_exp_bound(0.5 * re_s - 1.0, kPi, v_max * v_max);
        } else if (f.is_rationals() && rank == 2) {
            if (kPi * v_max <= re_s - 1.0) return std::numeric_limits<double>::infinity();
            integral = tail_pow_exp_bound(re_s - 1.0, kPi, v_max);
        } else {
            const double n = f.degree;
            const double beta = n * std::pow(f.sqrt_abs_disc(), -2.0 / n);
            const double x = std::pow(v_max, 2.0 / n);
            if (kPi * beta * x <= 0.5 * n * re_s) return std::numeric_limits<double>::infinity();
            integral = 0.5 * n * tail_pow_exp_bound(0.5 * n * re_s - 1.0, kPi * beta, x);
        }
        return ca * volume * big_k * integral;
    }

    double slice_g(double v, double a_exp, const std::vector<ChartNode>& nodes,
                   double* theta_err) const {
        KahanAccumulator acc;
        double terr = 0.0;
        for (const ChartNode& node : nodes) {
            const MetrizedLattice lat = chart_to_lattice(chart, node.params, v);
            const ThetaValue tv = theta(lat, theta_tol);
            const double p = std::exp(a_exp * std::log(tv.value));
            acc.add(node.weight * (p - 1.0));
            terr += node.weight * a_exp * std::max(1.0, p / tv.value) * tv.tail_bound;
        }
        if (theta_err) *theta_err = terr;
        return acc.total();
    }

    Kernel build_kernel(double v_lo, double v_hi, int panels) const {
        const auto rule = spec->quad.chart_rule;
        const int fine_pts = spec->quad.chart_points;
        const int coarse_pts = std::max(4, (2 * fine_pts) / 4);
        const std::vector<ChartNode> fine = chart_nodes(chart, fine_pts, rule, spec->quad.seed);
        const std::vector<ChartNode> coarse =
            chart.kind == ChartKind::point
                ? fine
                : chart_nodes(chart, coarse_pts, rule, spec->quad.seed + 1);
        Kernel k;
        k.v_lo = v_lo;
        k.v_hi = v_hi;
        k.panels = panels;
        const double lo = std::log(v_lo), hi = std::log(v_hi);
        for (int p = 0; p < panels; ++p) {
            const double a = lo + (hi - lo) * p / panels;
            const double b = lo + (hi - lo) * (p + 1) / panels;
            const double c = 0.5 * (a + b), h = 0.5 * (b - a);
            for (int i = 0; i < 8; ++i) {
                const int nsub = (i == 7) ? 1 : 2;
                for (int sub = 0; sub < nsub; ++sub) {
                    const double sgn = (nsub == 1) ? 0.0 : (sub == 0 ? -1.0 : 1.0);
                    KernelNode node;
                    node.tau = c + sgn * h * kK15N[i];
                    node.panel = p;
                    node.wk = h * kK15W[i];
                    node.wg = (i % 2 == 1) ? h * kG7W[i / 2] : 0.0;
                    double terr = 0.0;
                    node.g = slice_g(std::exp(node.tau), spec->A, fine, &terr);
                    node.terr = terr;
                    if (chart.kind != ChartKind::point) {
                        const double gc = slice_g(std::exp(node.tau), spec->A, coarse, nullptr);
                        node.gdiff = std::abs(node.g - gc);
                    }
                    k.nodes.push_back(node);
                }
            }
        }
        return k;
    }

    const Kernel& dense_kernel() const {
        std::call_once(dense_once, [this] {
            const double span = std::log(1.0 / v_c);
            const int panels =
                std::max(4, static_cast<int>(std::lround(spec->quad.v_panels * span / 2.0)));
            dense = build_kernel(v_c, 1.0, panels);
        });
        return *dense;
    }
};

ZetaEvaluator::ZetaEvaluator(ZetaSpec spec) : spec_(std::move(spec)), impl_(new Impl) {
    if (!spec_.field) fail(errc::domain_error, "zeta: null field");
    if (!(spec_.A > 0.0)) fail(errc::domain_error, "zeta: A must be strictly positive");
    impl_->spec = &spec_;
    impl_->chart = make_chart(spec_.field, spec_.rank);
    impl_->volume = moduli_volume(spec_.field, spec_.rank);
    impl_->theta_tol = std::min(1e-13, spec_.tol * 1e-2);

    // Choose v_max so the sparse tail is negligible for moderate Re s;
    // evaluations re-derive the tail bound for their own s anyway.
    if (spec_.quad.v_max > 0.0) {
        impl_->v_max = spec_.quad.v_max;
    } else {
        const double ref = spec_.A + 6.0;
        double v = spec_.field->is_rationals() && spec_.rank == 1 ? 3.0 : 6.0;
        bool ok = false;
        for (int i = 0; i < 200 && !ok; ++i) {
            impl_->v_max = v;
            ok = impl_->sparse_tail(ref) <= spec_.tol / 20.0;
            if (!ok) v *= 1.2;
        }
        if (!ok) fail(errc::non_convergence, "zeta: could not bound the sparse tail");
        impl_->v_max = v;
    }

    // Dense cutoff for the direct path: theta* - 1 on the dual slice at
    // covolume 1/v_c must be tiny so the closed-form tail is essentially
    // exact.
    double vc = 0.5;
    for (int i = 0; i < 60; ++i) {
        const double eps = slice_theta_m1_bound(*spec_.field, spec_.rank, 1.0 / vc);
        if (std::isfinite(eps) && eps <= spec_.tol * 1e-2) break;
        vc *= 0.8;
        if (vc < 0.02) break;
    }
    impl_->v_c = vc;
    impl_->eps_dense = slice_theta_m1_bound(*spec_.field, spec_.rank, 1.0 / vc);

    impl_->sparse = impl_->build_kernel(1.0, impl_->v_max, std::max(1, spec_.quad.v_panels));
}

ZetaEvaluator::~ZetaEvaluator() = default;

double ZetaEvaluator::volume() const { return impl_->volume; }

ZetaPoint ZetaEvaluator::I_integral(Complex s) const {
    const KernelSum k = kernel_sum(impl_->sparse, s);
    ZetaPoint out;
    out.s = s;
    out.value = k.value;
    out.err = k.err + impl_->sparse_tail(s.real());
    out.method = ZetaPoint::Method::continued;
    return out;
}

ZetaPoint ZetaEvaluator::zeta_continued(Complex s) const {
    const double a = spec_.A;
    if (std::abs(s) < 1e-9 || std::abs(s - Complex(a, 0.0)) < 1e-9) {
        std::ostringstream os;
        os << "zeta_continued: s = " << s.real() << "+" << s.imag() << "i is a pole (poles at 0 and "
           << a << ")";
        fail(errc::pole, os.str());
    }
    const ZetaPoint i1 = I_integral(s);
    const ZetaPoint i2 = I_integral(Complex(a, 0.0) - s);
    const double w = impl_->volume;
    ZetaPoint out;
    out.s = s;
    out.value = i1.value + i2.value - w / s - w / (Complex(a, 0.0) - s);
    out.err = i1.err + i2.err;
    out.method = ZetaPoint::Method::continued;
    return out;
}

ZetaPoint ZetaEvaluator::zeta_direct(Complex s) const {
    const double a = spec_.A;
    if (!(s.real() > a))
        fail(errc::domain_error,
             "zeta_direct: the defining integral converges only for Re(s) > A");
    const KernelSum sparse = kernel_sum(impl_->sparse, s);
    const KernelSum dense = kernel_sum(impl_->dense_kernel(), s);
    const double w = impl_->volume;
    const double vc = impl_->v_c;
    // Closed-form dense tail from theta ~ 1/V: integral over (0, v_c] of
    // W (V^-A - 1) V^s dV/V, plus a remainder bounded through theta* - 1.
    const Complex tail_closed =
        w * (std::pow(vc, s - a) / (s - a) - std::pow(vc, s) / s);
    const double ca = power_lipschitz(a, impl_->eps_dense);
    const double remainder = impl_->volume * ca * impl_->eps_dense *
                             std::pow(vc, s.real() - a) / (s.real() - a);
    ZetaPoint out;
    out.s = s;
    out.value = sparse.value + dense.value + tail_closed;
    out.err = sparse.err + dense.err + remainder + impl_->sparse_tail(s.real());
    out.method = ZetaPoint::Method::direct;
    return out;
}

ZetaEvaluator::Residues ZetaEvaluator::residues() const {
    Residues r;
    r.volume = impl_->volume;
    r.res0 = -impl_->volume;
    r.resA = impl_->volume;
    const double rho = std::min(0.05, spec_.A / 4.0);
    const int m = 16;
    Complex acc0(0.0, 0.0), accA(0.0, 0.0);
    for (int k = 0; k < m; ++k) {
        const double ang = 2.0 * kPi * k / m;
        const Complex d(rho * std::cos(ang), rho * std::sin(ang));
        acc0 += d * zeta_continued(d).value;
        accA += d * zeta_continued(Complex(spec_.A, 0.0) + d).value;
    }
    r.fit0 = (acc0 / static_cast<double>(m)).real();
    r.fitA = (accA / static_cast<double>(m)).real();
    return r;
}

ZetaEvaluator::FeScanResult ZetaEvaluator::fe_scan(const std::vector<Complex>& grid) const {
    FeScanResult out;
    for (const Complex& s : grid) {
        FeSample sample;
        sample.s = s;
        const ZetaPoint zs = zeta_continued(s);
        const ZetaPoint zr = zeta_continued(Complex(spec_.A, 0.0) - s);
        sample.fe_residual = std::abs(zs.value - zr.value) / std::max(1.0, std::abs(zs.value));
        if (s.real() > spec_.A + 0.05) {
            const ZetaPoint zd = zeta_direct(s);
            sample.cross_residual = std::abs(zd.value - zs.value);
            sample.cross_budget = zd.err + zs.err;
            sample.has_cross = true;
            out.max_cross_residual = std::max(out.max_cross_residual, sample.cross_residual);
            if (sample.cross_residual > sample.cross_budget) out.cross_within_budget = false;
        }
        out.max_fe_residual = std::max(out.max_fe_residual, sample.fe_residual);
        out.samples.push_back(sample);
    }
    return out;
}

ZetaPoint zeta_direct(const ZetaSpec& spec, Complex s) {
    return ZetaEvaluator(spec).zeta_direct(s);
}

ZetaPoint zeta_continued(const ZetaSpec& spec, Complex s) {
    return ZetaEvaluator(spec).zeta_continued(s);
}

}  // namespace adelic
