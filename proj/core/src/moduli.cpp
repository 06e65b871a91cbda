#include "adelic/moduli.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "adelic/errors.hpp"
#include "adelic/numerics.hpp"

namespace adelic {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_rank1_data(const NumberFieldData& f) {
    if (f.degree > 2) fail(errc::unsupported, "moduli: only Q and quadratic fields are supported");
    if (f.unit_rank() > 0 && !f.regulator)
        fail(errc::unsupported, f.label + ": rank-1 moduli needs regulator data");
}

}  // namespace

ModuliChart make_chart(FieldPtr field, int rank) {
    if (!field) fail(errc::domain_error, "make_chart: null field");
    ModuliChart c;
    c.field = std::move(field);
    c.rank = rank;
    if (c.field->is_rationals() && rank == 1) {
        c.kind = ChartKind::point;
        c.dimension = 0;
    } else if (c.field->is_rationals() && rank == 2) {
        c.kind = ChartKind::rank2_q_domain;
        c.dimension = 2;
    } else if (rank == 1) {
        require_rank1_data(*c.field);
        c.kind = ChartKind::unit_torus_classgroup;
        c.dimension = c.field->unit_rank();
    } else {
        std::ostringstream os;
        os << "moduli: unsupported (field, rank) pair (" << c.field->label << ", " << rank << ")";
        fail(errc::unsupported, os.str());
    }
    return c;
}

MetrizedLattice chart_to_lattice(const ModuliChart& chart, const std::vector<double>& params,
                                 double covol) {
    if (!(covol > 0.0)) fail(errc::domain_error, "chart_to_lattice: covolume must be positive");
    switch (chart.kind) {
        case ChartKind::point: {
            Eigen::MatrixXd g(1, 1);
            g(0, 0) = covol;
            return MetrizedLattice::create(chart.field, 1, g);
        }
        case ChartKind::rank2_q_domain: {
            if (params.size() != 2)
                fail(errc::domain_error, "chart_to_lattice: rank-2 chart expects params (x, y)");
            const double x = params[0];
            const double y = params[1];
            const double slack = 1e-12;
            if (!(std::abs(x) <= 0.5 + slack) || !(x * x + y * y >= 1.0 - slack) || !(y > 0.0))
                fail(errc::domain_error,
                     "chart_to_lattice: (x, y) outside the fundamental domain");
            const double s = std::sqrt(covol / y);
            Eigen::MatrixXd g(2, 2);
            g << s, 0.0, s * x, s * y;
            return MetrizedLattice::create(chart.field, 2, g);
        }
        case ChartKind::unit_torus_classgroup: {
            const NumberFieldData& f = *chart.field;
            if (params.empty())
                fail(errc::domain_error, "chart_to_lattice: torus chart expects (class, t)");
            const int cls = static_cast<int>(std::llround(params[0]));
            if (cls < 0 || cls >= f.class_number())
                fail(errc::domain_error, "chart_to_lattice: class index out of range");
            Eigen::MatrixXd base =
                f.class_reps.empty() ? f.basis_embedding : f.class_reps[static_cast<std::size_t>(cls)];
            if (f.unit_rank() == 1) {
                const double t = params.size() > 1 ? params[1] : 0.0;
                // Degree-2 totally real: coordinate scaling (e^t, e^-t).
                base.col(0) *= std::exp(t);
                base.col(1) *= std::exp(-t);
            }
            const double scale =
                std::pow(covol / std::abs(base.determinant()), 1.0 / f.degree);
            return MetrizedLattice::create(chart.field, 1, scale * base);
        }
    }
    fail(errc::domain_error, "chart_to_lattice: unknown chart kind");
}

double moduli_volume(const NumberFieldData& field, int rank) {
    if (rank == 1) {
        if (field.degree > 2)
            fail(errc::unsupported, "moduli_volume: only Q and quadratic fields are supported");
        return field.unit_torus_mass();
    }
    if (rank == 2 && field.is_rationals()) return kPi / 3.0 - 1.0;
    std::ostringstream os;
    os << "moduli_volume: unsupported (field, rank) pair (" << field.label << ", " << rank << ")";
    fail(errc::unsupported, os.str());
}

double moduli_volume(const FieldPtr& field, int rank) {
    if (!field) fail(errc::domain_error, "moduli_volume: null field");
    return moduli_volume(*field, rank);
}

QuadratureSpec QuadratureSpec::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(errc::parse_error, std::string("quadrature spec: ") + e.what());
    }
    QuadratureSpec s;
    if (j.contains("v_panels")) s.v_panels = j["v_panels"].get<int>();
    if (j.contains("v_max"))
        s.v_max = j["v_max"].is_string() ? std::stod(j["v_max"].get<std::string>())
                                         : j["v_max"].get<double>();
    if (j.contains("chart_rule")) {
        const std::string r = j["chart_rule"].get<std::string>();
        if (r == "gauss-legendre")
            s.chart_rule = Rule::gauss_legendre;
        else if (r == "monte-carlo")
            s.chart_rule = Rule::monte_carlo;
        else
            fail(errc::parse_error, "quadrature spec: unknown chart_rule '" + r + "'");
    }
    if (j.contains("chart_points")) s.chart_points = j["chart_points"].get<int>();
    if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
    if (s.v_panels < 1 || s.chart_points < 1)
        fail(errc::parse_error, "quadrature spec: v_panels and chart_points must be positive");
    return s;
}

QuadratureSpec QuadratureSpec::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::parse_error, "cannot open quadrature spec: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

std::vector<ChartNode> chart_nodes(const ModuliChart& chart, int points,
                                   QuadratureSpec::Rule rule, std::uint64_t seed) {
    std::vector<ChartNode> nodes;
    switch (chart.kind) {
        case ChartKind::point: {
            nodes.push_back({{}, 1.0});
            return nodes;
        }
        case ChartKind::unit_torus_classgroup: {
            const NumberFieldData& f = *chart.field;
            const double class_mass = std::pow(2.0, f.r1) / f.roots_of_unity;
            const int h = f.class_number();
            if (f.unit_rank() == 0) {
                // Regulator 1 by convention: each class is a point of mass
                // 2^r1 R / w.
                for (int c = 0; c < h; ++c)
                    nodes.push_back({{static_cast<double>(c)}, class_mass});
                return nodes;
            }
            // Periodic integrand on [0, R): uniform (trapezoidal) nodes are
            // spectrally accurate.
            const double reg = *f.regulator;
            const int nt = std::max(8, points);
            for (int c = 0; c < h; ++c)
                for (int i = 0; i < nt; ++i)
                    nodes.push_back({{static_cast<double>(c), reg * i / nt},
                                     class_mass * reg / nt});
            return nodes;
        }
        case ChartKind::rank2_q_domain: {
            if (rule == QuadratureSpec::Rule::monte_carlo) {
                std::mt19937_64 rng(seed);
                std::uniform_real_distribution<double> ux(-0.5, 0.5);
                const double umax = 2.0 / std::sqrt(3.0);
                std::uniform_real_distribution<double> uu(1.0, umax);
                const double box = 1.0 * (umax - 1.0);
                const double w = box / points;
                for (int i = 0; i < points; ++i) {
                    const double x = ux(rng);
                    const double u = uu(rng);
                    if (u > 1.0 / std::sqrt(1.0 - x * x)) continue;  // weight 0
                    nodes.push_back({{x, 1.0 / u}, w});
                }
                return nodes;
            }
            // Tensor Gauss-Legendre in (x, u = 1/y): du dx is the hyperbolic
            // measure in these coordinates. The u-range depends on x, so the
            // u-rule is rescaled per x node.
            const int nx = std::max(4, static_cast<int>(std::lround(std::sqrt(points))));
            const int nu = std::max(4, (points + nx - 1) / nx);
            std::vector<double> xs, wxs, us, wus;
            gauss_legendre(nx, xs, wxs);
            gauss_legendre(nu, us, wus);
            for (int i = 0; i < nx; ++i) {
                const double x = 0.5 * xs[i];  // map [-1,1] -> [-1/2, 1/2]
                const double wx = 0.5 * wxs[i];
                const double umax = 1.0 / std::sqrt(1.0 - x * x);
                const double half = 0.5 * (umax - 1.0);
                const double mid = 0.5 * (umax + 1.0);
                for (int k = 0; k < nu; ++k) {
                    const double u = mid + half * us[k];
                    nodes.push_back({{x, 1.0 / u}, wx * half * wus[k]});
                }
            }
            return nodes;
        }
    }
    fail(errc::domain_error, "chart_nodes: unknown chart kind");
}

namespace {

// QUADPACK 15-point Kronrod abscissae/weights (non-negative half), reused
// for the N-line panels of the slice stream.
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

}  // namespace

DegreeSliceIter::DegreeSliceIter(const ModuliChart& chart, double n_lo, double n_hi,
                                 const QuadratureSpec& spec) {
    if (!(n_lo > 0.0) || !(n_hi >= n_lo))
        fail(errc::domain_error, "degree_slice_iter: need 0 < n_lo <= n_hi");
    const std::vector<ChartNode> cn =
        chart_nodes(chart, spec.chart_points, spec.chart_rule, spec.seed);
    if (n_hi == n_lo) return;  // empty range integrates to zero
    const double r = chart.rank;
    const double t_slice = std::pow(std::abs(static_cast<double>(chart.field->discriminant)),
                                    0.5 * r);
    // dN/N = d(log N): geometric panels with GK15 nodes in log N.
    const double lo = std::log(n_lo), hi = std::log(n_hi);
    const int panels = std::max(1, spec.v_panels);
    for (int p = 0; p < panels; ++p) {
        const double a = lo + (hi - lo) * p / panels;
        const double b = lo + (hi - lo) * (p + 1) / panels;
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        for (int i = 0; i < 8; ++i) {
            for (int sgn = (i == 7 ? 0 : -1); sgn <= (i == 7 ? 0 : 1); sgn += 2) {
                const double tau = c + sgn * h * kK15N[i];
                const double nval = std::exp(tau);
                const double wn = h * kK15W[i];
                const double covol = t_slice / nval;
                for (const ChartNode& node : cn) {
                    points_.push_back(
                        {chart_to_lattice(chart, node.params, covol), wn * node.weight, nval});
                }
            }
        }
    }
}

std::optional<SlicePoint> DegreeSliceIter::next() {
    if (cursor_ >= points_.size()) return std::nullopt;
    return points_[cursor_++];
}

DegreeSliceIter degree_slice_iter(const ModuliChart& chart, double n_lo, double n_hi,
                                  const QuadratureSpec& spec) {
    return DegreeSliceIter(chart, n_lo, n_hi, spec);
}

}  // namespace adelic
