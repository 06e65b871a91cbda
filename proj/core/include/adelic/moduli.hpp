#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adelic/lattice.hpp"

namespace adelic {

enum class ChartKind {
    point,                  // (Q, 1): one lattice per degree slice
    unit_torus_classgroup,  // (F, 1): ideal classes x unit torus
    rank2_q_domain,         // (Q, 2): modular fundamental domain, y <= 1
};

/// A concrete chart on the fixed-degree slice of the moduli of semistable
/// lattices. The slice measure never depends on the degree: hyperbolic
/// dx dy / y^2 on the rank-2 chart, Lebesgue dt with mass 2^r1 h R / w on the
/// rank-1 torus, a unit point mass for (Q, 1).
struct ModuliChart {
    FieldPtr field;
    int rank = 1;
    ChartKind kind = ChartKind::point;
    int dimension = 0;
};

/// Supported pairs: (Q, 1), (Q, 2), (quadratic F, 1) with regulator/class
/// data. Everything else throws Error(unsupported).
ModuliChart make_chart(FieldPtr field, int rank);

/// Representative lattice of covolume V at a chart point.
///   rank2_q_domain:        params = (x, y), the shape tau = x + i y in the
///                          fundamental domain |x| <= 1/2, x^2 + y^2 >= 1
///                          (y <= 1 is the semistable part but larger y is
///                          accepted so stability criteria can be compared);
///                          Gram = (V/y) [[1, x], [x, x^2 + y^2]].
///   unit_torus_classgroup: params = (class index, t) with t in [0, R).
///   point:                 params empty.
MetrizedLattice chart_to_lattice(const ModuliChart& chart, const std::vector<double>& params,
                                 double covolume);

/// Total slice mass W_F(r): 1 for (Q, 1), pi/3 - 1 for (Q, 2),
/// 2^r1 h R / w for (F, 1).
double moduli_volume(const NumberFieldData& field, int rank);
double moduli_volume(const FieldPtr& field, int rank);

struct QuadratureSpec {
    int v_panels = 8;
    double v_max = 0.0;  // 0 = choose automatically from the tolerance
    enum class Rule { gauss_legendre, monte_carlo } chart_rule = Rule::gauss_legendre;
    int chart_points = 576;
    std::uint64_t seed = 20240816;

    static QuadratureSpec from_json_text(const std::string& text);
    static QuadratureSpec from_json_file(const std::string& path);
};

/// One quadrature node on the chart: parameters plus its measure weight.
struct ChartNode {
    std::vector<double> params;
    double weight = 0.0;
};

/// Deterministic chart quadrature nodes whose weights sum to the slice mass
/// (up to the rule's accuracy; exactly for point/torus rules).
std::vector<ChartNode> chart_nodes(const ModuliChart& chart, int points,
                                   QuadratureSpec::Rule rule, std::uint64_t seed);

/// One sample of the product measure d(chart) x dN/N.
struct SlicePoint {
    MetrizedLattice lattice;
    double weight = 0.0;   // chart weight x N-line weight
    double n_value = 0.0;  // N(E) = e^deg at the sample
};

/// Deterministic stream of weighted sample lattices covering
/// chart x {n_lo <= N(E) <= n_hi}: weighted sums of f(lattice) approximate
/// the integral of f against d(chart) dN/N. Gauss-Kronrod panels,
/// geometrically spaced in N, carry the N direction.
class DegreeSliceIter {
  public:
    DegreeSliceIter(const ModuliChart& chart, double n_lo, double n_hi,
                    const QuadratureSpec& spec);

    std::optional<SlicePoint> next();
    std::size_t size() const { return points_.size(); }

  private:
    std::vector<SlicePoint> points_;
    std::size_t cursor_ = 0;
};

DegreeSliceIter degree_slice_iter(const ModuliChart& chart, double n_lo, double n_hi,
                                  const QuadratureSpec& spec);

}  // namespace adelic
