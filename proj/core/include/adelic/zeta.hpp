#pragma once

#include <complex>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "adelic/moduli.hpp"

namespace adelic {

using Complex = std::complex<double>;

struct ZetaSpec {
    FieldPtr field;
    int rank = 1;
    double A = 1.0;  // the theta exponent; poles sit at s = 0 and s = A
    QuadratureSpec quad;
    double tol = 1e-11;
};

struct ZetaPoint {
    Complex s{};
    Complex value{};
    double err = 0.0;
    enum class Method { direct, continued } method = Method::continued;
};

const char* method_name(ZetaPoint::Method m);

/// Evaluator for Z_{F,r;A}(s) over a fixed spec. Quadrature kernels are
/// built once (the slice integrals do not depend on s) and shared across
/// evaluations, so grids of s values are cheap. Immutable and safe for
/// concurrent evaluation after construction.
class ZetaEvaluator {
  public:
    explicit ZetaEvaluator(ZetaSpec spec);
    ~ZetaEvaluator();
    ZetaEvaluator(const ZetaEvaluator&) = delete;
    ZetaEvaluator& operator=(const ZetaEvaluator&) = delete;

    const ZetaSpec& spec() const { return spec_; }

    /// Slice mass W_F(r); magnitude of both residues.
    double volume() const;

    /// The compact-side integral
    ///   I(s) = int over {covol >= 1} of (theta^A - 1) V^s  d(chart) dV/V.
    /// Entire in s.
    ZetaPoint I_integral(Complex s) const;

    /// Defining integral over the full degree line; requires Re(s) > A.
    /// The dense tail (covol < V_c) is summed in closed form through the
    /// theta ~ 1/covol asymptotic with an explicit remainder bound that is
    /// folded into err.
    ZetaPoint zeta_direct(Complex s) const;

    /// Z(s) = I(s) + I(A - s) - W/s - W/(A - s). Valid on the whole plane
    /// minus the two poles; satisfies Z(s) = Z(A - s) by construction.
    ZetaPoint zeta_continued(Complex s) const;

    struct Residues {
        double res0 = 0.0;  // closed form: -W
        double resA = 0.0;  // closed form: +W
        double fit0 = 0.0;  // circle fit of s * Z(s) around 0
        double fitA = 0.0;
        double volume = 0.0;
    };
    Residues residues() const;

    struct FeSample {
        Complex s;
        double fe_residual = 0.0;     // |Z(s) - Z(A-s)| / max(1, |Z(s)|)
        double cross_residual = 0.0;  // |direct - continued| when Re s > A
        double cross_budget = 0.0;    // err_direct + err_continued
        bool has_cross = false;
    };
    struct FeScanResult {
        double max_fe_residual = 0.0;
        double max_cross_residual = 0.0;
        bool cross_within_budget = true;
        std::vector<FeSample> samples;
    };
    /// Functional-equation scan: continued-path symmetry residuals on the
    /// grid, plus direct-vs-continued comparison at grid points with
    /// Re s > A.
    FeScanResult fe_scan(const std::vector<Complex>& grid) const;

  private:
    struct Impl;
    ZetaSpec spec_;
    std::unique_ptr<Impl> impl_;
};

/// One-shot helpers wrapping a temporary evaluator.
ZetaPoint zeta_direct(const ZetaSpec& spec, Complex s);
ZetaPoint zeta_continued(const ZetaSpec& spec, Complex s);

}  // namespace adelic
