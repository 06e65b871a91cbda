#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace adelic {

/// Declarative arithmetic context for a number field F. Everything here is
/// *supplied* by the field file and validated on load; the library never
/// derives integral bases, class groups or regulators itself.
///
/// Embedding convention: row i of an embedding matrix holds the coordinates
/// of the i-th basis element under all archimedean places, with each complex
/// place contributing the pair (sqrt(2) Re sigma(x), sqrt(2) Im sigma(x)).
/// The sqrt(2) makes the plain Euclidean norm equal to
///   sum_real |x|^2 + 2 sum_complex |x|^2,
/// the quadratic form every Gaussian weight downstream uses.
struct NumberFieldData {
    int degree = 1;
    int r1 = 1;
    int r2 = 0;
    long long discriminant = 1;
    Eigen::MatrixXd basis_embedding;          // n x n, rows = integral basis
    Eigen::MatrixXd inv_different_embedding;  // n x n, rows span the inverse different
    std::vector<Eigen::MatrixXd> class_reps;  // identity class first when present
    std::optional<double> regulator;
    std::vector<Eigen::VectorXd> fundamental_units;
    int roots_of_unity = 2;
    std::string label;  // provenance string for diagnostics (file stem or "Q")

    double sqrt_abs_disc() const { return std::sqrt(std::abs(static_cast<double>(discriminant))); }
    double log_abs_disc() const { return std::log(std::abs(static_cast<double>(discriminant))); }
    bool is_rationals() const { return degree == 1 && discriminant == 1; }
    int unit_rank() const { return r1 + r2 - 1; }
    int class_number() const { return class_reps.empty() ? 1 : static_cast<int>(class_reps.size()); }

    /// 2^r1 * h * R / w; requires regulator data for unit rank > 0.
    double unit_torus_mass() const;
};

using FieldPtr = std::shared_ptr<const NumberFieldData>;

/// The built-in field Q: degree 1, discriminant 1, basis [[1]].
FieldPtr rationals();

/// Parse and validate a field JSON file. Throws Error(parse_error) on
/// malformed input and Error(invariant_violation) with the offending
/// invariant and residual when the declared data is inconsistent.
FieldPtr load_field(const std::filesystem::path& path);

/// Same, from an in-memory JSON string (used by tests and the loader).
FieldPtr parse_field_json(const std::string& text, const std::string& label);

/// Relative tolerance used by the loader's consistency checks.
inline constexpr double kFieldValidationTol = 1e-10;

}  // namespace adelic
