#include "adelic/field_data.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "adelic/errors.hpp"

namespace adelic {

namespace {

using nlohmann::json;

double parse_decimal(const json& j, const std::string& where) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            fail(errc::parse_error, where + ": not a decimal string: '" + s + "'");
        }
    }
    if (j.is_number()) return j.get<double>();
    fail(errc::parse_error, where + ": expected decimal string or number");
}

Eigen::MatrixXd parse_matrix(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) fail(errc::parse_error, where + ": expected non-empty matrix");
    const std::size_t rows = j.size();
    const std::size_t cols = j.at(0).is_array() ? j.at(0).size() : 0;
    if (cols == 0) fail(errc::parse_error, where + ": expected matrix of rows");
    Eigen::MatrixXd m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const json& row = j.at(i);
        if (!row.is_array() || row.size() != cols)
            fail(errc::parse_error, where + ": ragged matrix");
        for (std::size_t k = 0; k < cols; ++k)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                parse_decimal(row.at(k), where);
    }
    return m;
}

/// dual(basis) and inv_different must span the same lattice: the change of
/// basis T = inv_diff * dual^-1 has to be an integer matrix of determinant
/// +-1 up to numerical noise.
void check_inverse_different(const NumberFieldData& f) {
    const Eigen::MatrixXd dual = f.basis_embedding.inverse().transpose();
    const Eigen::MatrixXd t = f.inv_different_embedding * dual.inverse();
    double max_resid = 0.0;
    for (Eigen::Index i = 0; i < t.rows(); ++i)
        for (Eigen::Index j = 0; j < t.cols(); ++j)
            max_resid = std::max(max_resid, std::abs(t(i, j) - std::round(t(i, j))));
    const double det = std::abs(t.determinant());
    if (max_resid > 1e-8 || std::abs(det - 1.0) > 1e-8) {
        std::ostringstream os;
        os << f.label << ": inv_different_embedding does not span the trace-form dual of the "
           << "integral basis (rounding residual " << max_resid << ", |det| " << det << ")";
        fail(errc::invariant_violation, os.str());
    }
}

void validate(NumberFieldData& f) {
    if (f.degree <= 0) fail(errc::invariant_violation, f.label + ": degree must be positive");
    if (f.r1 < 0 || f.r2 < 0 || f.r1 + 2 * f.r2 != f.degree) {
        std::ostringstream os;
        os << f.label << ": signature mismatch: r1 + 2 r2 = " << (f.r1 + 2 * f.r2)
           << " but degree = " << f.degree;
        fail(errc::invariant_violation, os.str());
    }
    if (f.discriminant == 0) fail(errc::invariant_violation, f.label + ": discriminant must be nonzero");
    if (f.roots_of_unity <= 0)
        fail(errc::invariant_violation, f.label + ": roots_of_unity must be positive");
    const auto n = static_cast<Eigen::Index>(f.degree);
    if (f.basis_embedding.rows() != n || f.basis_embedding.cols() != n)
        fail(errc::invariant_violation, f.label + ": basis_embedding must be degree x degree");
    if (f.inv_different_embedding.rows() != n || f.inv_different_embedding.cols() != n)
        fail(errc::invariant_violation, f.label + ": inv_different_embedding must be degree x degree");

    const double covol = std::abs(f.basis_embedding.determinant());
    const double target = f.sqrt_abs_disc();
    const double resid = std::abs(covol - target) / target;
    if (!(resid <= kFieldValidationTol)) {
        std::ostringstream os;
        os << f.label << ": covolume mismatch: |det(basis_embedding)| = " << covol
           << " but sqrt|disc| = " << target << " (relative residual " << resid << ")";
        fail(errc::invariant_violation, os.str());
    }
    check_inverse_different(f);

    for (std::size_t c = 0; c < f.class_reps.size(); ++c) {
        if (f.class_reps[c].rows() != n || f.class_reps[c].cols() != n)
            fail(errc::invariant_violation, f.label + ": class rep has wrong shape");
    }
    if (!f.class_reps.empty()) {
        // The identity class leads the list and is represented by O_F itself.
        const Eigen::MatrixXd t = f.class_reps.front() * f.basis_embedding.inverse();
        double resid = std::abs(std::abs(t.determinant()) - 1.0);
        for (Eigen::Index i = 0; i < t.rows(); ++i)
            for (Eigen::Index j = 0; j < t.cols(); ++j)
                resid = std::max(resid, std::abs(t(i, j) - std::round(t(i, j))));
        if (resid > 1e-8)
            fail(errc::invariant_violation,
                 f.label + ": class_reps[0] must span the ring of integers (identity class)");
    }
    if (f.regulator && !(*f.regulator > 0.0))
        fail(errc::invariant_violation, f.label + ": regulator must be positive");
    if (!f.fundamental_units.empty() && f.regulator && f.unit_rank() == 1) {
        // With unit rank 1 the regulator is |log of either coordinate|.
        const Eigen::VectorXd& u = f.fundamental_units.front();
        if (u.size() == n) {
            const double r = std::abs(std::log(std::abs(u(0))));
            if (std::abs(r - *f.regulator) > 1e-6)
                fail(errc::invariant_violation,
                     f.label + ": fundamental unit inconsistent with declared regulator");
        }
    }
}

}  // namespace

double NumberFieldData::unit_torus_mass() const {
    double reg = 1.0;
    if (unit_rank() > 0) {
        if (!regulator)
            fail(errc::unsupported, label + ": regulator required for unit torus mass");
        reg = *regulator;
    }
    return std::pow(2.0, r1) * class_number() * reg / roots_of_unity;
}

FieldPtr rationals() {
    static const FieldPtr q = [] {
        auto f = std::make_shared<NumberFieldData>();
        f->degree = 1;
        f->r1 = 1;
        f->r2 = 0;
        f->discriminant = 1;
        f->basis_embedding = Eigen::MatrixXd::Identity(1, 1);
        f->inv_different_embedding = Eigen::MatrixXd::Identity(1, 1);
        f->class_reps = {Eigen::MatrixXd::Identity(1, 1)};
        f->regulator = 1.0;
        f->roots_of_unity = 2;
        f->label = "Q";
        return FieldPtr(f);
    }();
    return q;
}

FieldPtr parse_field_json(const std::string& text, const std::string& label) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(errc::parse_error, label + ": " + e.what());
    }
    auto f = std::make_shared<NumberFieldData>();
    f->label = label;
    try {
        f->degree = j.at("degree").get<int>();
        f->r1 = j.at("r1").get<int>();
        f->r2 = j.at("r2").get<int>();
        f->discriminant = j.at("discriminant").get<long long>();
        f->basis_embedding = parse_matrix(j.at("basis_embedding"), label + ".basis_embedding");
        f->inv_different_embedding =
            parse_matrix(j.at("inv_different_embedding"), label + ".inv_different_embedding");
        f->roots_of_unity = j.at("roots_of_unity").get<int>();
        if (j.contains("class_reps")) {
            for (std::size_t c = 0; c < j["class_reps"].size(); ++c)
                f->class_reps.push_back(parse_matrix(j["class_reps"].at(c), label + ".class_reps"));
        }
        if (j.contains("regulator")) f->regulator = parse_decimal(j["regulator"], label + ".regulator");
        if (j.contains("fundamental_units")) {
            for (const auto& row : j["fundamental_units"]) {
                Eigen::VectorXd u(row.size());
                for (std::size_t k = 0; k < row.size(); ++k)
                    u(static_cast<Eigen::Index>(k)) = parse_decimal(row.at(k), label + ".fundamental_units");
                f->fundamental_units.push_back(std::move(u));
            }
        }
    } catch (const json::exception& e) {
        fail(errc::parse_error, label + ": " + e.what());
    }
    validate(*f);
    return f;
}

FieldPtr load_field(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(errc::parse_error, "cannot open field file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_field_json(buf.str(), path.stem().string());
}

}  // namespace adelic
