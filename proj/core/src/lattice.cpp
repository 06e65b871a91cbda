#include "adelic/lattice.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "adelic/errors.hpp"

namespace adelic {

MetrizedLattice MetrizedLattice::create(FieldPtr field, int rank_over_field,
                                        Eigen::MatrixXd generator) {
    if (!field) fail(errc::domain_error, "lattice: null field");
    if (rank_over_field <= 0) fail(errc::domain_error, "lattice: rank_over_field must be positive");
    const Eigen::Index n = generator.rows();
    if (generator.cols() != n) fail(errc::invariant_violation, "lattice: generator must be square");
    if (n != static_cast<Eigen::Index>(rank_over_field) * field->degree)
        fail(errc::invariant_violation,
             "lattice: generator size must equal rank_over_field * field degree");
    double hadamard = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) hadamard *= generator.row(i).norm();
    const double det = std::abs(generator.determinant());
    if (!(det > 1e-12 * hadamard) || !std::isfinite(det)) {
        std::ostringstream os;
        os << "lattice: generator is singular or too ill-conditioned (|det| = " << det
           << ", Hadamard bound = " << hadamard << ")";
        fail(errc::invariant_violation, os.str());
    }
    return MetrizedLattice(std::move(field), rank_over_field, std::move(generator));
}

double covolume(const MetrizedLattice& lattice) {
    return std::abs(lattice.generator().determinant());
}

double degree(const MetrizedLattice& lattice) {
    return 0.5 * lattice.rank_over_field() * lattice.field()->log_abs_disc() -
           std::log(covolume(lattice));
}

MetrizedLattice dual(const MetrizedLattice& lattice) {
    Eigen::MatrixXd inv_t = lattice.generator().inverse().transpose();
    return MetrizedLattice::create(lattice.field(), lattice.rank_over_field(), std::move(inv_t));
}

MetrizedLattice bv_twist(const MetrizedLattice& lattice, double t) {
    return MetrizedLattice::create(lattice.field(), lattice.rank_over_field(),
                                   std::exp(t) * lattice.generator());
}

MetrizedLattice standard_lattice(const FieldPtr& field) {
    return MetrizedLattice::create(field, 1, field->basis_embedding);
}

MetrizedLattice kappa_lattice(const FieldPtr& field) {
    return MetrizedLattice::create(field, 1, field->inv_different_embedding);
}

MetrizedLattice load_lattice(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(errc::parse_error, "cannot open lattice file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        fail(errc::parse_error, path.string() + ": " + e.what());
    }
    FieldPtr field;
    int rank = 0;
    Eigen::MatrixXd gen;
    try {
        const auto& jf = j.at("field");
        if (jf.is_string() && jf.get<std::string>() == "Q") {
            field = rationals();
        } else if (jf.is_string()) {
            std::filesystem::path fp = jf.get<std::string>();
            if (fp.is_relative()) fp = path.parent_path() / fp;
            field = load_field(fp);
        } else {
            fail(errc::parse_error, path.string() + ": field must be a path or \"Q\"");
        }
        rank = j.at("rank_over_field").get<int>();
        const auto& jm = j.at("generator");
        const std::size_t rows = jm.size();
        if (rows == 0) fail(errc::parse_error, path.string() + ": empty generator");
        gen.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(jm.at(0).size()));
        for (std::size_t i = 0; i < rows; ++i) {
            const auto& row = jm.at(i);
            if (row.size() != static_cast<std::size_t>(gen.cols()))
                fail(errc::parse_error, path.string() + ": ragged generator");
            for (std::size_t k = 0; k < row.size(); ++k) {
                const auto& cell = row.at(k);
                gen(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                    cell.is_string() ? std::stod(cell.get<std::string>()) : cell.get<double>();
            }
        }
    } catch (const nlohmann::json::exception& e) {
        fail(errc::parse_error, path.string() + ": " + e.what());
    }
    return MetrizedLattice::create(std::move(field), rank, std::move(gen));
}

}  // namespace adelic
