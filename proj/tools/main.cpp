// adelic-zeta: batch CLI over the core library. Every subcommand prints a
// machine-readable payload on stdout (JSON by default, CSV via --emit csv)
// and structured errors on stderr. Exit codes: 0 success, 1 domain error,
// 2 usage error.

#include <atomic>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "adelic/cohomology.hpp"
#include "adelic/errors.hpp"
#include "adelic/field_data.hpp"
#include "adelic/lattice.hpp"
#include "adelic/moduli.hpp"
#include "adelic/stability.hpp"
#include "adelic/zeta.hpp"

namespace {

using adelic::Complex;
using json = nlohmann::ordered_json;

enum class Emit { json, csv };

struct Output {
    Emit emit = Emit::json;
};

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

json matrix_to_json(const Eigen::MatrixXi& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

Complex parse_complex(const std::string& text) {
    const auto comma = text.find(',');
    try {
        if (comma == std::string::npos) return Complex(std::stod(text), 0.0);
        return Complex(std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1)));
    } catch (const std::exception&) {
        adelic::fail(adelic::errc::parse_error, "cannot parse complex value '" + text + "'");
    }
}

adelic::FieldPtr load_field_arg(const std::string& arg) {
    if (arg == "Q") return adelic::rationals();
    return adelic::load_field(arg);
}

std::vector<Complex> load_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) adelic::fail(adelic::errc::parse_error, "cannot open grid file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        adelic::fail(adelic::errc::parse_error, path + ": " + e.what());
    }
    if (!j.is_array()) adelic::fail(adelic::errc::parse_error, path + ": grid must be an array");
    std::vector<Complex> grid;
    for (const auto& item : j) {
        if (item.is_array() && item.size() == 2)
            grid.emplace_back(item.at(0).get<double>(), item.at(1).get<double>());
        else if (item.is_number())
            grid.emplace_back(item.get<double>(), 0.0);
        else if (item.is_string())
            grid.push_back(parse_complex(item.get<std::string>()));
        else
            adelic::fail(adelic::errc::parse_error, path + ": grid entries must be [re, im]");
    }
    return grid;
}

int thread_budget() {
    const char* env = std::getenv("ADELIC_ZETA_THREADS");
    if (!env) return 1;
    const int v = std::atoi(env);
    if (v <= 0) return 1;
    return std::min<int>(v, std::max(1u, std::thread::hardware_concurrency()));
}

/// Index-ordered parallel map; results land in input order regardless of
/// the thread count, so output bytes are invocation-deterministic.
template <typename Fn>
void parallel_over(std::size_t count, Fn&& fn) {
    const int threads = std::min<std::size_t>(thread_budget(), count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<std::size_t> cursor{0};
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = cursor.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    for (std::thread& th : pool) th.join();
}

void print_json(const json& payload) { std::cout << payload.dump() << "\n"; }

// ---------------------------------------------------------------------------
// subcommand payloads

int run_field_check(const std::string& path, const Output& out) {
    adelic::FieldPtr f = load_field_arg(path);
    const double covol = std::abs(f->basis_embedding.determinant());
    if (out.emit == Emit::csv) {
        std::cout << "ok,label,degree,r1,r2,discriminant,covolume,class_number,roots_of_unity\n";
        std::cout << "true," << f->label << "," << f->degree << "," << f->r1 << "," << f->r2 << ","
                  << f->discriminant << "," << covol << "," << f->class_number() << ","
                  << f->roots_of_unity << "\n";
        return 0;
    }
    json payload;
    payload["ok"] = true;
    payload["label"] = f->label;
    payload["degree"] = f->degree;
    payload["r1"] = f->r1;
    payload["r2"] = f->r2;
    payload["discriminant"] = f->discriminant;
    payload["covolume"] = covol;
    payload["sqrt_abs_disc"] = f->sqrt_abs_disc();
    payload["class_number"] = f->class_number();
    payload["roots_of_unity"] = f->roots_of_unity;
    if (f->regulator) payload["regulator"] = *f->regulator;
    print_json(payload);
    return 0;
}

int run_cohom(const std::string& which, const std::string& lattice_path, double tol,
              const Output& out) {
    const adelic::MetrizedLattice lat = adelic::load_lattice(lattice_path);
    const adelic::Bounded res = which == "rr" ? adelic::rr_residual(lat, tol)
                                              : adelic::serre_residual(lat, tol);
    const adelic::Bounded a = adelic::h0(lat, tol);
    const adelic::Bounded b = adelic::h1(lat, tol);
    if (out.emit == Emit::csv) {
        std::cout << "residual,bound,h0,h1,degree\n";
        std::cout << res.value << "," << res.bound << "," << a.value << "," << b.value << ","
                  << adelic::degree(lat) << "\n";
        return 0;
    }
    json payload;
    payload["residual"] = res.value;
    payload["bound"] = res.bound;
    payload["h0"] = a.value;
    payload["h1"] = b.value;
    payload["degree"] = adelic::degree(lat);
    payload["rank"] = lat.rank_over_field();
    print_json(payload);
    return 0;
}

int run_stab_test(const std::string& lattice_path, bool uncertified, const Output& out) {
    const adelic::MetrizedLattice lat = adelic::load_lattice(lattice_path);
    const adelic::Semistability ss = adelic::is_semistable(lat, uncertified);
    if (out.emit == Emit::csv) {
        std::cout << "semistable,certified,slope,max_sub_slope\n";
        std::cout << (ss.semistable ? "true" : "false") << ","
                  << (ss.certified ? "true" : "false") << "," << ss.lattice_slope << ","
                  << (ss.certificate.rank > 0 ? ss.certificate.slope : ss.lattice_slope) << "\n";
        return 0;
    }
    json payload;
    payload["semistable"] = ss.semistable;
    payload["certified"] = ss.certified;
    payload["slope"] = ss.lattice_slope;
    if (ss.certificate.rank > 0) {
        json cert;
        cert["rank"] = ss.certificate.rank;
        cert["degree"] = ss.certificate.degree;
        cert["slope"] = ss.certificate.slope;
        cert["coeffs"] = matrix_to_json(ss.certificate.coeffs);
        cert["sub_generator"] = matrix_to_json(ss.certificate.sub_generator);
        payload["certificate"] = cert;
    }
    print_json(payload);
    return 0;
}

int run_stab_hn(const std::string& lattice_path, bool uncertified, const Output& out) {
    const adelic::MetrizedLattice lat = adelic::load_lattice(lattice_path);
    const adelic::HNFiltration hn = adelic::hn_filtration(lat, uncertified);
    if (out.emit == Emit::csv) {
        std::cout << "rank,degree,slope\n";
        for (const adelic::HNStep& s : hn.steps)
            std::cout << s.rank << "," << s.degree << "," << s.slope << "\n";
        return 0;
    }
    json payload;
    payload["certified"] = hn.certified;
    json steps = json::array();
    for (const adelic::HNStep& s : hn.steps) {
        json step;
        step["rank"] = s.rank;
        step["degree"] = s.degree;
        step["slope"] = s.slope;
        step["coeffs"] = matrix_to_json(s.coeffs);
        step["sub_generator"] = matrix_to_json(s.sub_generator);
        steps.push_back(step);
    }
    payload["steps"] = steps;
    json polygon = json::array();
    for (const auto& [r, d] : hn.polygon()) polygon.push_back(json::array({r, d}));
    payload["polygon"] = polygon;
    payload["quotient_slopes"] = hn.quotient_slopes();
    print_json(payload);
    return 0;
}

int run_moduli_volume(const std::string& field_path, int rank, const Output& out) {
    adelic::FieldPtr f = load_field_arg(field_path);
    const double w = adelic::moduli_volume(f, rank);
    if (out.emit == Emit::csv) {
        std::cout << "volume\n" << w << "\n";
        return 0;
    }
    json payload;
    payload["field"] = f->label;
    payload["rank"] = rank;
    payload["volume"] = w;
    print_json(payload);
    return 0;
}

json point_json(const adelic::ZetaPoint& p) {
    json j;
    j["s"] = json::array({p.s.real(), p.s.imag()});
    j["value"] = json::array({p.value.real(), p.value.imag()});
    j["err"] = p.err;
    j["method"] = adelic::method_name(p.method);
    return j;
}

void point_csv_row(const adelic::ZetaPoint& p) {
    std::cout << p.s.real() << "," << p.s.imag() << "," << p.value.real() << ","
              << p.value.imag() << "," << p.err << "," << adelic::method_name(p.method) << "\n";
}

int run_zeta_eval(const adelic::ZetaSpec& spec, const std::vector<std::string>& s_args,
                  const std::string& method, const Output& out) {
    adelic::ZetaEvaluator eval(spec);
    std::vector<Complex> points;
    points.reserve(s_args.size());
    for (const std::string& s : s_args) points.push_back(parse_complex(s));

    struct Row {
        std::vector<adelic::ZetaPoint> values;
    };
    std::vector<Row> rows(points.size());
    parallel_over(points.size(), [&](std::size_t i) {
        Row& row = rows[i];
        if (method == "direct" || method == "both") row.values.push_back(eval.zeta_direct(points[i]));
        if (method == "continued" || method == "both")
            row.values.push_back(eval.zeta_continued(points[i]));
    });

    if (out.emit == Emit::csv)
        std::cout << "s_re,s_im,val_re,val_im,err,method\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (const adelic::ZetaPoint& p : rows[i].values) {
            if (out.emit == Emit::csv)
                point_csv_row(p);
            else
                print_json(point_json(p));
        }
        if (method == "both" && out.emit == Emit::json) {
            const double delta = std::abs(rows[i].values[0].value - rows[i].values[1].value);
            json summary;
            summary["s"] = json::array({points[i].real(), points[i].imag()});
            summary["delta"] = delta;
            summary["combined_err"] = rows[i].values[0].err + rows[i].values[1].err;
            summary["method"] = "delta";
            print_json(summary);
        }
    }
    return 0;
}

int run_zeta_fescan(const adelic::ZetaSpec& spec, const std::string& grid_path,
                    const Output& out) {
    adelic::ZetaEvaluator eval(spec);
    const std::vector<Complex> grid = load_grid(grid_path);
    const adelic::ZetaEvaluator::FeScanResult res = eval.fe_scan(grid);
    if (out.emit == Emit::csv) {
        std::cout << "s_re,s_im,fe_residual,cross_residual,cross_budget\n";
        for (const auto& s : res.samples)
            std::cout << s.s.real() << "," << s.s.imag() << "," << s.fe_residual << ","
                      << (s.has_cross ? s.cross_residual : 0.0) << ","
                      << (s.has_cross ? s.cross_budget : 0.0) << "\n";
        return 0;
    }
    json payload;
    payload["max_fe_residual"] = res.max_fe_residual;
    payload["max_cross_residual"] = res.max_cross_residual;
    payload["cross_within_budget"] = res.cross_within_budget;
    json samples = json::array();
    for (const auto& s : res.samples) {
        json row;
        row["s"] = json::array({s.s.real(), s.s.imag()});
        row["fe_residual"] = s.fe_residual;
        if (s.has_cross) {
            row["cross_residual"] = s.cross_residual;
            row["cross_budget"] = s.cross_budget;
        }
        samples.push_back(row);
    }
    payload["samples"] = samples;
    print_json(payload);
    return 0;
}

int run_zeta_residues(const adelic::ZetaSpec& spec, const Output& out) {
    adelic::ZetaEvaluator eval(spec);
    const adelic::ZetaEvaluator::Residues r = eval.residues();
    if (out.emit == Emit::csv) {
        std::cout << "res0,resA,fit0,fitA,volume\n";
        std::cout << r.res0 << "," << r.resA << "," << r.fit0 << "," << r.fitA << "," << r.volume
                  << "\n";
        return 0;
    }
    json payload;
    payload["res0"] = r.res0;
    payload["resA"] = r.resA;
    payload["fit0"] = r.fit0;
    payload["fitA"] = r.fitA;
    payload["volume"] = r.volume;
    print_json(payload);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"arithmetic cohomology, stability and non-abelian zeta functions "
                 "over number fields"};
    app.require_subcommand(1);

    Output out;
    std::string emit = "json";
    app.add_option("--emit", emit, "output format: json|csv")->check(CLI::IsMember({"json", "csv"}));

    // field check <file>
    auto* field_cmd = app.add_subcommand("field", "number field data");
    field_cmd->require_subcommand(1);
    auto* field_check = field_cmd->add_subcommand("check", "validate a field file");
    std::string field_file;
    field_check->add_option("file", field_file, "field JSON file")->required();

    // cohom rr|serre --lattice <file> [--tol]
    auto* cohom_cmd = app.add_subcommand("cohom", "arithmetic cohomology identities");
    cohom_cmd->require_subcommand(1);
    std::string cohom_lattice;
    double cohom_tol = 1e-12;
    auto* cohom_rr = cohom_cmd->add_subcommand("rr", "additive Riemann-Roch residual");
    cohom_rr->add_option("--lattice", cohom_lattice, "lattice JSON file")->required();
    cohom_rr->add_option("--tol", cohom_tol, "theta tail tolerance");
    auto* cohom_serre = cohom_cmd->add_subcommand("serre", "multiplicative duality residual");
    cohom_serre->add_option("--lattice", cohom_lattice, "lattice JSON file")->required();
    cohom_serre->add_option("--tol", cohom_tol, "theta tail tolerance");

    // stab test|hn --lattice <file>
    auto* stab_cmd = app.add_subcommand("stab", "slope stability");
    stab_cmd->require_subcommand(1);
    std::string stab_lattice;
    bool stab_uncertified = false;
    auto* stab_test = stab_cmd->add_subcommand("test", "semistability with certificate");
    stab_test->add_option("--lattice", stab_lattice, "lattice JSON file")->required();
    stab_test->add_flag("--uncertified", stab_uncertified,
                        "allow best-effort answers beyond the certified ranks");
    auto* stab_hn = stab_cmd->add_subcommand("hn", "Harder-Narasimhan filtration");
    stab_hn->add_option("--lattice", stab_lattice, "lattice JSON file")->required();
    stab_hn->add_flag("--uncertified", stab_uncertified,
                      "allow best-effort answers beyond the certified ranks");

    // moduli volume --field <file> --rank r
    auto* moduli_cmd = app.add_subcommand("moduli", "moduli charts and volumes");
    moduli_cmd->require_subcommand(1);
    auto* moduli_vol = moduli_cmd->add_subcommand("volume", "slice mass W_F(r)");
    std::string moduli_field;
    int moduli_rank = 1;
    moduli_vol->add_option("--field", moduli_field, "field JSON file or Q")->required();
    moduli_vol->add_option("--rank", moduli_rank, "module rank")->required();

    // zeta eval|fescan|residues
    auto* zeta_cmd = app.add_subcommand("zeta", "non-abelian zeta functions");
    zeta_cmd->require_subcommand(1);
    std::string zeta_field;
    int zeta_rank = 1;
    double zeta_a = 1.0;
    double zeta_tol = 1e-11;
    std::string zeta_quad;
    auto add_zeta_common = [&](CLI::App* cmd) {
        cmd->add_option("--field", zeta_field, "field JSON file or Q")->required();
        cmd->add_option("--rank", zeta_rank, "module rank")->required();
        cmd->add_option("--A", zeta_a, "theta exponent A > 0");
        cmd->add_option("--tol", zeta_tol, "target tolerance");
        cmd->add_option("--quad", zeta_quad, "quadrature spec JSON file");
    };
    auto* zeta_eval = zeta_cmd->add_subcommand("eval", "evaluate Z(s)");
    add_zeta_common(zeta_eval);
    std::vector<std::string> zeta_s;
    std::string zeta_method = "continued";
    zeta_eval->add_option("--s", zeta_s, "evaluation point re,im (repeatable)")->required();
    zeta_eval->add_option("--method", zeta_method, "direct|continued|both")
        ->check(CLI::IsMember({"direct", "continued", "both"}));
    auto* zeta_fescan = zeta_cmd->add_subcommand("fescan", "functional-equation scan");
    add_zeta_common(zeta_fescan);
    std::string zeta_grid;
    zeta_fescan->add_option("--grid", zeta_grid, "grid JSON file")->required();
    auto* zeta_res = zeta_cmd->add_subcommand("residues", "poles and residues");
    add_zeta_common(zeta_res);

    // Let `--emit` (held by the root app) be given after a subcommand.
    for (CLI::App* sc : {field_cmd, cohom_cmd, stab_cmd, moduli_cmd, zeta_cmd}) {
        sc->fallthrough();
        for (CLI::App* leaf : sc->get_subcommands({})) leaf->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    out.emit = emit == "csv" ? Emit::csv : Emit::json;

    try {
        if (field_check->parsed()) return run_field_check(field_file, out);
        if (cohom_rr->parsed()) return run_cohom("rr", cohom_lattice, cohom_tol, out);
        if (cohom_serre->parsed()) return run_cohom("serre", cohom_lattice, cohom_tol, out);
        if (stab_test->parsed()) return run_stab_test(stab_lattice, stab_uncertified, out);
        if (stab_hn->parsed()) return run_stab_hn(stab_lattice, stab_uncertified, out);
        if (moduli_vol->parsed()) return run_moduli_volume(moduli_field, moduli_rank, out);
        if (zeta_eval->parsed() || zeta_fescan->parsed() || zeta_res->parsed()) {
            adelic::ZetaSpec spec;
            spec.field = load_field_arg(zeta_field);
            spec.rank = zeta_rank;
            spec.A = zeta_a;
            spec.tol = zeta_tol;
            if (!zeta_quad.empty())
                spec.quad = adelic::QuadratureSpec::from_json_file(zeta_quad);
            if (zeta_eval->parsed()) return run_zeta_eval(spec, zeta_s, zeta_method, out);
            if (zeta_fescan->parsed()) return run_zeta_fescan(spec, zeta_grid, out);
            return run_zeta_residues(spec, out);
        }
    } catch (const adelic::Error& e) {
        json err;
        err["error"]["code"] = adelic::errc_name(e.code());
        err["error"]["message"] = e.what();
        std::cerr << err.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        json err;
        err["error"]["code"] = "internal";
        err["error"]["message"] = e.what();
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 2;
}
