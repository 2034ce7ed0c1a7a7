#include "chaincorr/io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace chaincorr {

namespace {

constexpr double rad_to_deg = 180.0 / M_PI;

std::string fmt(double v, const char* spec = "%.17g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
    const auto rows = j.size();
    const auto cols = rows ? j.at(0).size() : 0;
    Eigen::MatrixXd m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t c = 0; c < cols; ++c) m(i, c) = j.at(i).at(c).get<double>();
    }
    return m;
}

nlohmann::json complex_to_json(std::complex<double> z) {
    return nlohmann::json::array({z.real(), z.imag()});
}

std::complex<double> complex_from_json(const nlohmann::json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

const char* class_name(PeakClass c) {
    switch (c) {
        case PeakClass::antibunched: return "antibunched";
        case PeakClass::bunched: return "bunched";
        case PeakClass::superbunched: return "superbunched";
    }
    return "?";
}

PeakClass class_from_name(const std::string& s) {
    if (s == "antibunched") return PeakClass::antibunched;
    if (s == "bunched") return PeakClass::bunched;
    if (s == "superbunched") return PeakClass::superbunched;
    throw parse_error("unknown peak class '" + s + "'");
}

void check_scan_symmetry(const AngularScan& scan) {
    // The geometry is mirror-symmetric about the chain line, so every
    // angular quantity must satisfy f(theta) = f(2*pi - theta).
    const int n = static_cast<int>(scan.theta.size());
    auto check = [n](const std::vector<double>& y, const char* what) {
        double sup = 0.0, diff = 0.0;
        for (int k = 0; k < n; ++k) {
            sup = std::max(sup, std::abs(y[k]));
            diff = std::max(diff, std::abs(y[k] - y[(n - k) % n]));
        }
        if (diff > 1e-10 * std::max(sup, 1e-300)) {
            throw consistency_error(std::string("angular scan of ") + what +
                                    " broke axis-reflection symmetry: " + fmt(diff));
        }
    };
    check(scan.g1_over_u, "g1");
    check(scan.g2_over_u2, "g2");
}

} // namespace

const std::vector<std::string>& swept_parameters() {
    static const std::vector<std::string> names = {
        "spacing_over_lambda", "rabi_over_gamma", "driven_atom", "n_atoms"};
    return names;
}

ResultDocument run_scan(const ChainConfig& cfg, int grid_points) {
    if (grid_points < 360) {
        throw config_error("grid_points must be at least 360, got " +
                           std::to_string(grid_points));
    }
    ResultDocument doc;
    doc.config = validate(cfg);
    doc.couplings = build_couplings(doc.config);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ges(doc.couplings.gamma,
                                                       Eigen::EigenvaluesOnly);
    if (ges.eigenvalues().minCoeff() < -1e-10) {
        throw consistency_error("collective decay matrix not positive semidefinite (min "
                                "eigenvalue " +
                                fmt(ges.eigenvalues().minCoeff()) + ")");
    }

    const Matrix h = build_hamiltonian(doc.config, doc.couplings);
    const Matrix gen = build_generator(h, doc.couplings);
    SteadyState ss = steady_state(gen);
    doc.diagnostics = {ss.residual, ss.kernel_dimension};

    const DensityCheck dc = check_density_matrix(ss.rho);
    if (dc.hermiticity_error > 1e-12 || dc.trace_error > 1e-12 ||
        dc.min_eigenvalue < -1e-10) {
        throw consistency_error("steady state failed physicality checks (hermiticity " +
                                fmt(dc.hermiticity_error) + ", trace " + fmt(dc.trace_error) +
                                ", min eigenvalue " + fmt(dc.min_eigenvalue) + ")");
    }

    doc.correlations = expectations(ss.rho);
    doc.scan = scan_angles(doc.correlations, doc.config, grid_points);
    check_scan_symmetry(doc.scan);
    doc.peaks = find_peaks(doc.scan);
    return doc;
}

std::vector<SweepPoint> run_sweep(const SweepSpec& spec) {
    validate(spec.base);
    const auto& names = swept_parameters();
    if (std::find(names.begin(), names.end(), spec.parameter) == names.end()) {
        throw config_error("unknown sweep parameter '" + spec.parameter + "'");
    }

    std::vector<SweepPoint> points(spec.values.size());
    if (!spec.values.empty()) {
        std::filesystem::create_directories(spec.out_dir);
    }

    auto run_point = [&](std::size_t idx) {
        SweepPoint& point = points[idx];
        point.value = spec.values[idx];
        try {
            ChainConfig cfg = spec.base;
            const double v = point.value;
            if (spec.parameter == "spacing_over_lambda") {
                cfg.spacing_over_lambda = v;
            } else if (spec.parameter == "rabi_over_gamma") {
                cfg.rabi_over_gamma = v;
            } else {
                const double rounded = std::round(v);
                if (std::abs(v - rounded) > 1e-9) {
                    throw config_error("parameter '" + spec.parameter +
                                       "' needs an integer value, got " + fmt(v));
                }
                if (spec.parameter == "driven_atom") {
                    cfg.driven_atom = static_cast<int>(rounded);
                } else {
                    cfg.n_atoms = static_cast<int>(rounded);
                }
            }
            ResultDocument doc = run_scan(cfg, spec.grid_points);

            char sub[32];
            std::snprintf(sub, sizeof(sub), "point_%03zu", idx);
            const auto dir = spec.out_dir / sub;
            std::filesystem::create_directories(dir);
            std::ofstream csv(dir / "scan.csv");
            write_scan_csv(csv, doc.scan);
            std::ofstream js(dir / "result.json");
            js << to_json(doc).dump(1) << '\n';
            point.result = std::move(doc);
        } catch (const std::exception& e) {
            point.error = e.what();
        }
    };

    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    int workers = spec.workers > 0 ? spec.workers : std::max(1, hw);
    workers = std::min<int>(workers, static_cast<int>(spec.values.size()));

    if (workers <= 1) {
        for (std::size_t i = 0; i < points.size(); ++i) run_point(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < points.size(); i = next++) run_point(i);
            });
        }
        for (auto& t : pool) t.join();
    }

    if (!spec.values.empty()) {
        std::ofstream summary(spec.out_dir / "summary.csv");
        write_summary_csv(summary, points);
    }
    return points;
}

ChainConfig parse_config(std::istream& in, const std::string& origin) {
    ChainConfig cfg;
    bool have_atoms = false, have_spacing = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw parse_error(origin + ":" + std::to_string(line_no) +
                              ": expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            std::size_t used = 0;
            if (key == "n_atoms") {
                cfg.n_atoms = std::stoi(value, &used);
                have_atoms = true;
            } else if (key == "spacing_over_lambda") {
                cfg.spacing_over_lambda = std::stod(value, &used);
                have_spacing = true;
            } else if (key == "driven_atom") {
                cfg.driven_atom = std::stoi(value, &used);
            } else if (key == "rabi_over_gamma") {
                cfg.rabi_over_gamma = std::stod(value, &used);
            } else {
                throw parse_error(origin + ":" + std::to_string(line_no) +
                                  ": unknown key '" + key + "'");
            }
            if (used != value.size()) {
                throw parse_error(origin + ":" + std::to_string(line_no) +
                                  ": trailing characters in value '" + value + "'");
            }
        } catch (const std::invalid_argument&) {
            throw parse_error(origin + ":" + std::to_string(line_no) +
                              ": cannot parse value '" + value + "' for key '" + key + "'");
        } catch (const std::out_of_range&) {
            throw parse_error(origin + ":" + std::to_string(line_no) + ": value '" + value +
                              "' out of range for key '" + key + "'");
        }
    }
    if (!have_atoms || !have_spacing) {
        throw parse_error(origin + ": required keys n_atoms and spacing_over_lambda");
    }
    return cfg;
}

ChainConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw parse_error("cannot open config file '" + path.string() + "'");
    }
    return parse_config(in, path.string());
}

void write_scan_csv(std::ostream& out, const AngularScan& scan) {
    out << "theta_deg,g1_over_u,g2_over_u2,g2_norm,c2\n";
    for (std::size_t k = 0; k < scan.theta.size(); ++k) {
        out << fmt(scan.theta[k] * rad_to_deg, "%.10g") << ',' << fmt(scan.g1_over_u[k])
            << ',' << fmt(scan.g2_over_u2[k]) << ',';
        if (scan.g2_defined[k]) out << fmt(scan.g2_norm[k]);
        out << ',' << fmt(scan.c2[k]) << '\n';
    }
}

void write_summary_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
    out << "swept_value,n_peaks,max_g2,peak_angles_deg,v12\n";
    for (const auto& p : points) {
        out << fmt(p.value) << ',';
        if (p.result) {
            const ResultDocument& doc = *p.result;
            out << doc.peaks.peaks.size() << ',';
            double max_g2 = 0.0;
            bool any = false;
            for (std::size_t k = 0; k < doc.scan.g2_norm.size(); ++k) {
                if (!doc.scan.g2_defined[k]) continue;
                max_g2 = any ? std::max(max_g2, doc.scan.g2_norm[k]) : doc.scan.g2_norm[k];
                any = true;
            }
            if (any) out << fmt(max_g2);
            out << ',';
            for (std::size_t i = 0; i < doc.peaks.peaks.size(); ++i) {
                if (i) out << ';';
                out << fmt(doc.peaks.peaks[i].theta * rad_to_deg, "%.6g");
            }
            out << ',';
            if (doc.config.n_atoms >= 2) {
                const PairCoherence pc = pair_coherence(doc.correlations, 1, 2);
                if (pc.defined) out << fmt(pc.v);
            }
        } else {
            out << ",,,";
        }
        out << '\n';
    }
}

void write_density_matrix(std::ostream& out, const Matrix& rho) {
    out << rho.rows() << '\n';
    for (Eigen::Index i = 0; i < rho.rows(); ++i) {
        for (Eigen::Index j = 0; j < rho.cols(); ++j) {
            if (j) out << ' ';
            out << fmt(rho(i, j).real()) << ',' << fmt(rho(i, j).imag());
        }
        out << '\n';
    }
}

Matrix read_density_matrix(std::istream& in) {
    Eigen::Index dim = 0;
    if (!(in >> dim) || dim <= 0) {
        throw parse_error("density matrix dump: bad dimension line");
    }
    Matrix rho(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            std::string cell;
            if (!(in >> cell)) throw parse_error("density matrix dump: truncated");
            const auto comma = cell.find(',');
            if (comma == std::string::npos) {
                throw parse_error("density matrix dump: expected 're,im', got '" + cell + "'");
            }
            rho(i, j) = {std::stod(cell.substr(0, comma)), std::stod(cell.substr(comma + 1))};
        }
    }
    return rho;
}

nlohmann::json to_json(const ResultDocument& doc) {
    nlohmann::json j;
    j["config"] = {{"n_atoms", doc.config.n_atoms},
                   {"spacing_over_lambda", doc.config.spacing_over_lambda},
                   {"driven_atom", doc.config.driven_atom},
                   {"rabi_over_gamma", doc.config.rabi_over_gamma}};
    j["couplings"] = {{"gamma", matrix_to_json(doc.couplings.gamma)},
                      {"omega", matrix_to_json(doc.couplings.omega)}};

    const auto& corr = doc.correlations;
    nlohmann::json first = nlohmann::json::array();
    for (Eigen::Index i = 0; i < corr.first_order.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < corr.first_order.cols(); ++c) {
            row.push_back(complex_to_json(corr.first_order(i, c)));
        }
        first.push_back(std::move(row));
    }
    nlohmann::json second = nlohmann::json::array();
    for (const auto& z : corr.second_order) second.push_back(complex_to_json(z));
    j["correlations"] = {{"n_atoms", corr.n_atoms},
                         {"first_order", std::move(first)},
                         {"second_order", std::move(second)}};

    nlohmann::json pairs = nlohmann::json::array();
    for (int i = 1; i <= corr.n_atoms; ++i) {
        for (int jj = i + 1; jj <= corr.n_atoms; ++jj) {
            const PairCoherence pc = pair_coherence(corr, i, jj);
            pairs.push_back({{"i", i},
                             {"j", jj},
                             {"v", pc.v},
                             {"psi", pc.psi},
                             {"defined", pc.defined}});
        }
    }
    j["pair_coherences"] = std::move(pairs);

    j["scan"] = {{"theta", doc.scan.theta},
                 {"g1_over_u", doc.scan.g1_over_u},
                 {"g2_over_u2", doc.scan.g2_over_u2},
                 {"g2_norm", doc.scan.g2_norm},
                 {"g2_defined", doc.scan.g2_defined},
                 {"c2", doc.scan.c2}};

    nlohmann::json peaks = nlohmann::json::array();
    for (const auto& p : doc.peaks.peaks) {
        peaks.push_back({{"theta", p.theta},
                         {"value", p.value},
                         {"width_fwhm", p.width_fwhm},
                         {"class", class_name(p.cls)}});
    }
    nlohmann::json divergent = nlohmann::json::array();
    for (const auto& d : doc.peaks.divergent) {
        divergent.push_back({{"theta", d.theta}, {"c2", d.c2}});
    }
    j["peaks"] = std::move(peaks);
    j["divergent"] = std::move(divergent);
    j["diagnostics"] = {{"residual", doc.diagnostics.residual},
                        {"kernel_dimension", doc.diagnostics.kernel_dimension}};
    return j;
}

ResultDocument document_from_json(const nlohmann::json& j) {
    ResultDocument doc;
    const auto& jc = j.at("config");
    doc.config.n_atoms = jc.at("n_atoms").get<int>();
    doc.config.spacing_over_lambda = jc.at("spacing_over_lambda").get<double>();
    doc.config.driven_atom = jc.at("driven_atom").get<int>();
    doc.config.rabi_over_gamma = jc.at("rabi_over_gamma").get<double>();

    doc.couplings.gamma = matrix_from_json(j.at("couplings").at("gamma"));
    doc.couplings.omega = matrix_from_json(j.at("couplings").at("omega"));

    const auto& jcorr = j.at("correlations");
    doc.correlations.n_atoms = jcorr.at("n_atoms").get<int>();
    const auto& first = jcorr.at("first_order");
    const int n = doc.correlations.n_atoms;
    doc.correlations.first_order.resize(n, n);
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < n; ++c) {
            doc.correlations.first_order(i, c) = complex_from_json(first.at(i).at(c));
        }
    }
    for (const auto& z : jcorr.at("second_order")) {
        doc.correlations.second_order.push_back(complex_from_json(z));
    }

    const auto& js = j.at("scan");
    doc.scan.theta = js.at("theta").get<std::vector<double>>();
    doc.scan.g1_over_u = js.at("g1_over_u").get<std::vector<double>>();
    doc.scan.g2_over_u2 = js.at("g2_over_u2").get<std::vector<double>>();
    doc.scan.g2_norm = js.at("g2_norm").get<std::vector<double>>();
    doc.scan.g2_defined = js.at("g2_defined").get<std::vector<bool>>();
    doc.scan.c2 = js.at("c2").get<std::vector<double>>();

    for (const auto& p : j.at("peaks")) {
        doc.peaks.peaks.push_back({p.at("theta").get<double>(), p.at("value").get<double>(),
                                   p.at("width_fwhm").get<double>(),
                                   class_from_name(p.at("class").get<std::string>())});
    }
    for (const auto& d : j.at("divergent")) {
        doc.peaks.divergent.push_back({d.at("theta").get<double>(), d.at("c2").get<double>()});
    }
    doc.diagnostics.residual = j.at("diagnostics").at("residual").get<double>();
    doc.diagnostics.kernel_dimension = j.at("diagnostics").at("kernel_dimension").get<int>();
    return doc;
}

} // namespace chaincorr
