// main.cpp — chaincorr command line front end

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "chaincorr/io.hpp"

namespace {

using namespace chaincorr;

constexpr double rad_to_deg = 180.0 / M_PI;

struct ConfigCli {
    std::string config_file;
    int atoms = 0;
    double spacing = 0.0;
    int drive_index = 0;
    double rabi = 0.0;
    CLI::Option* atoms_opt = nullptr;
    CLI::Option* spacing_opt = nullptr;
    CLI::Option* drive_opt = nullptr;
    CLI::Option* rabi_opt = nullptr;

    void attach(CLI::App* app) {
        app->add_option("--config", config_file, "configuration file (key = value)");
        atoms_opt = app->add_option("--atoms", atoms, "number of atoms in the chain");
        spacing_opt =
            app->add_option("--spacing", spacing, "nearest-neighbour spacing in wavelengths");
        drive_opt = app->add_option("--drive-index", drive_index, "driven atom (1-based)");
        rabi_opt = app->add_option("--rabi", rabi, "drive strength in units of gamma");
    }

    ChainConfig resolve() const {
        ChainConfig cfg;
        if (!config_file.empty()) cfg = load_config_file(config_file);
        if (atoms_opt->count()) cfg.n_atoms = atoms;
        if (spacing_opt->count()) cfg.spacing_over_lambda = spacing;
        if (drive_opt->count()) cfg.driven_atom = drive_index;
        if (rabi_opt->count()) cfg.rabi_over_gamma = rabi;
        return validate(cfg);
    }
};

void print_config(const ChainConfig& cfg) {
    std::printf("n_atoms             = %d\n", cfg.n_atoms);
    std::printf("spacing_over_lambda = %g\n", cfg.spacing_over_lambda);
    std::printf("driven_atom         = %d\n", cfg.driven_atom);
    std::printf("rabi_over_gamma     = %g\n", cfg.rabi_over_gamma);
}

void print_matrix(const char* name, const Eigen::MatrixXd& m) {
    std::printf("%s:\n", name);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            std::printf(" % .6f", m(i, j));
        }
        std::printf("\n");
    }
}

int cmd_validate(const ConfigCli& ccli) {
    const ChainConfig cfg = ccli.resolve();
    print_config(cfg);
    const CouplingMatrices cpl = build_couplings(cfg);
    print_matrix("gamma_ij / gamma", cpl.gamma);
    print_matrix("Omega_ij / gamma", cpl.omega);
    return 0;
}

int cmd_steady(const ConfigCli& ccli, const std::string& dump_path) {
    const ChainConfig cfg = ccli.resolve();
    const CouplingMatrices cpl = build_couplings(cfg);
    const Matrix gen = build_generator(build_hamiltonian(cfg, cpl), cpl);
    const SteadyState ss = steady_state(gen);
    const AtomicCorrelations corr = expectations(ss.rho);

    std::printf("steady state solved: residual %.3e, kernel dimension %d\n", ss.residual,
                ss.kernel_dimension);
    std::printf("atom  population\n");
    for (int i = 1; i <= cfg.n_atoms; ++i) {
        std::printf("%4d  %.10e\n", i, corr.population(i));
    }
    if (cfg.n_atoms >= 2) {
        std::printf("pair   Re<S_i^+ S_j^->   Im<S_i^+ S_j^->   v_ij        psi_ij/pi\n");
        for (int i = 1; i <= cfg.n_atoms; ++i) {
            for (int j = i + 1; j <= cfg.n_atoms; ++j) {
                const auto z = corr.first(i, j);
                const PairCoherence pc = pair_coherence(corr, i, j);
                std::printf("(%d,%d)  %+.8e  %+.8e  %.8f  %+.6f\n", i, j, z.real(), z.imag(),
                            pc.v, pc.psi / M_PI);
            }
        }
    }
    if (!dump_path.empty()) {
        std::ofstream out(dump_path);
        if (!out) {
            std::fprintf(stderr, "cannot open '%s' for writing\n", dump_path.c_str());
            return 1;
        }
        write_density_matrix(out, ss.rho);
        std::printf("density matrix written to %s\n", dump_path.c_str());
    }
    return 0;
}

int cmd_scan(const ConfigCli& ccli, int points, const std::string& out_dir) {
    const ChainConfig cfg = ccli.resolve();
    const ResultDocument doc = run_scan(cfg, points);

    std::filesystem::create_directories(out_dir);
    const auto csv_path = std::filesystem::path(out_dir) / "scan.csv";
    const auto json_path = std::filesystem::path(out_dir) / "result.json";
    {
        std::ofstream csv(csv_path);
        write_scan_csv(csv, doc.scan);
        std::ofstream js(json_path);
        js << to_json(doc).dump(1) << '\n';
    }
    std::printf("scan written: %s, %s\n", csv_path.c_str(), json_path.c_str());
    std::printf("%zu peak(s) above the bunching threshold\n", doc.peaks.peaks.size());
    for (const auto& p : doc.peaks.peaks) {
        std::printf("  theta = %8.3f deg  g2 = %.6e  fwhm = %.3f deg  [%s]\n",
                    p.theta * rad_to_deg, p.value, p.width_fwhm * rad_to_deg,
                    p.cls == PeakClass::superbunched ? "superbunched"
                    : p.cls == PeakClass::bunched    ? "bunched"
                                                     : "antibunched");
    }
    for (const auto& d : doc.peaks.divergent) {
        std::printf("  divergent candidate at %8.3f deg (single-photon emission vanishes), "
                    "C2 = %.6e\n",
                    d.theta * rad_to_deg, d.c2);
    }
    return 0;
}

struct Expectation {
    int superbunched_count = -1;
    std::vector<std::pair<double, double>> peaks;  // angle_deg, tol_deg
};

Expectation load_expectation(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open expectation file '" + path + "'");
    Expectation exp;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string word;
        if (!(ss >> word)) continue;
        if (word == "superbunched_count") {
            ss >> exp.superbunched_count;
        } else if (word == "peak") {
            double angle = 0.0, tol = 0.0;
            ss >> angle >> tol;
            exp.peaks.emplace_back(angle, tol);
        } else {
            throw parse_error("expectation file: unknown directive '" + word + "'");
        }
    }
    return exp;
}

int cmd_peaks(const ConfigCli& ccli, int points, const std::string& expect_path) {
    const ChainConfig cfg = ccli.resolve();
    const ResultDocument doc = run_scan(cfg, points);

    std::printf("theta_deg   g2_value      fwhm_deg  class\n");
    for (const auto& p : doc.peaks.peaks) {
        std::printf("%9.3f   %.6e  %8.3f  %s\n", p.theta * rad_to_deg, p.value,
                    p.width_fwhm * rad_to_deg,
                    p.cls == PeakClass::superbunched ? "superbunched"
                    : p.cls == PeakClass::bunched    ? "bunched"
                                                     : "antibunched");
    }
    for (const auto& d : doc.peaks.divergent) {
        std::printf("%9.3f   divergent (no single-photon emission), C2 = %.6e\n",
                    d.theta * rad_to_deg, d.c2);
    }

    if (cfg.n_atoms == 2) {
        const PairCoherence pc = pair_coherence(doc.correlations, 1, 2);
        const auto predictions = predict_g1_extrema(cfg, pc);
        const auto report = verify_extrema(doc.correlations, cfg, predictions);
        std::printf("\npredicted stationary angles of g1 (two-atom closed form):\n");
        std::printf("theta_deg   branch        n   |dG1/dtheta|  verdict\n");
        for (const auto& check : report) {
            std::printf("%9.3f   %-12s %2d   %.3e     %s\n",
                        check.prediction.theta * rad_to_deg,
                        check.prediction.branch == ExtremumPrediction::Branch::axis
                            ? "axis"
                            : "interference",
                        check.prediction.order_n, std::abs(check.slope),
                        check.pass ? "stationary" : "NOT stationary");
        }
    }

    if (!expect_path.empty()) {
        const Expectation exp = load_expectation(expect_path);
        bool ok = true;
        int superbunched = 0;
        for (const auto& p : doc.peaks.peaks) {
            if (p.cls == PeakClass::superbunched) ++superbunched;
        }
        if (exp.superbunched_count >= 0 && superbunched != exp.superbunched_count) {
            std::fprintf(stderr, "expectation failed: %d superbunched peaks, expected %d\n",
                         superbunched, exp.superbunched_count);
            ok = false;
        }
        for (const auto& [angle, tol] : exp.peaks) {
            bool found = false;
            for (const auto& p : doc.peaks.peaks) {
                double gap = std::abs(p.theta * rad_to_deg - angle);
                gap = std::min(gap, 360.0 - gap);
                if (p.cls == PeakClass::superbunched && gap <= tol) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                std::fprintf(stderr,
                             "expectation failed: no superbunched peak at %.3f +- %.3f deg\n",
                             angle, tol);
                ok = false;
            }
        }
        if (!ok) return 2;
        std::printf("all peak expectations satisfied\n");
    }
    return 0;
}

int cmd_sweep(const ConfigCli& ccli, const std::string& param,
              const std::vector<double>& values, const std::string& out_dir, int points,
              int workers) {
    SweepSpec spec;
    spec.base = ccli.resolve();
    spec.parameter = param;
    spec.values = values;
    spec.out_dir = out_dir;
    spec.grid_points = points;
    spec.workers = workers;

    const auto results = run_sweep(spec);
    int failures = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (results[i].result) {
            std::printf("point %3zu  %-10g ok, %zu peak(s)\n", i, results[i].value,
                        results[i].result->peaks.peaks.size());
        } else {
            ++failures;
            std::printf("point %3zu  %-10g FAILED: %s\n", i, results[i].value,
                        results[i].error.c_str());
        }
    }
    std::printf("summary: %s\n", (spec.out_dir / "summary.csv").c_str());
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Angular photon-correlation scans of a driven atom chain"};
    app.require_subcommand(1);

    ConfigCli ccli;

    auto* validate_cmd = app.add_subcommand("validate", "check a configuration and print "
                                                        "the coupling matrices");
    ccli.attach(validate_cmd);

    auto* steady_cmd =
        app.add_subcommand("steady", "solve the steady state and print populations and "
                                     "pair coherences");
    ConfigCli ccli_steady;
    ccli_steady.attach(steady_cmd);
    std::string dump_path;
    steady_cmd->add_option("--dump-state", dump_path,
                           "write the density matrix as text (row-major re,im)");

    auto* scan_cmd = app.add_subcommand("scan", "angular scan; writes scan.csv and "
                                                "result.json");
    ConfigCli ccli_scan;
    ccli_scan.attach(scan_cmd);
    int scan_points = 3600;
    std::string scan_out = "out";
    scan_cmd->add_option("--points", scan_points, "angular grid size (default 3600)");
    scan_cmd->add_option("--out", scan_out, "output directory (default out/)");

    auto* peaks_cmd = app.add_subcommand("peaks", "detect correlation peaks and verify "
                                                  "predicted extrema");
    ConfigCli ccli_peaks;
    ccli_peaks.attach(peaks_cmd);
    int peaks_points = 3600;
    std::string expect_path;
    peaks_cmd->add_option("--points", peaks_points, "angular grid size (default 3600)");
    peaks_cmd->add_option("--expect", expect_path,
                          "expectation file; nonzero exit when violated");

    auto* sweep_cmd = app.add_subcommand("sweep", "run the pipeline over a list of "
                                                  "parameter values");
    ConfigCli ccli_sweep;
    ccli_sweep.attach(sweep_cmd);
    std::string sweep_param;
    std::vector<double> sweep_values;
    std::string sweep_out = "sweep";
    int sweep_points = 3600;
    int sweep_workers = 0;
    sweep_cmd->add_option("--param", sweep_param, "swept parameter name")->required();
    sweep_cmd->add_option("--values", sweep_values, "comma-separated list of values")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--out", sweep_out, "output directory (default sweep/)");
    sweep_cmd->add_option("--points", sweep_points, "angular grid size per point");
    sweep_cmd->add_option("--workers", sweep_workers,
                          "parallel workers (default: hardware concurrency)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate_cmd->parsed()) return cmd_validate(ccli);
        if (steady_cmd->parsed()) return cmd_steady(ccli_steady, dump_path);
        if (scan_cmd->parsed()) return cmd_scan(ccli_scan, scan_points, scan_out);
        if (peaks_cmd->parsed()) return cmd_peaks(ccli_peaks, peaks_points, expect_path);
        if (sweep_cmd->parsed()) {
            return cmd_sweep(ccli_sweep, sweep_param, sweep_values, sweep_out, sweep_points,
                             sweep_workers);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
