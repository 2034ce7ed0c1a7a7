// io.hpp — Pipeline composition, config files, CSV/JSON export, sweeps

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chaincorr/analysis.hpp"
#include "chaincorr/chain.hpp"
#include "chaincorr/correlations.hpp"
#include "chaincorr/couplings.hpp"
#include "chaincorr/liouvillian.hpp"

namespace chaincorr {

class parse_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SolverDiagnostics {
    double residual = 0.0;
    int kernel_dimension = 0;
};

// Everything one run produces, serializable to a single JSON document whose
// config echo round-trips bit-exactly.
struct ResultDocument {
    ChainConfig config;
    CouplingMatrices couplings;
    AtomicCorrelations correlations;
    AngularScan scan;
    PeakSet peaks;
    SolverDiagnostics diagnostics;
};

// Full pipeline: validate -> couplings -> generator -> steady state ->
// expectations -> angular scan -> peaks, with the physicality invariants
// (gamma positive semidefinite, state Hermitian/unit-trace/positive, scan
// reflection-symmetric) asserted along the way.
ResultDocument run_scan(const ChainConfig& cfg, int grid_points = 3600);

struct SweepSpec {
    ChainConfig base;
    std::string parameter;       // one of the swept_parameters() names
    std::vector<double> values;
    std::filesystem::path out_dir;
    int grid_points = 3600;
    int workers = 0;             // 0: hardware concurrency
};

const std::vector<std::string>& swept_parameters();

struct SweepPoint {
    double value = 0.0;
    std::optional<ResultDocument> result;  // empty on failure
    std::string error;                     // failure description, empty on success
};

// One pipeline run per swept value; failures are captured per point and do
// not stop the sweep. Writes point_###/scan.csv, point_###/result.json and a
// summary.csv under spec.out_dir.
std::vector<SweepPoint> run_sweep(const SweepSpec& spec);

// Flat key = value configuration file ('#' comments). Keys: n_atoms,
// spacing_over_lambda, driven_atom (default 1), rabi_over_gamma (default 0).
ChainConfig load_config_file(const std::filesystem::path& path);
ChainConfig parse_config(std::istream& in, const std::string& origin = "<stream>");

// Per-angle CSV, exact header:
//   theta_deg,g1_over_u,g2_over_u2,g2_norm,c2
// with an empty g2_norm field where the ratio is undefined.
void write_scan_csv(std::ostream& out, const AngularScan& scan);

// Sweep summary CSV, exact header:
//   swept_value,n_peaks,max_g2,peak_angles_deg,v12
// (peak angles ';'-joined inside the field; failed points leave the numeric
// fields empty).
void write_summary_csv(std::ostream& out, const std::vector<SweepPoint>& points);

// Row-major text dump of a complex matrix: first line the dimension, then
// one line per row of "re,im" fields separated by single spaces.
void write_density_matrix(std::ostream& out, const Matrix& rho);
Matrix read_density_matrix(std::istream& in);

nlohmann::json to_json(const ResultDocument& doc);
ResultDocument document_from_json(const nlohmann::json& j);

} // namespace chaincorr
