// analysis.hpp — Extremum prediction and peak detection on angular scans

#pragma once

#include <vector>

#include "chaincorr/chain.hpp"
#include "chaincorr/correlations.hpp"

namespace chaincorr {

// Closed-form stationary directions of the two-atom G1 pattern. The axis
// branch theta in {0, pi} exists for every configuration; the interference
// branch solves cos(theta) = (n*pi + psi_12)/(k r_12) for every integer n
// that keeps |cos(theta)| <= 1. Example: psi_12 = -3pi/4 at r_12 = lambda/4
// gives cos(theta) = 1/2, i.e. theta = pi/3 and 5pi/3.
struct ExtremumPrediction {
    enum class Branch { axis, interference };
    double theta = 0.0;   // radians in [0, 2*pi)
    Branch branch = Branch::axis;
    int order_n = 0;
};

// N = 2 only; other chain sizes raise unsupported_configuration.
class unsupported_configuration final : public config_error {
public:
    using config_error::config_error;
};

std::vector<ExtremumPrediction> predict_g1_extrema(const ChainConfig& cfg,
                                                   const PairCoherence& pc);

enum class PeakClass { antibunched, bunched, superbunched };

// Photon-statistics classification of a g2 value: < 1 antibunched,
// up to 2 bunched, above 2 superbunched.
PeakClass classify(double g2_value);

struct Peak {
    double theta = 0.0;       // refined position, radians
    double value = 0.0;       // refined height
    double width_fwhm = 0.0;  // full width at half maximum, radians
    PeakClass cls = PeakClass::bunched;
};

// Angles where g2 is undefined (G1 underflow); g2 there reflects missing
// single-photon emission rather than a measurable ratio, so these are kept
// out of the peak list and reported with their finite C2 value instead.
struct DivergentCandidate {
    double theta = 0.0;
    double c2 = 0.0;
};

struct PeakSet {
    std::vector<Peak> peaks;
    std::vector<DivergentCandidate> divergent;
};

// Local maxima of g2 above the bunching threshold on the (circular) grid,
// positions refined by quadratic interpolation of log g2 through the three
// bracketing samples. Peaks closer than 0.5 degrees after refinement merge
// into the higher one.
PeakSet find_peaks(const AngularScan& scan);

struct ExtremumCheck {
    ExtremumPrediction prediction;
    double slope;        // central-difference dG1/dtheta at the predicted angle
    double slope_scale;  // max |dG1/dtheta| over the scan
    bool pass = false;
};

// Confront predicted stationary angles with the numerical pattern: each
// prediction passes when |dG1/dtheta| there stays below 1e-6 of the scan's
// maximum slope.
std::vector<ExtremumCheck> verify_extrema(
    const AtomicCorrelations& corr, const ChainConfig& cfg,
    const std::vector<ExtremumPrediction>& predictions, int grid_points = 720);

} // namespace chaincorr
