#include "chaincorr/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace chaincorr {

namespace {

constexpr double two_pi = 2.0 * M_PI;
constexpr double merge_window = 0.5 * M_PI / 180.0;  // peaks closer than this coalesce

double wrap_angle(double theta) {
    theta = std::fmod(theta, two_pi);
    if (theta < 0.0) theta += two_pi;
    return theta;
}

} // namespace

std::vector<ExtremumPrediction> predict_g1_extrema(const ChainConfig& cfg,
                                                   const PairCoherence& pc) {
    if (cfg.n_atoms != 2) {
        throw unsupported_configuration(
            "closed-form extremum prediction applies to the two-atom chain, got n_atoms = " +
            std::to_string(cfg.n_atoms));
    }

    std::vector<ExtremumPrediction> out;
    out.push_back({0.0, ExtremumPrediction::Branch::axis, 0});
    out.push_back({M_PI, ExtremumPrediction::Branch::axis, 1});

    const double kr = wavenumber * cfg.spacing_over_lambda;
    const int n_max = static_cast<int>(std::ceil(kr / M_PI)) + 1;
    for (int n = -n_max; n <= n_max; ++n) {
        const double cos_theta = (n * M_PI + pc.psi) / kr;
        if (std::abs(cos_theta) > 1.0) continue;
        const double theta = std::acos(cos_theta);  // in [0, pi]
        auto add_unique = [&out, n](double angle) {
            for (const auto& p : out) {
                if (std::abs(p.theta - angle) < 1e-12) return;
            }
            out.push_back({angle, ExtremumPrediction::Branch::interference, n});
        };
        add_unique(theta);
        add_unique(wrap_angle(two_pi - theta));  // mirror partner across the axis
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.theta < b.theta; });
    return out;
}

PeakClass classify(double g2_value) {
    if (g2_value < 1.0) return PeakClass::antibunched;
    if (g2_value <= 2.0) return PeakClass::bunched;
    return PeakClass::superbunched;
}

PeakSet find_peaks(const AngularScan& scan) {
    PeakSet result;
    const int n = static_cast<int>(scan.theta.size());
    if (n < 3) return result;
    const double step = two_pi / n;

    auto defined = [&](int k) { return bool(scan.g2_defined[((k % n) + n) % n]); };
    auto value = [&](int k) { return scan.g2_norm[((k % n) + n) % n]; };

    std::vector<Peak> peaks;
    for (int k = 0; k < n; ++k) {
        if (!defined(k - 1) || !defined(k) || !defined(k + 1)) continue;
        const double y = value(k);
        if (!(y > value(k - 1) && y > value(k + 1))) continue;
        if (!(y > 1.0)) continue;  // below the bunching threshold

        // Quadratic refinement through log of the three bracketing samples.
        double theta = scan.theta[k];
        double height = y;
        const double lm = std::log(value(k - 1));
        const double l0 = std::log(y);
        const double lp = std::log(value(k + 1));
        const double curv = lm - 2.0 * l0 + lp;
        if (curv < 0.0) {
            const double delta = 0.5 * (lm - lp) / curv;
            theta = wrap_angle(theta + delta * step);
            height = std::exp(l0 - 0.125 * (lm - lp) * (lm - lp) / curv);
        }

        // FWHM on the linear scale, walking to the half-height crossings.
        const double half = height / 2.0;
        double width = two_pi;
        int left = k, right = k;
        while (right - left < n) {
            const bool left_below = !defined(left - 1) || value(left - 1) < half;
            const bool right_below = !defined(right + 1) || value(right + 1) < half;
            bool moved = false;
            if (!left_below) { --left; moved = true; }
            if (!right_below) { ++right; moved = true; }
            if (!moved) break;
        }
        if (right - left < n) {
            auto crossing = [&](int inner, int outer) {
                if (!defined(outer)) return step * std::abs(outer - inner);
                const double yi = value(inner);
                const double yo = value(outer);
                const double frac = (yi - half) / std::max(yi - yo, 1e-300);
                return step * (std::abs(outer - inner) - 1.0 + frac);
            };
            width = (k - left) * step + crossing(left, left - 1) +
                    (right - k) * step + crossing(right, right + 1);
        }

        peaks.push_back({theta, height, width, classify(height)});
    }

    // Merge refinement-coincident peaks, keeping the taller one.
    std::sort(peaks.begin(), peaks.end(),
              [](const Peak& a, const Peak& b) { return a.value > b.value; });
    for (const auto& p : peaks) {
        bool absorbed = false;
        for (const auto& kept : result.peaks) {
            double gap = std::abs(p.theta - kept.theta);
            gap = std::min(gap, two_pi - gap);
            if (gap < merge_window) {
                absorbed = true;
                break;
            }
        }
        if (!absorbed) result.peaks.push_back(p);
    }
    std::sort(result.peaks.begin(), result.peaks.end(),
              [](const Peak& a, const Peak& b) { return a.theta < b.theta; });

    // Undefined stretches: report each contiguous run once, at the angle of
    // its largest C2.
    int k = 0;
    while (k < n) {
        if (defined(k)) { ++k; continue; }
        int best = k;
        int end = k;
        while (end < n && !defined(end)) {
            if (scan.c2[end] > scan.c2[best]) best = end;
            ++end;
        }
        result.divergent.push_back({scan.theta[best], scan.c2[best]});
        k = end;
    }
    return result;
}

std::vector<ExtremumCheck> verify_extrema(
    const AtomicCorrelations& corr, const ChainConfig& cfg,
    const std::vector<ExtremumPrediction>& predictions, int grid_points) {
    const double h = 1e-5;
    auto slope_at = [&](double theta) {
        return (g1_angular(corr, cfg, theta + h) - g1_angular(corr, cfg, theta - h)) /
               (2.0 * h);
    };

    double scale = 0.0;
    for (int k = 0; k < grid_points; ++k) {
        scale = std::max(scale, std::abs(slope_at(two_pi * k / grid_points)));
    }

    std::vector<ExtremumCheck> report;
    report.reserve(predictions.size());
    for (const auto& p : predictions) {
        ExtremumCheck check{p, slope_at(p.theta), scale, false};
        check.pass = std::abs(check.slope) <= 1e-6 * scale;
        report.push_back(check);
    }
    return report;
}

} // namespace chaincorr
