#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "chaincorr/analysis.hpp"
#include "oracles.hpp"

using namespace chaincorr;

namespace {

AtomicCorrelations solve_and_expect(const ChainConfig& cfg) {
    const CouplingMatrices cpl = build_couplings(cfg);
    const Matrix gen = build_generator(build_hamiltonian(cfg, cpl), cpl);
    return expectations(steady_state(gen).rho);
}

bool has_angle(const std::vector<ExtremumPrediction>& predictions, double theta,
               double tol = 1e-9) {
    for (const auto& p : predictions) {
        if (std::abs(p.theta - theta) < tol) return true;
    }
    return false;
}

// Synthetic scan with unit baseline and Gaussian bumps (angle in degrees).
AngularScan synthetic_scan(int points,
                           const std::vector<std::pair<double, double>>& bumps,
                           double sigma_deg = 2.0) {
    AngularScan scan;
    scan.theta.resize(points);
    scan.g1_over_u.assign(points, 1.0);
    scan.g2_over_u2.assign(points, 0.0);
    scan.g2_norm.assign(points, 0.0);
    scan.g2_defined.assign(points, true);
    scan.c2.assign(points, 0.0);
    for (int k = 0; k < points; ++k) {
        scan.theta[k] = 2.0 * M_PI * k / points;
        const double deg = 360.0 * k / points;
        double y = 0.5;
        for (const auto& [center, height] : bumps) {
            double gap = std::abs(deg - center);
            gap = std::min(gap, 360.0 - gap);
            y += height * std::exp(-gap * gap / (2.0 * sigma_deg * sigma_deg));
        }
        scan.g2_norm[k] = y;
        scan.g2_over_u2[k] = y;
        scan.c2[k] = y - 1.0;
    }
    return scan;
}

} // namespace

TEST_CASE("classification thresholds") {
    CHECK(classify(0.2) == PeakClass::antibunched);
    CHECK(classify(0.999) == PeakClass::antibunched);
    CHECK(classify(1.0) == PeakClass::bunched);
    CHECK(classify(1.5) == PeakClass::bunched);
    CHECK(classify(2.0) == PeakClass::bunched);
    CHECK(classify(2.0001) == PeakClass::superbunched);
    CHECK(classify(5e3) == PeakClass::superbunched);
}

TEST_CASE("extremum prediction enumerates both branches") {
    const ChainConfig half{2, 0.5, 1, 0.02};

    SUBCASE("real coherence at half-wavelength spacing") {
        PairCoherence pc{1.0, 0.0, true};
        const auto predictions = predict_g1_extrema(half, pc);
        CHECK(predictions.size() == 4);
        CHECK(has_angle(predictions, 0.0));
        CHECK(has_angle(predictions, M_PI / 2));
        CHECK(has_angle(predictions, M_PI));
        CHECK(has_angle(predictions, 3 * M_PI / 2));
    }

    SUBCASE("quarter-wave pair with psi = -3pi/4") {
        // cos(theta) = (n pi - 3pi/4)/(pi/2) has the single feasible solution
        // cos(theta) = 1/2: stationary directions pi/3 and 5pi/3.
        const ChainConfig quarter{2, 0.25, 1, 0.02};
        PairCoherence pc{1.0, -3.0 * M_PI / 4.0, true};
        const auto predictions = predict_g1_extrema(quarter, pc);
        CHECK(predictions.size() == 4);
        CHECK(has_angle(predictions, 0.0));
        CHECK(has_angle(predictions, M_PI));
        CHECK(has_angle(predictions, M_PI / 3, 1e-12));
        CHECK(has_angle(predictions, 5 * M_PI / 3, 1e-12));
        for (const auto& p : predictions) {
            if (p.branch == ExtremumPrediction::Branch::interference) {
                CHECK(std::abs(std::cos(p.theta) - 0.5) < 1e-12);
            }
        }
    }

    SUBCASE("axis branch survives any phase and spacing") {
        for (double psi : {-2.9, -1.0, 0.0, 0.4, 3.1}) {
            PairCoherence pc{0.8, psi, true};
            const auto predictions = predict_g1_extrema(ChainConfig{2, 0.11, 1, 0.0}, pc);
            CHECK(has_angle(predictions, 0.0));
            CHECK(has_angle(predictions, M_PI));
        }
    }

    SUBCASE("infeasible cosines are dropped") {
        // kr = 2*pi*0.05 = 0.1*pi: only n = 0 with small psi can fit.
        PairCoherence pc{1.0, 0.0, true};
        const auto predictions = predict_g1_extrema(ChainConfig{2, 0.05, 1, 0.0}, pc);
        for (const auto& p : predictions) {
            CHECK(std::abs(std::cos(p.theta)) <= 1.0 + 1e-12);
        }
        // n = 0, psi = 0 -> cos(theta) = 0: pi/2 and 3pi/2 plus the axis pair
        CHECK(predictions.size() == 4);
    }

    CHECK_THROWS_AS(
        predict_g1_extrema(ChainConfig{3, 0.25, 1, 0.02}, PairCoherence{1.0, 0.0, true}),
        unsupported_configuration);
}

TEST_CASE("find_peaks on synthetic scans") {
    SUBCASE("constant scan has no peaks") {
        const AngularScan flat = synthetic_scan(720, {});
        const PeakSet peaks = find_peaks(flat);
        CHECK(peaks.peaks.empty());
        CHECK(peaks.divergent.empty());
    }

    SUBCASE("two well-separated bumps with accurate positions and widths") {
        const AngularScan scan = synthetic_scan(3600, {{71.0, 10.0}, {289.0, 10.0}});
        const PeakSet peaks = find_peaks(scan);
        REQUIRE(peaks.peaks.size() == 2);
        CHECK(peaks.peaks[0].theta * 180.0 / M_PI == doctest::Approx(71.0).epsilon(1e-3));
        CHECK(peaks.peaks[1].theta * 180.0 / M_PI == doctest::Approx(289.0).epsilon(1e-3));
        CHECK(peaks.peaks[0].value == doctest::Approx(10.5).epsilon(1e-3));
        CHECK(peaks.peaks[0].cls == PeakClass::superbunched);
        // FWHM of a Gaussian bump on a 0.5 baseline: half-max 5.25 crossed at
        // height 4.75 above baseline: width = 2 sigma sqrt(2 ln(10/4.75)).
        const double expected =
            2.0 * 2.0 * std::sqrt(2.0 * std::log(10.0 / 4.75)) * M_PI / 180.0;
        CHECK(peaks.peaks[0].width_fwhm == doctest::Approx(expected).epsilon(0.02));
    }

    SUBCASE("bumps straddling the wrap-around are found once") {
        const AngularScan scan = synthetic_scan(3600, {{0.0, 8.0}});
        const PeakSet peaks = find_peaks(scan);
        REQUIRE(peaks.peaks.size() == 1);
        const double deg = peaks.peaks[0].theta * 180.0 / M_PI;
        CHECK((deg < 0.2 || deg > 359.8));
    }

    SUBCASE("near-coincident maxima merge into the taller one") {
        // Two sharp bumps 0.3 degrees apart give two grid maxima; the merge
        // window keeps only the taller.
        const AngularScan scan = synthetic_scan(3600, {{100.0, 6.0}, {100.3, 5.9}}, 0.1);
        const PeakSet peaks = find_peaks(scan);
        REQUIRE(peaks.peaks.size() == 1);
        CHECK(peaks.peaks[0].theta * 180.0 / M_PI == doctest::Approx(100.0).epsilon(5e-4));
        CHECK(peaks.peaks[0].value > 6.0);
    }

    SUBCASE("sub-threshold maxima are ignored") {
        AngularScan scan = synthetic_scan(720, {});
        for (int k = 0; k < 720; ++k) {
            scan.g2_norm[k] = 0.5 + 0.3 * std::cos(scan.theta[k]);  // max 0.8 < 1
        }
        CHECK(find_peaks(scan).peaks.empty());
    }

    SUBCASE("undefined stretches become divergent candidates") {
        AngularScan scan = synthetic_scan(720, {{120.0, 5.0}});
        for (int k = 300; k < 320; ++k) {
            scan.g2_defined[k] = false;
            scan.c2[k] = 1.0 + (k == 310 ? 1.0 : 0.0);
        }
        const PeakSet peaks = find_peaks(scan);
        REQUIRE(peaks.divergent.size() == 1);
        CHECK(peaks.divergent[0].theta == doctest::Approx(scan.theta[310]));
        CHECK(peaks.divergent[0].c2 == doctest::Approx(2.0));
    }
}

TEST_CASE("find_peaks on the physical three-atom patterns") {
    SUBCASE("end drive: two superbunched peaks at the reference angles") {
        const ChainConfig cfg{3, 0.25, 1, 0.02};
        const AngularScan scan = scan_angles(solve_and_expect(cfg), cfg, 3600);
        const PeakSet peaks = find_peaks(scan);
        std::vector<const Peak*> super;
        for (const auto& p : peaks.peaks) {
            if (p.cls == PeakClass::superbunched) super.push_back(&p);
        }
        REQUIRE(super.size() == 2);
        CHECK(super[0]->theta * 180.0 / M_PI == doctest::Approx(71.0).epsilon(0.03));
        CHECK(super[1]->theta * 180.0 / M_PI == doctest::Approx(289.0).epsilon(0.03));
        CHECK(super[0]->value > 1e3);
    }

    SUBCASE("middle drive: four mirror-symmetric superbunched peaks") {
        const ChainConfig cfg{3, 0.25, 2, 0.02};
        const AngularScan scan = scan_angles(solve_and_expect(cfg), cfg, 3600);
        const PeakSet peaks = find_peaks(scan);
        std::vector<double> super;
        for (const auto& p : peaks.peaks) {
            if (p.cls == PeakClass::superbunched) super.push_back(p.theta * 180.0 / M_PI);
        }
        REQUIRE(super.size() == 4);
        // mirror pairs under theta -> 360 - theta and theta -> 180 - theta
        CHECK(super[0] == doctest::Approx(360.0 - super[3]).epsilon(1e-3));
        CHECK(super[1] == doctest::Approx(360.0 - super[2]).epsilon(1e-3));
        CHECK(super[0] == doctest::Approx(180.0 - super[1]).epsilon(1e-3));
    }
}

TEST_CASE("verify_extrema confirms the predicted stationary angles") {
    const ChainConfig cfg{2, 0.25, 1, 0.02};
    const AtomicCorrelations corr = solve_and_expect(cfg);
    const PairCoherence pc = pair_coherence(corr, 1, 2);
    const auto predictions = predict_g1_extrema(cfg, pc);
    CHECK(predictions.size() >= 4);

    const auto report = verify_extrema(corr, cfg, predictions);
    REQUIRE(report.size() == predictions.size());
    for (const auto& check : report) {
        CAPTURE(check.prediction.theta);
        CHECK(check.pass);
        CHECK(std::abs(check.slope) <= 1e-6 * check.slope_scale);
    }

    // a deliberately wrong angle is rejected
    std::vector<ExtremumPrediction> wrong = {
        {0.7, ExtremumPrediction::Branch::interference, 1}};
    const auto bad = verify_extrema(corr, cfg, wrong);
    CHECK_FALSE(bad[0].pass);
}

TEST_CASE("superbunching sits where single-photon emission nearly vanishes") {
    const ChainConfig cfg{3, 0.25, 1, 0.02};
    const AtomicCorrelations corr = solve_and_expect(cfg);
    const AngularScan scan = scan_angles(corr, cfg, 3600);
    const PeakSet peaks = find_peaks(scan);

    double g1_max = 0.0;
    for (double y : scan.g1_over_u) g1_max = std::max(g1_max, y);

    for (const auto& p : peaks.peaks) {
        if (p.cls != PeakClass::superbunched) continue;
        // nearest local minimum of g1 within one degree
        double g1_min = g1_max;
        double min_theta = 0.0;
        const int n = static_cast<int>(scan.theta.size());
        const int center = static_cast<int>(std::llround(p.theta / (2.0 * M_PI) * n));
        for (int off = -10; off <= 10; ++off) {
            const int k = ((center + off) % n + n) % n;
            if (scan.g1_over_u[k] < g1_min) {
                g1_min = scan.g1_over_u[k];
                min_theta = scan.theta[k];
            }
        }
        double gap = std::abs(min_theta - p.theta);
        gap = std::min(gap, 2.0 * M_PI - gap);
        CHECK(gap < M_PI / 180.0);
        // emission suppressed by close to three decades at the peak
        CHECK(g1_min <= 3e-3 * g1_max);
    }
}

TEST_CASE("half-wavelength pair: taller, narrower correlation needles") {
    auto tallest = [](const ChainConfig& cfg) {
        const AngularScan scan = scan_angles(solve_and_expect(cfg), cfg, 3600);
        const PeakSet peaks = find_peaks(scan);
        const Peak* best = nullptr;
        for (const auto& p : peaks.peaks) {
            if (!best || p.value > best->value) best = &p;
        }
        REQUIRE(best != nullptr);
        return *best;
    };
    const Peak quarter = tallest(ChainConfig{2, 0.25, 1, 0.02});
    const Peak half = tallest(ChainConfig{2, 0.5, 1, 0.02});
    CHECK(half.value > 5.0 * quarter.value);
    CHECK(half.width_fwhm < quarter.width_fwhm);
    CHECK(half.cls == PeakClass::superbunched);
}

TEST_CASE("peak growth and axis migration with chain length") {
    auto max_g2 = [](const AngularScan& scan) {
        double best = 0.0;
        for (std::size_t k = 0; k < scan.g2_norm.size(); ++k) {
            if (scan.g2_defined[k]) best = std::max(best, scan.g2_norm[k]);
        }
        return best;
    };
    auto peak_axis_distance = [](const PeakSet& peaks) {
        double best_val = 0.0, angle = 0.0;
        for (const auto& p : peaks.peaks) {
            if (p.value > best_val) {
                best_val = p.value;
                angle = p.theta;
            }
        }
        return std::min(angle, 2.0 * M_PI - angle);
    };

    std::vector<double> maxima(6, 0.0), axis(6, 0.0);
    for (int n : {2, 3, 4, 5}) {
        const ChainConfig cfg{n, 0.25, 1, 0.02};
        const AngularScan scan = scan_angles(solve_and_expect(cfg), cfg, 3600);
        maxima[n] = max_g2(scan);
        axis[n] = peak_axis_distance(find_peaks(scan));
    }
    CHECK(maxima[4] > maxima[2]);
    CHECK(maxima[5] > maxima[3]);
    CHECK(axis[4] < axis[2]);
}
