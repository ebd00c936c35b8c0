#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "scpim/analysis.hpp"

using namespace scpim;

namespace {

// sqrt(p (1 - p) / 1000) with p = exp(-0.7), mpmath.
constexpr double kBinomSigma1000 = 0.01581102;
// Same for nbit = 4000.
constexpr double kBinomSigma4000 = 0.00790551;
constexpr double kTruncStd3 = 0.9865783;

McConfig reference_point() {
    McConfig c;
    c.nbit = 1000;
    c.tau_x = 0.3;
    c.tau_y = 0.4;
    c.seed = 20240601;
    return c;
}

}  // namespace

TEST_CASE("error distribution at 0.3 ns and 0.4 ns") {
    const McReport r = mc_error_distribution(reference_point());
    CHECK(r.errors.size() == 1000);
    CHECK(r.histogram.total() == 1000);
    CHECK(r.histogram.bins() >= 20);
    CHECK(r.binomial_sigma == doctest::Approx(kBinomSigma1000).epsilon(1e-6));
    CHECK(r.sample_std >= 0.0140);
    CHECK(r.sample_std <= 0.0180);
    CHECK(std::fabs(r.mean) < 0.0016);
    CHECK(r.uncertainty() == 2 * r.sample_std);
    REQUIRE(r.fit.has_value());
    CHECK(r.fit->sigma == doctest::Approx(r.sample_std).epsilon(0.15));
    CHECK(std::fabs(r.fit->mu) < 3 * r.histogram.bin_width());

    McConfig big = reference_point();
    big.nbit = 4000;
    CHECK(mc_error_distribution(big).sample_std == doctest::Approx(kBinomSigma4000).epsilon(0.15));
}

TEST_CASE("runs are deterministic and thread-count independent") {
    McConfig a = reference_point();
    a.iterations = 200;
    a.variation.sigma_ic = 0.03;
    a.variation.sigma_circuit = 0.05;
    McConfig b = a;
    b.threads = 1;
    a.threads = 7;
    const McReport ra = mc_error_distribution(a);
    const McReport rb = mc_error_distribution(b);
    CHECK(ra.errors == rb.errors);
    CHECK(ra.histogram.counts == rb.histogram.counts);
    REQUIRE(ra.fit.has_value());
    CHECK(std::fabs(ra.fit->sigma - rb.fit->sigma) <= 1e-12);
    CHECK(std::fabs(ra.fit->mu - rb.fit->mu) <= 1e-12);

    McConfig c = a;
    c.seed += 1;
    CHECK(mc_error_distribution(c).errors != ra.errors);
}

TEST_CASE("fixed-chip mode reuses one map") {
    McConfig c = reference_point();
    c.iterations = 300;
    c.variation.sigma_ic = 0.05;
    c.ic_sampling = IcSampling::FixedChip;
    const McReport fixed = mc_error_distribution(c);
    CHECK(fixed.errors == mc_error_distribution(c).errors);
    c.ic_sampling = IcSampling::PerIteration;
    CHECK(mc_error_distribution(c).errors != fixed.errors);
}

TEST_CASE("McConfig validation") {
    McConfig c;
    c.iterations = 1;
    CHECK_THROWS_AS(mc_error_distribution(c), std::invalid_argument);
    c = McConfig{};
    c.nbit = 8;
    CHECK_THROWS_AS(mc_error_distribution(c), std::invalid_argument);
    c = McConfig{};
    c.tau_y = -0.1;
    CHECK_THROWS_AS(mc_error_distribution(c), std::invalid_argument);
}

TEST_CASE("sigma scales as one over root nbit") {
    const std::size_t nbits[] = {250, 1000, 4000};
    const auto pts = sweep_nbit(reference_point(), nbits);
    REQUIRE(pts.size() == 3);
    const double s1000 = pts[1].report.sample_std;
    CHECK(pts[0].report.sample_std / s1000 == doctest::Approx(2.0).epsilon(0.15));
    CHECK(pts[2].report.sample_std / s1000 == doctest::Approx(0.5).epsilon(0.15));
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double se = pts[i - 1].report.sample_std / std::sqrt(2.0 * 999);
        CHECK(pts[i].report.sample_std < pts[i - 1].report.sample_std + se);
    }

    const std::size_t one[] = {512};
    CHECK(sweep_nbit(reference_point(), one).size() == 1);
    CHECK_THROWS_AS(sweep_nbit(reference_point(), std::span<const std::size_t>{}),
                    std::invalid_argument);

    McConfig huge = reference_point();
    huge.iterations = 40;
    const std::size_t mega[] = {1000000};
    CHECK(sweep_nbit(huge, mega)[0].report.sample_std < 0.001);
}

TEST_CASE("sigma is flat in tau_y") {
    std::vector<double> taus;
    for (int i = 1; i <= 10; ++i) taus.push_back(0.1 * i);
    const auto pts = sweep_tau_y(reference_point(), taus);
    double lo = 1e9, hi = 0;
    for (const auto& p : pts) {
        lo = std::min(lo, p.report.sample_std);
        hi = std::max(hi, p.report.sample_std);
        CHECK(p.report.sample_std == doctest::Approx(p.report.binomial_sigma).epsilon(0.2));
    }
    CHECK(hi / lo <= 1.3);

    const double zero[] = {0.0};
    const auto z = sweep_tau_y(reference_point(), zero)[0].report;
    const double px = std::exp(-0.3);
    CHECK(z.sample_std == doctest::Approx(std::sqrt(px * (1 - px) / 1000)).epsilon(0.2));

    const double huge[] = {60.0};
    const auto h = sweep_tau_y(reference_point(), huge)[0].report;
    CHECK(h.sample_std == 0.0);
    CHECK(h.expected_product < 1e-20);
    CHECK_FALSE(h.fit.has_value());
}

TEST_CASE("critical-current variance sweep") {
    const double sig[] = {0.0, 0.01, 0.10};
    const auto pts = sweep_ic_variance(reference_point(), sig);
    REQUIRE(pts.size() == 3);
    CHECK(pts[0].report.errors == mc_error_distribution(reference_point()).errors);
    CHECK(pts[1].report.sample_std <= 2.0 * pts[0].report.sample_std);
    CHECK(std::isfinite(pts[2].report.mean));
    CHECK(pts[2].config.variation.sigma_ic == 0.10);
    const double neg[] = {-0.01};
    CHECK_THROWS_AS(sweep_ic_variance(reference_point(), neg), std::invalid_argument);
}

TEST_CASE("log-multiplication baseline") {
    const LogLut lut = build_lut(10);
    const Operand half = Operand::from_raw(512, 10);
    RngStream rng(1);
    CHECK(std::fabs(logmult_baseline(half, half, lut, 0.0, rng) / 0.25 - 1.0) < std::ldexp(1.0, -14));

    const BaselineStats s = logmult_statistics(half, half, lut, 0.1, 10000, 3);
    CHECK(s.sample_std == doctest::Approx(0.025 * kTruncStd3).epsilon(0.05));
    CHECK(std::fabs(s.mean_error) < 4 * s.sample_std / 100);

    const Operand zero = Operand::from_raw(0, 10);
    const double ceiling = std::exp(-lut.neg_log(0));
    CHECK(logmult_baseline(zero, half, lut, 0.0, rng) <= ceiling);
    CHECK(logmult_baseline(zero, half, lut, 0.1, rng) <= ceiling * 1.3);

    CHECK_THROWS_AS(logmult_baseline(Operand::from_raw(1, 8), half, lut, 0.0, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(logmult_statistics(half, half, lut, 0.1, 1, 3), std::invalid_argument);
}

TEST_CASE("circuit variance: stochastic engine versus log multiplication") {
    const LogLut lut = build_lut(10);
    const DtcSpec dtc;
    const Operand x = Operand::from_fraction(0.75, 10);
    McConfig cfg = reference_point();
    const double grid[] = {0.0, 0.04, 0.06, 0.08, 0.10};
    const auto pts = sweep_circuit_variance(cfg, grid, x, x, lut, dtc);
    REQUIRE(pts.size() == 5);
    CHECK(pts[0].baseline.sample_std == 0.0);
    const double s0 = pts[0].scpim.report.sample_std;
    const double s10 = pts[4].scpim.report.sample_std;
    CHECK(s10 <= 1.3 * s0);
    CHECK(pts[4].baseline.sample_std >= 3.0 * s10);
    for (std::size_t i = 2; i < pts.size(); ++i)
        CHECK(pts[i].baseline.sample_std >= pts[i - 1].baseline.sample_std);
    const double neg[] = {-0.1};
    CHECK_THROWS_AS(sweep_circuit_variance(cfg, neg, x, x, lut, dtc), std::invalid_argument);
}

TEST_CASE("gaussian_fit on synthetic data") {
    std::mt19937_64 gen(42);
    std::normal_distribution<double> nd(0.0, 0.016);
    std::vector<double> s(100000);
    for (auto& v : s) v = nd(gen);
    const Histogram h = make_histogram(s);
    CHECK(h.total() == s.size());
    const GaussianFit f = gaussian_fit(h);
    CHECK(f.sigma == doctest::Approx(0.016).epsilon(0.05));
    CHECK(std::fabs(f.mu) < h.bin_width());
    CHECK(f.amplitude > 0);
}

TEST_CASE("gaussian_fit rejects degenerate histograms") {
    const std::vector<double> two = {0.0, 0.0, 1.0, 1.0, 1.0};
    Histogram h;
    h.edges = {-0.5, 0.5, 1.5};
    h.counts = {2, 3};
    CHECK_THROWS_AS(gaussian_fit(h), FitError);
    CHECK_THROWS_AS(gaussian_fit(make_histogram(two)), FitError);
}

TEST_CASE("histogram binning") {
    std::vector<double> s;
    for (int i = 0; i < 1000; ++i) s.push_back((i % 37) / 1000.0);
    const Histogram lat = make_histogram(s, 20, 1.0 / 1000.0);
    CHECK(lat.total() == 1000);
    const double w = lat.bin_width() * 1000.0;
    CHECK(std::fabs(w - std::round(w)) < 1e-9);
    // Lattice points sit strictly inside bins.
    for (double e : lat.edges) {
        const double k = e * 1000.0;
        CHECK(std::fabs(k - std::round(k)) > 0.25);
    }
    const Histogram plain = make_histogram(s);
    CHECK(plain.bins() >= 20);
    CHECK(plain.edges.size() == plain.bins() + 1);
    CHECK_THROWS_AS(make_histogram(std::vector<double>{}), std::invalid_argument);
}
