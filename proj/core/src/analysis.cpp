#include "scpim/analysis.hpp"

#include <unsupported/Eigen/NonLinearOptimization>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

#include "scpim/engine.hpp"

namespace scpim {

namespace {

constexpr std::size_t kMaxBins = 10000;
constexpr std::size_t kMinFitBins = 5;

// Static partition of [0, n) over worker threads. Each index is processed
// exactly once and writes only its own output slot.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
}

double quantile(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Shifted by the first sample so constant data gives exactly zero.
double std_of(std::span<const double> v) {
    const double shift = v.front();
    double s = 0.0, ss = 0.0;
    for (double x : v) {
        s += x - shift;
        ss += (x - shift) * (x - shift);
    }
    const double n = static_cast<double>(v.size());
    return std::sqrt(std::max(0.0, (ss - s * s / n) / (n - 1.0)));
}

MulConfig engine_config(const McConfig& cfg) {
    MulConfig m;
    m.nbit = cfg.nbit;
    m.device = cfg.device;
    m.drive_current = cfg.drive_current;
    m.variation = cfg.variation;
    m.row_length = cfg.row_length;
    m.array_rows = mul_layout(cfg.nbit, cfg.row_length).rows;
    return m;
}

// Gaussian in standardized coordinates: params (A, mu, sigma).
struct GaussianResidual {
    using Scalar = double;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;

    Eigen::VectorXd x;
    Eigen::VectorXd y;

    int inputs() const { return 3; }
    int values() const { return static_cast<int>(x.size()); }

    int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& f) const {
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double z = (x[i] - p[1]) / p[2];
            f[i] = p[0] * std::exp(-0.5 * z * z) - y[i];
        }
        return 0;
    }

    int df(const Eigen::VectorXd& p, Eigen::MatrixXd& jac) const {
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double z = (x[i] - p[1]) / p[2];
            const double g = std::exp(-0.5 * z * z);
            jac(i, 0) = g;
            jac(i, 1) = p[0] * g * z / p[2];
            jac(i, 2) = p[0] * g * z * z / p[2];
        }
        return 0;
    }
};

}  // namespace

void McConfig::validate() const {
    if (iterations < 2)
        throw std::invalid_argument("McConfig: iterations must be >= 2, got " + std::to_string(iterations));
    if (nbit < 16) throw std::invalid_argument("McConfig: nbit must be >= 16, got " + std::to_string(nbit));
    if (row_length == 0) throw std::invalid_argument("McConfig: row_length must be >= 1");
    device.validate();
    variation.validate();
    PulseSpec{drive_current, tau_x}.validate();
    PulseSpec{drive_current, tau_y}.validate();
}

double McConfig::expected_product() const {
    return p_unswitched(device, PulseSpec{drive_current, tau_x}) *
           p_unswitched(device, PulseSpec{drive_current, tau_y});
}

std::size_t Histogram::total() const noexcept {
    return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

Histogram make_histogram(std::span<const double> samples, std::size_t min_bins, double lattice) {
    if (samples.empty()) throw std::invalid_argument("make_histogram: no samples");
    min_bins = std::max<std::size_t>(min_bins, 1);
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double lo = sorted.front();
    const double hi = sorted.back();
    const double range = hi - lo;

    const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
    double width = 2.0 * iqr / std::cbrt(static_cast<double>(sorted.size()));
    if (!(width > 0.0) || range / width < static_cast<double>(min_bins))
        width = range / static_cast<double>(min_bins);
    if (range / width > static_cast<double>(kMaxBins)) width = range / static_cast<double>(kMaxBins);

    double start = lo;
    double span = range;
    if (lattice > 0.0) {
        width = std::max(1.0, std::floor(width / lattice + 1e-9)) * lattice;
        start = lo - 0.5 * lattice;
        span = range + lattice;
    } else if (!(range > 0.0)) {
        width = 1.0 / static_cast<double>(min_bins);
        start = lo - 0.5;
        span = 1.0;
    }

    const auto bins = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / width - 1e-9)));
    Histogram h;
    h.counts.assign(bins, 0);
    h.edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = start + width * static_cast<double>(i);
    for (double s : samples) {
        auto idx = static_cast<std::size_t>(std::max(0.0, std::floor((s - start) / width)));
        h.counts[std::min(idx, bins - 1)]++;
    }
    return h;
}

GaussianFit gaussian_fit(const Histogram& histogram) {
    const std::size_t bins = histogram.bins();
    std::size_t nonempty = 0;
    double mass = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < bins; ++i) {
        if (histogram.counts[i] == 0) continue;
        ++nonempty;
        mass += static_cast<double>(histogram.counts[i]);
        m1 += static_cast<double>(histogram.counts[i]) * histogram.center(i);
    }
    if (nonempty < kMinFitBins)
        throw FitError("gaussian_fit: " + std::to_string(nonempty) +
                       " non-empty bins; at least 5 are needed");
    const double mean = m1 / mass;
    double var = 0.0;
    for (std::size_t i = 0; i < bins; ++i)
        var += static_cast<double>(histogram.counts[i]) * std::pow(histogram.center(i) - mean, 2);
    const double scale = std::sqrt(var / mass);
    if (!(scale > 0.0)) throw FitError("gaussian_fit: zero spread");

    GaussianResidual fn;
    fn.x.resize(static_cast<Eigen::Index>(bins));
    fn.y.resize(static_cast<Eigen::Index>(bins));
    double peak = 0.0;
    for (std::size_t i = 0; i < bins; ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        fn.x[k] = (histogram.center(i) - mean) / scale;
        fn.y[k] = static_cast<double>(histogram.counts[i]);
        peak = std::max(peak, fn.y[k]);
    }

    Eigen::VectorXd p(3);
    p << peak, 0.0, 1.0;
    Eigen::LevenbergMarquardt<GaussianResidual> lm(fn);
    const auto status = lm.minimize(p);
    if (status == Eigen::LevenbergMarquardtSpace::ImproperInputParameters ||
        !std::isfinite(p[2]) || p[2] == 0.0 || !std::isfinite(p[1]))
        throw FitError("gaussian_fit: solver did not converge");

    return GaussianFit{p[0], mean + p[1] * scale, std::fabs(p[2]) * scale};
}

McReport mc_error_distribution(const McConfig& cfg) {
    cfg.validate();
    const MulConfig engine = engine_config(cfg);
    const PulseSpec px{cfg.drive_current, cfg.tau_x};
    const PulseSpec py{cfg.drive_current, cfg.tau_y};
    const double expected = cfg.expected_product();

    RngStream root(cfg.seed);
    std::optional<ArrayState> chip;
    if (cfg.ic_sampling == IcSampling::FixedChip) {
        RngStream chip_rng = root.split();
        const MulLayout layout = mul_layout(cfg.nbit, cfg.row_length);
        chip.emplace(layout.rows, layout.cols, cfg.device, cfg.variation, chip_rng);
    }

    McReport rep;
    rep.expected_product = expected;
    rep.errors.resize(cfg.iterations);
    std::vector<double> estimates(cfg.iterations);
    parallel_for(cfg.iterations, cfg.threads, [&](std::size_t i) {
        RngStream rng = root.substream(i);
        double estimate = 0.0;
        if (chip) {
            ArrayState local = *chip;
            estimate = static_cast<double>(sc_multiply_on(local, local.full(), px, py, engine, rng)) /
                       static_cast<double>(cfg.nbit);
        } else {
            estimate = sc_multiply_pulses(px, py, engine, rng).estimate;
        }
        estimates[i] = estimate;
        rep.errors[i] = estimate - expected;
    });

    rep.mean = mean_of(rep.errors);
    rep.sample_std = std_of(rep.errors);
    rep.binomial_sigma = std::sqrt(expected * (1.0 - expected) / static_cast<double>(cfg.nbit));
    rep.mean_relative_error = expected > 0.0 ? rep.mean / expected : 0.0;
    rep.histogram = make_histogram(rep.errors, 20, 1.0 / static_cast<double>(cfg.nbit));
    try {
        rep.fit = gaussian_fit(rep.histogram);
    } catch (const FitError&) {
        rep.fit.reset();
    }
    return rep;
}

std::vector<SweepPoint> sweep_nbit(const McConfig& cfg, std::span<const std::size_t> nbits) {
    if (nbits.empty()) throw std::invalid_argument("sweep_nbit: empty list");
    std::vector<SweepPoint> out;
    for (std::size_t n : nbits) {
        McConfig c = cfg;
        c.nbit = n;
        out.push_back({static_cast<double>(n), c, mc_error_distribution(c)});
    }
    return out;
}

std::vector<SweepPoint> sweep_tau_y(const McConfig& cfg, std::span<const double> tau_ys) {
    if (tau_ys.empty()) throw std::invalid_argument("sweep_tau_y: empty list");
    std::vector<SweepPoint> out;
    for (double t : tau_ys) {
        McConfig c = cfg;
        c.tau_y = t;
        out.push_back({t, c, mc_error_distribution(c)});
    }
    return out;
}

std::vector<SweepPoint> sweep_ic_variance(const McConfig& cfg, std::span<const double> sigma_ics) {
    if (sigma_ics.empty()) throw std::invalid_argument("sweep_ic_variance: empty list");
    std::vector<SweepPoint> out;
    for (double s : sigma_ics) {
        if (s < 0.0) throw std::invalid_argument("sweep_ic_variance: negative sigma");
        McConfig c = cfg;
        c.variation.sigma_ic = s;
        out.push_back({s, c, mc_error_distribution(c)});
    }
    return out;
}

double logmult_baseline(const Operand& x, const Operand& y, const LogLut& lut,
                        double sigma_circuit, RngStream& rng) {
    if (x.width() != lut.in_width || y.width() != lut.in_width)
        throw std::invalid_argument("logmult_baseline: operand width does not match LUT");
    if (!(sigma_circuit >= 0.0)) throw std::invalid_argument("logmult_baseline: negative sigma");
    const double product = std::exp(-(lut.neg_log(x.raw()) + lut.neg_log(y.raw())));
    if (sigma_circuit == 0.0) return product;
    return product * (1.0 + sigma_circuit * truncated_standard_normal(rng));
}

BaselineStats logmult_statistics(const Operand& x, const Operand& y, const LogLut& lut,
                                 double sigma_circuit, std::size_t trials, std::uint64_t seed) {
    if (trials < 2) throw std::invalid_argument("logmult_statistics: trials must be >= 2");
    RngStream root(seed);
    std::vector<double> est(trials);
    for (std::size_t i = 0; i < trials; ++i) {
        RngStream rng = root.substream(i);
        est[i] = logmult_baseline(x, y, lut, sigma_circuit, rng);
    }
    const double m = mean_of(est);
    return BaselineStats{m - x.value() * y.value(), std_of(est)};
}

std::vector<CircuitPoint> sweep_circuit_variance(const McConfig& cfg,
                                                 std::span<const double> sigma_circuits,
                                                 const Operand& x, const Operand& y,
                                                 const LogLut& lut, const DtcSpec& dtc) {
    if (sigma_circuits.empty()) throw std::invalid_argument("sweep_circuit_variance: empty list");
    McConfig base = cfg;
    base.tau_x = operand_to_pulse(x, lut, dtc, cfg.drive_current).duration;
    base.tau_y = operand_to_pulse(y, lut, dtc, cfg.drive_current).duration;

    std::vector<CircuitPoint> out;
    for (double s : sigma_circuits) {
        if (s < 0.0) throw std::invalid_argument("sweep_circuit_variance: negative sigma");
        McConfig c = base;
        c.variation.sigma_circuit = s;
        CircuitPoint pt;
        pt.sigma_circuit = s;
        pt.scpim = SweepPoint{s, c, mc_error_distribution(c)};
        pt.baseline = logmult_statistics(x, y, lut, s, cfg.iterations, cfg.seed);
        out.push_back(std::move(pt));
    }
    return out;
}

}  // namespace scpim
