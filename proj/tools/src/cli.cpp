#include "scpim/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "scpim/analysis.hpp"
#include "scpim/config.hpp"
#include "scpim/engine.hpp"
#include "scpim/report_io.hpp"

namespace scpim::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr std::uint64_t kFallbackSeed = 1;

std::uint64_t default_seed() {
    const char* env = std::getenv("SCPIM_SEED");
    if (!env || !*env) return kFallbackSeed;
    std::uint64_t v = 0;
    const std::string_view s(env);
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw UsageError("SCPIM_SEED must be an unsigned integer, got '" + std::string(s) + "'");
    return v;
}

double parse_double(std::string_view s, std::string_view what) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
        throw UsageError("cannot parse " + std::string(what) + " '" + std::string(s) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

/// "a:b:step" (inclusive) or "v1,v2,...".
std::vector<double> parse_range(std::string_view s) {
    std::vector<double> out;
    if (s.find(':') != std::string_view::npos) {
        const auto p = split(s, ':');
        if (p.size() != 3) throw UsageError("range must be a:b:step, got '" + std::string(s) + "'");
        const double a = parse_double(p[0], "range start");
        const double b = parse_double(p[1], "range end");
        const double step = parse_double(p[2], "range step");
        if (!(step > 0.0) || b < a)
            throw UsageError("invalid range '" + std::string(s) + "': need step > 0 and end >= start");
        const auto n = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
        if (n > 100000) throw UsageError("range '" + std::string(s) + "' has too many points");
        for (std::size_t i = 0; i < n; ++i) out.push_back(a + static_cast<double>(i) * step);
    } else {
        for (auto tok : split(s, ',')) out.push_back(parse_double(tok, "sweep value"));
    }
    if (out.empty()) throw UsageError("empty sweep range");
    return out;
}

bool looks_integral(std::string_view s) {
    return !s.empty() && s.find_first_not_of("0123456789") == std::string_view::npos;
}

/// Fractions in [0, 1), or raw n-bit integers when the width was given explicitly.
Operand parse_operand(std::string_view tok, unsigned width, bool raw_allowed) {
    if (raw_allowed && looks_integral(tok)) {
        std::uint64_t v = 0;
        const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc()) throw UsageError("cannot parse operand '" + std::string(tok) + "'");
        if (v >= (std::uint64_t{1} << width))
            throw std::invalid_argument("operand " + std::string(tok) + " does not fit in " +
                                        std::to_string(width) + " bits");
        return Operand::from_raw(static_cast<std::uint32_t>(v), width);
    }
    const double v = parse_double(tok, "operand");
    if (!(v >= 0.0 && v < 1.0))
        throw std::invalid_argument("operand " + std::string(tok) + " is outside [0, 1)");
    return Operand::from_fraction(v, width);
}

std::vector<Operand> parse_operand_list(std::string_view s, unsigned width, bool raw_allowed) {
    std::vector<Operand> out;
    for (auto tok : split(s, ',')) out.push_back(parse_operand(tok, width, raw_allowed));
    return out;
}

struct Loaded {
    SimConfig sim;
    std::string hash;
};

Loaded load(const std::string& path) {
    if (path.empty()) return {default_config(), content_hash(default_config_text())};
    std::string text;
    SimConfig sim = load_config_file(path, &text);
    return {std::move(sim), content_hash(text)};
}

/// Output sink: the caller's stream, or a file written in one go.
class Sink {
public:
    Sink(std::ostream& fallback, std::string path) : fallback_(fallback), path_(std::move(path)) {}
    std::ostream& stream() { return buf_; }
    void commit() {
        if (path_.empty()) {
            fallback_ << buf_.str();
            return;
        }
        std::ofstream f(path_, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open '" + path_ + "' for writing");
        f << buf_.str();
        if (!f.flush()) throw IoError("write to '" + path_ + "' failed");
    }

private:
    std::ostream& fallback_;
    std::string path_;
    std::ostringstream buf_;
};

void write_file(const std::string& path, const std::string& text) {
    std::ostringstream dummy;
    Sink s(dummy, path);
    s.stream() << text;
    s.commit();
}

struct Common {
    std::string config;
    std::uint64_t seed = kFallbackSeed;
    std::string format = "csv";
    std::string out;
};

void add_common(CLI::App* sub, Common& c, bool with_seed) {
    sub->add_option("--config", c.config, "YAML configuration file");
    if (with_seed) sub->add_option("--seed", c.seed, "random seed (default: $SCPIM_SEED or 1)");
    sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", c.out, "write to this file instead of stdout");
}

PopcountStrategy strategy_of(const std::string& s) {
    return s == "csa" ? PopcountStrategy::CsaFa : PopcountStrategy::Apc;
}

void emit_json(std::ostream& os, nlohmann::json body, const RunMetadata& meta) {
    body["metadata"] = metadata_json(meta);
    os << body.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

struct MulOpts {
    Common common;
    std::string x, y;
    std::size_t nbit = 1024;
    unsigned width = 10;
    bool width_given = false;
    std::string strategy = "apc";
};

void cmd_mul(const MulOpts& o, std::ostream& out) {
    const Loaded cfg = load(o.common.config);
    MulConfig mc = MulConfig::from(cfg.sim, o.width, o.nbit);
    mc.strategy = strategy_of(o.strategy);
    const Operand x = parse_operand(o.x, o.width, o.width_given);
    const Operand y = parse_operand(o.y, o.width, o.width_given);
    RngStream rng(o.common.seed);
    const MulResult r = sc_multiply(x, y, mc, rng);
    const double expected = expected_probability(x, mc.lut, mc.dtc, mc.device, mc.drive_current) *
                            expected_probability(y, mc.lut, mc.dtc, mc.device, mc.drive_current);

    const RunMetadata meta{"mul", o.common.seed, cfg.hash};
    Sink sink(out, o.common.out);
    auto& os = sink.stream();
    const auto n = format_number;
    if (o.common.format == "json") {
        emit_json(os,
                  {{"x", x.value()},
                   {"y", y.value()},
                   {"width", o.width},
                   {"nbit", r.nbit},
                   {"strategy", o.strategy},
                   {"count", r.count},
                   {"estimate", r.estimate},
                   {"expected_product", expected},
                   {"exact_product", x.value() * y.value()},
                   {"cycles", r.cycles},
                   {"energy_pj", r.energy_pj}},
                  meta);
    } else {
        write_metadata_line(os, meta);
        os << "x,y,width,nbit,strategy,count,estimate,expected_product,exact_product,cycles,energy_pj\n"
           << n(x.value()) << ',' << n(y.value()) << ',' << o.width << ',' << r.nbit << ','
           << o.strategy << ',' << r.count << ',' << n(r.estimate) << ',' << n(expected) << ','
           << n(x.value() * y.value()) << ',' << n(r.cycles) << ',' << n(r.energy_pj) << '\n';
    }
    sink.commit();
}

struct MacOpts {
    Common common;
    std::string weights, inputs;
    std::size_t nbit = 1024;
    unsigned width = 10;
    bool width_given = false;
    std::string strategy = "apc";
};

void cmd_mac(const MacOpts& o, std::ostream& out) {
    const Loaded cfg = load(o.common.config);
    MulConfig mc = MulConfig::from(cfg.sim, o.width, o.nbit);
    mc.strategy = strategy_of(o.strategy);
    const auto ws = parse_operand_list(o.weights, o.width, o.width_given);
    const auto xs = parse_operand_list(o.inputs, o.width, o.width_given);
    RngStream rng(o.common.seed);
    const MacResult r = sc_mac(ws, xs, mc, rng);
    double exact = 0.0;
    for (std::size_t i = 0; i < ws.size() && i < xs.size(); ++i) exact += ws[i].value() * xs[i].value();

    const RunMetadata meta{"mac", o.common.seed, cfg.hash};
    Sink sink(out, o.common.out);
    auto& os = sink.stream();
    const auto n = format_number;
    if (o.common.format == "json") {
        emit_json(os,
                  {{"m", ws.size()},
                   {"nbit", r.nbit},
                   {"strategy", o.strategy},
                   {"estimate", r.estimate},
                   {"exact", exact},
                   {"counts", r.counts},
                   {"popcount_cycles_total", r.popcount_cycles_total},
                   {"popcount_cycles_per_mul", r.popcount_cycles_per_mul},
                   {"cycles_per_mul", r.cycles_per_mul.total},
                   {"energy_pj_per_mul", r.energy_pj_per_mul}},
                  meta);
    } else {
        write_metadata_line(os, meta);
        os << "m,nbit,strategy,estimate,exact,popcount_cycles_total,popcount_cycles_per_mul,"
              "cycles_per_mul,energy_pj_per_mul\n"
           << ws.size() << ',' << r.nbit << ',' << o.strategy << ',' << n(r.estimate) << ','
           << n(exact) << ',' << n(r.popcount_cycles_total) << ',' << n(r.popcount_cycles_per_mul)
           << ',' << n(r.cycles_per_mul.total) << ',' << n(r.energy_pj_per_mul) << '\n';
    }
    sink.commit();
}

struct SweepOpts {
    Common common;
    std::string kind;
    std::string range;
    std::size_t iters = 1000;
    std::size_t nbit = 1000;
    double tau_x = 0.3;
    double tau_y = 0.4;
    double sigma_ic = 0.0;
    double sigma_circuit = 0.0;
    bool fixed_chip = false;
    double x = 0.75;
    double y = 0.75;
    unsigned width = 10;
    unsigned threads = 0;
    std::string hist;
};

void cmd_sweep(const SweepOpts& o, std::ostream& out) {
    const Loaded cfg = load(o.common.config);
    const std::vector<double> values = parse_range(o.range);

    McConfig mc;
    mc.iterations = o.iters;
    mc.nbit = o.nbit;
    mc.tau_x = o.tau_x;
    mc.tau_y = o.tau_y;
    mc.device = cfg.sim.device;
    mc.drive_current = cfg.sim.drive_current();
    mc.variation.sigma_ic = o.sigma_ic;
    mc.variation.sigma_circuit = o.sigma_circuit;
    mc.seed = o.common.seed;
    mc.ic_sampling = o.fixed_chip ? IcSampling::FixedChip : IcSampling::PerIteration;
    mc.row_length = cfg.sim.row_length;
    mc.threads = o.threads;

    std::vector<SweepPoint> points;
    std::vector<CircuitPoint> circuit;
    if (o.kind == "nbit") {
        std::vector<std::size_t> nbits;
        for (double v : values) {
            if (v < 0 || v != std::floor(v))
                throw UsageError("nbit values must be whole numbers, got " + format_number(v));
            nbits.push_back(static_cast<std::size_t>(v));
        }
        points = sweep_nbit(mc, nbits);
    } else if (o.kind == "tauy") {
        points = sweep_tau_y(mc, values);
    } else if (o.kind == "ic") {
        points = sweep_ic_variance(mc, values);
    } else {
        const LogLut lut =
            build_lut(o.width, std::max(cfg.sim.lut_out_bits, o.width), cfg.sim.tau_scale_ns);
        const Operand x = Operand::from_fraction(o.x, o.width);
        const Operand y = Operand::from_fraction(o.y, o.width);
        circuit = sweep_circuit_variance(mc, values, x, y, lut, cfg.sim.dtc);
        for (const auto& c : circuit) points.push_back(c.scpim);
    }

    const RunMetadata meta{"sweep-" + o.kind, o.common.seed, cfg.hash};
    Sink sink(out, o.common.out);
    auto& os = sink.stream();
    if (o.common.format == "json") {
        emit_json(os, o.kind == "circuit" ? circuit_json(circuit) : sweep_json(o.kind, points), meta);
    } else {
        write_metadata_line(os, meta);
        if (o.kind == "circuit") write_circuit_csv(os, circuit);
        else write_sweep_csv(os, o.kind, points);
    }
    sink.commit();

    if (!o.hist.empty()) {
        std::ostringstream hs;
        write_metadata_line(hs, meta);
        write_histogram_csv(hs, points);
        write_file(o.hist, hs.str());
    }
}

struct PerfOpts {
    Common common;
    unsigned bits = 10;
    unsigned mac = 1;
};

void cmd_perf(const PerfOpts& o, std::ostream& out) {
    const Loaded cfg = load(o.common.config);
    const Report rep = comparison_report(cfg.sim.cost, o.bits, o.mac);
    const RunMetadata meta{"perf", o.common.seed, cfg.hash};
    Sink sink(out, o.common.out);
    auto& os = sink.stream();
    if (o.common.format == "json") {
        emit_json(os, report_json(rep), meta);
    } else {
        write_metadata_line(os, meta);
        write_report_csv(os, rep);
    }
    sink.commit();
}

struct LutOpts {
    Common common;
    unsigned width = 10;
    unsigned out_width = 0;
    double tau_scale = 0.0;
};

void cmd_lut(const LutOpts& o, std::ostream& out) {
    const Loaded cfg = load(o.common.config);
    const unsigned m = o.out_width ? o.out_width : std::max(cfg.sim.lut_out_bits, o.width);
    const double ts = o.tau_scale > 0.0 ? o.tau_scale : cfg.sim.tau_scale_ns;
    const LogLut lut = build_lut(o.width, m, ts);
    const RunMetadata meta{"lut-dump", o.common.seed, cfg.hash};
    Sink sink(out, o.common.out);
    auto& os = sink.stream();
    if (o.common.format == "json") {
        emit_json(os,
                  {{"in_width", lut.in_width},
                   {"out_width", lut.out_width},
                   {"tau_scale_ns", lut.tau_scale},
                   {"entries", lut.entries}},
                  meta);
    } else {
        write_metadata_line(os, meta);
        write_lut_csv(os, lut);
    }
    sink.commit();
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    auto fail = [&](int code, const std::string& msg) {
        std::string line = msg;
        std::replace(line.begin(), line.end(), '\n', ' ');
        err << "error: " << line << '\n';
        return code;
    };

    std::uint64_t seed = kFallbackSeed;
    try {
        seed = default_seed();
    } catch (const UsageError& e) {
        return fail(kUsage, e.what());
    }

    CLI::App app{"Stochastic-computing multiplier simulator on SOT-MRAM bit-planes", "scpim"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    MulOpts mul;
    mul.common.seed = seed;
    auto* s_mul = app.add_subcommand("mul", "one stochastic multiplication");
    s_mul->add_option("x", mul.x, "first operand, fraction in [0,1) or raw integer with --width")
        ->required();
    s_mul->add_option("y", mul.y, "second operand")->required();
    s_mul->add_option("--nbit", mul.nbit, "stochastic bits per MUL");
    auto* mul_width = s_mul->add_option("--width", mul.width, "operand bits")->check(CLI::Range(1, 16));
    s_mul->add_option("--strategy", mul.strategy, "pop-count strategy")
        ->check(CLI::IsMember({"apc", "csa"}));
    add_common(s_mul, mul.common, true);

    MacOpts mac;
    mac.common.seed = seed;
    auto* s_mac = app.add_subcommand("mac", "multiply-and-accumulate over operand lists");
    s_mac->add_option("--weights", mac.weights, "comma-separated weights")->required();
    s_mac->add_option("--inputs", mac.inputs, "comma-separated inputs")->required();
    s_mac->add_option("--nbit", mac.nbit, "stochastic bits per MUL");
    auto* mac_width = s_mac->add_option("--width", mac.width, "operand bits")->check(CLI::Range(1, 16));
    s_mac->add_option("--strategy", mac.strategy, "pop-count strategy")
        ->check(CLI::IsMember({"apc", "csa"}));
    add_common(s_mac, mac.common, true);

    SweepOpts sw;
    sw.common.seed = seed;
    auto* s_sw = app.add_subcommand("sweep", "Monte Carlo accuracy sweep");
    s_sw->add_option("kind", sw.kind, "nbit | tauy | ic | circuit")
        ->required()
        ->check(CLI::IsMember({"nbit", "tauy", "ic", "circuit"}));
    s_sw->add_option("range", sw.range, "a:b:step or v1,v2,...")->required();
    s_sw->add_option("--iters", sw.iters, "iterations per point");
    s_sw->add_option("--nbit", sw.nbit, "stochastic bits per MUL");
    s_sw->add_option("--tau-x", sw.tau_x, "first pulse, ns");
    s_sw->add_option("--tau-y", sw.tau_y, "second pulse, ns");
    s_sw->add_option("--sigma-ic", sw.sigma_ic, "base relative I_c spread");
    s_sw->add_option("--sigma-circuit", sw.sigma_circuit, "base relative pulse jitter");
    s_sw->add_flag("--fixed-chip", sw.fixed_chip, "sample the I_c map once, not per iteration");
    s_sw->add_option("--x", sw.x, "circuit sweep: first operand");
    s_sw->add_option("--y", sw.y, "circuit sweep: second operand");
    s_sw->add_option("--width", sw.width, "circuit sweep: operand bits")->check(CLI::Range(1, 16));
    s_sw->add_option("--threads", sw.threads, "worker threads, 0 = all cores");
    s_sw->add_option("--hist", sw.hist, "also write per-point histograms here");
    add_common(s_sw, sw.common, true);

    PerfOpts perf;
    perf.common.seed = seed;
    auto* s_perf = app.add_subcommand("perf", "cycle, energy and area comparison");
    s_perf->add_option("--bits", perf.bits, "operand bit length")->check(CLI::Range(4, 16));
    s_perf->add_option("--mac", perf.mac, "MAC batch size")->check(CLI::PositiveNumber);
    add_common(s_perf, perf.common, true);

    LutOpts lut;
    lut.common.seed = seed;
    auto* s_lut = app.add_subcommand("lut-dump", "print the -ln lookup table");
    s_lut->add_option("--width", lut.width, "operand bits")->check(CLI::Range(1, 16));
    s_lut->add_option("--out-width", lut.out_width, "fractional bits of each entry");
    s_lut->add_option("--tau-scale", lut.tau_scale, "ns per unit of -ln")->check(CLI::PositiveNumber);
    add_common(s_lut, lut.common, false);

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        return fail(kUsage, e.what());
    }

    try {
        if (s_mul->parsed()) {
            mul.width_given = mul_width->count() > 0;
            cmd_mul(mul, out);
        } else if (s_mac->parsed()) {
            mac.width_given = mac_width->count() > 0;
            cmd_mac(mac, out);
        } else if (s_sw->parsed()) {
            cmd_sweep(sw, out);
        } else if (s_perf->parsed()) {
            cmd_perf(perf, out);
        } else if (s_lut->parsed()) {
            cmd_lut(lut, out);
        }
    } catch (const UsageError& e) {
        return fail(kUsage, e.what());
    } catch (const ConfigError& e) {
        return fail(kConfig, e.what());
    } catch (const IoError& e) {
        return fail(kIo, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(kDomain, e.what());
    } catch (const std::out_of_range& e) {
        return fail(kDomain, e.what());
    } catch (const std::length_error& e) {
        return fail(kDomain, e.what());
    } catch (const std::logic_error& e) {
        return fail(kDomain, e.what());
    } catch (const std::exception& e) {
        return fail(1, e.what());
    }
    return kOk;
}

}  // namespace scpim::cli
