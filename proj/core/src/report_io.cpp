#include "scpim/report_io.hpp"

#include <cstdio>
#include <ostream>

namespace scpim {

namespace {

std::string_view sampling_name(IcSampling s) {
    return s == IcSampling::FixedChip ? "fixed_chip" : "per_iteration";
}

void write_point(std::ostream& os, std::string_view kind, const SweepPoint& pt,
                 const BaselineStats* baseline) {
    const McConfig& c = pt.config;
    const McReport& r = pt.report;
    const auto n = format_number;
    os << kind << ',' << n(pt.param) << ',' << c.nbit << ',' << n(c.tau_x) << ',' << n(c.tau_y)
       << ',' << n(c.variation.sigma_ic) << ',' << n(c.variation.sigma_circuit) << ','
       << sampling_name(c.ic_sampling) << ',' << c.iterations << ',' << n(r.expected_product)
       << ',' << n(r.mean) << ',' << n(r.sample_std) << ',' << n(r.uncertainty()) << ','
       << n(r.binomial_sigma) << ',';
    if (r.fit) os << n(r.fit->mu) << ',' << n(r.fit->sigma);
    else os << ',';
    os << ',' << n(r.mean) << ',' << n(r.mean_relative_error) << ',';
    if (baseline) os << n(baseline->sample_std) << ',' << n(baseline->mean_error);
    else os << ',';
    os << '\n';
}

nlohmann::json point_json(const SweepPoint& pt) {
    const McConfig& c = pt.config;
    const McReport& r = pt.report;
    nlohmann::json j = {
        {"param", pt.param},
        {"nbit", c.nbit},
        {"tau_x_ns", c.tau_x},
        {"tau_y_ns", c.tau_y},
        {"sigma_ic", c.variation.sigma_ic},
        {"sigma_circuit", c.variation.sigma_circuit},
        {"ic_sampling", sampling_name(c.ic_sampling)},
        {"iterations", c.iterations},
        {"expected_product", r.expected_product},
        {"mean", r.mean},
        {"sigma", r.sample_std},
        {"uncertainty_2sigma", r.uncertainty()},
        {"sigma_binomial", r.binomial_sigma},
        {"bias", r.mean},
        {"mean_relative_error", r.mean_relative_error},
    };
    j["fit_mu"] = r.fit ? nlohmann::json(r.fit->mu) : nlohmann::json();
    j["fit_sigma"] = r.fit ? nlohmann::json(r.fit->sigma) : nlohmann::json();
    return j;
}

nlohmann::json breakdown_json(const Breakdown& b) {
    nlohmann::json parts = nlohmann::json::object();
    for (const auto& [k, v] : b.parts) parts[k] = v;
    return {{"total", b.total}, {"breakdown", parts}};
}

}  // namespace

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v == 0.0 ? 0.0 : v);
    return buf;
}

void write_metadata_line(std::ostream& os, const RunMetadata& meta) {
    os << "# tool=" << kToolName << " version=" << kToolVersion << " command=" << meta.command;
    if (meta.seed) os << " seed=" << *meta.seed;
    os << " config_hash=" << meta.config_hash << '\n';
}

nlohmann::json metadata_json(const RunMetadata& meta) {
    nlohmann::json j = {{"tool", kToolName},
                        {"version", kToolVersion},
                        {"command", meta.command},
                        {"config_hash", meta.config_hash}};
    j["seed"] = meta.seed ? nlohmann::json(*meta.seed) : nlohmann::json();
    return j;
}

void write_sweep_csv(std::ostream& os, std::string_view kind, std::span<const SweepPoint> points) {
    os << kSweepColumns << '\n';
    for (const auto& pt : points) write_point(os, kind, pt, nullptr);
}

void write_circuit_csv(std::ostream& os, std::span<const CircuitPoint> points) {
    os << kSweepColumns << '\n';
    for (const auto& pt : points) write_point(os, "circuit", pt.scpim, &pt.baseline);
}

nlohmann::json sweep_json(std::string_view kind, std::span<const SweepPoint> points) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& pt : points) rows.push_back(point_json(pt));
    return {{"kind", kind}, {"rows", rows}};
}

nlohmann::json circuit_json(std::span<const CircuitPoint> points) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& pt : points) {
        auto j = point_json(pt.scpim);
        j["baseline_sigma"] = pt.baseline.sample_std;
        j["baseline_bias"] = pt.baseline.mean_error;
        rows.push_back(std::move(j));
    }
    return {{"kind", "circuit"}, {"rows", rows}};
}

void write_histogram_csv(std::ostream& os, std::span<const SweepPoint> points) {
    os << "param,bin_center,count\n";
    for (const auto& pt : points) {
        const Histogram& h = pt.report.histogram;
        for (std::size_t i = 0; i < h.bins(); ++i)
            os << format_number(pt.param) << ',' << format_number(h.center(i)) << ',' << h.counts[i]
               << '\n';
    }
}

void write_report_csv(std::ostream& os, const Report& report) {
    os << "approach,metric,component,value\n";
    for (const auto& a : report.approaches) {
        const auto name = to_string(a.approach);
        auto emit = [&](std::string_view metric, const Breakdown& b) {
            for (const auto& [k, v] : b.parts)
                os << name << ',' << metric << ',' << k << ',' << format_number(v) << '\n';
            os << name << ',' << metric << ",total," << format_number(b.total) << '\n';
        };
        emit("cycles", a.cycles);
        emit("energy_pj", a.energy);
        emit("area_um2", a.area);
    }
    for (const auto& [k, v] : report.ratios) os << "ratio," << k << ",," << format_number(v) << '\n';
}

nlohmann::json report_json(const Report& report) {
    nlohmann::json approaches = nlohmann::json::object();
    for (const auto& a : report.approaches) {
        approaches[std::string(to_string(a.approach))] = {{"cycles", breakdown_json(a.cycles)},
                                                          {"energy_pj", breakdown_json(a.energy)},
                                                          {"area_um2", breakdown_json(a.area)}};
    }
    nlohmann::json ratios = nlohmann::json::object();
    for (const auto& [k, v] : report.ratios) ratios[k] = v;
    return {{"bit_length", report.bit_length},
            {"mac_batch", report.mac_batch},
            {"approaches", approaches},
            {"ratios", ratios}};
}

}  // namespace scpim
