#include "scpim/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "default_config.inc"

namespace scpim {

namespace {

// Map node with key tracking, so leftovers can be reported as unknown.
class Section {
public:
    Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
        if (node_ && !node_.IsNull() && !node_.IsMap())
            throw ConfigError("config: '" + path_ + "' must be a mapping");
    }

    bool has(const char* key) {
        known_.insert(key);
        return node_ && node_.IsMap() && node_[key];
    }

    template <class T>
    void read(const char* key, T& out) {
        if (!has(key)) return;
        try {
            out = node_[key].template as<T>();
        } catch (const YAML::Exception&) {
            throw ConfigError("config: '" + name(key) + "' has an invalid value");
        }
    }

    Section child(const char* key) {
        if (!has(key)) return Section(YAML::Node(), name(key));
        return Section(node_[key], name(key));
    }

    YAML::Node raw(const char* key) {
        has(key);
        return node_ ? node_[key] : YAML::Node();
    }

    void finish() const {
        if (!node_ || !node_.IsMap()) return;
        for (const auto& kv : node_) {
            const auto key = kv.first.as<std::string>();
            if (!known_.count(key)) throw ConfigError("config: unknown key '" + name(key) + "'");
        }
    }

private:
    std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    YAML::Node node_;
    std::string path_;
    std::set<std::string> known_;
};

void read_cycles(Section s, CostModel& m) {
    {
        auto c = s.child("scpim");
        auto& v = m.scpim_cycles;
        c.read("preset", v.preset);
        c.read("lut", v.lut);
        c.read("write_pulse", v.write_pulse);
        c.read("apc", v.apc);
        c.read("csa_per_mul", v.csa_per_mul);
        c.read("fa_per_batch", v.fa_per_batch);
        c.read("pipeline_overlap", v.pipeline_overlap);
        c.finish();
    }
    {
        auto c = s.child("sc");
        c.read("setup", m.sc_cycles.setup);
        c.read("sng_per_bit", m.sc_cycles.sng_per_bit);
        c.read("apc", m.sc_cycles.apc);
        c.finish();
    }
    {
        auto c = s.child("pim");
        if (c.has("table")) {
            const YAML::Node table = c.raw("table");
            if (!table.IsMap() || table.size() == 0)
                throw ConfigError("config: 'cycles.pim.table' must be a non-empty mapping");
            m.pim_cycles.table.clear();
            for (const auto& kv : table) {
                try {
                    m.pim_cycles.table[kv.first.as<unsigned>()] = kv.second.as<double>();
                } catch (const YAML::Exception&) {
                    throw ConfigError("config: 'cycles.pim.table' entries must be <bits>: <cycles>");
                }
            }
        }
        c.read("growth_per_bit", m.pim_cycles.growth_per_bit);
        c.finish();
    }
    s.finish();
}

void read_energy(Section s, CostModel& m) {
    {
        auto c = s.child("scpim");
        auto& v = m.scpim_energy;
        c.read("preset", v.preset);
        c.read("write_pulse", v.write_pulse);
        c.read("apc", v.apc);
        c.read("csa_per_mul", v.csa_per_mul);
        c.read("fa_per_batch", v.fa_per_batch);
        c.read("buffering", v.buffering);
        c.finish();
    }
    {
        auto c = s.child("sc");
        c.read("sng", m.sc_energy.sng);
        c.read("apc", m.sc_energy.apc);
        c.read("buffering", m.sc_energy.buffering);
        c.finish();
    }
    {
        auto c = s.child("pim");
        c.read("per_cycle", m.pim_energy.per_cycle);
        c.finish();
    }
    s.finish();
}

void read_area(Section s, CostModel& m) {
    {
        auto c = s.child("scpim");
        auto& v = m.scpim_area;
        c.read("dtc_width", v.dtc_width);
        c.read("dtc_height", v.dtc_height);
        c.read("apc", v.apc);
        c.read("csa_fa_periphery", v.csa_fa_periphery);
        c.read("lut_bit", v.lut_bit);
        c.read("mram_cell", v.mram_cell);
        c.finish();
    }
    {
        auto c = s.child("sc");
        c.read("sng_per_bit", m.sc_area.sng_per_bit);
        c.read("apc", m.sc_area.apc);
        c.read("other", m.sc_area.other);
        c.finish();
    }
    {
        auto c = s.child("pim");
        c.read("logic_periphery", m.pim_area.logic_periphery);
        c.read("mram_cell", m.pim_area.mram_cell);
        c.finish();
    }
    s.finish();
}

}  // namespace

SimConfig parse_config(std::string_view yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(yaml_text));
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config: YAML parse error: ") + e.what());
    }

    SimConfig cfg;
    Section top(root, "");
    {
        auto s = top.child("device");
        s.read("delta", cfg.device.delta);
        s.read("i_c_ua", cfg.device.i_c);
        s.finish();
    }
    {
        auto s = top.child("conversion");
        s.read("lut_out_bits", cfg.lut_out_bits);
        s.read("tau_scale_ns", cfg.tau_scale_ns);
        s.read("dtc_resolution_ns", cfg.dtc.resolution_ns);
        s.read("dtc_max_ticks", cfg.dtc.max_ticks);
        if (s.has("drive_current_ua")) {
            double v = 0.0;
            s.read("drive_current_ua", v);
            cfg.drive_current_ua = v;
        }
        s.finish();
    }
    {
        auto s = top.child("array");
        s.read("row_length", cfg.row_length);
        s.read("rows", cfg.array_rows);
        s.finish();
    }
    read_cycles(top.child("cycles"), cfg.cost);
    read_energy(top.child("energy_pj"), cfg.cost);
    read_area(top.child("area_um2"), cfg.cost);
    top.finish();

    cfg.cost.scpim_area.lut_out_bits = cfg.lut_out_bits;
    try {
        cfg.device.validate();
        cfg.dtc.validate();
        cfg.cost.validate();
        if (cfg.drive_current_ua) PulseSpec{*cfg.drive_current_ua, 0.0}.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!(cfg.tau_scale_ns > 0.0)) throw ConfigError("config: conversion.tau_scale_ns must be > 0");
    if (cfg.row_length == 0 || cfg.array_rows == 0)
        throw ConfigError("config: array dimensions must be >= 1");
    return cfg;
}

SimConfig load_config_file(const std::string& path, std::string* text_out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    if (text_out) *text_out = text;
    return parse_config(text);
}

std::string_view default_config_text() noexcept { return kDefaultConfigText; }

SimConfig default_config() { return parse_config(default_config_text()); }

std::string content_hash(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace scpim
