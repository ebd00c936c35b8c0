#include "scpim/perfmodel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scpim {

namespace {

void nonneg(double v, const char* name) {
    if (!(std::isfinite(v) && v >= 0.0))
        throw std::invalid_argument(std::string("CostModel: ") + name + " must be >= 0");
}

void check_inputs(unsigned bit_length, unsigned mac_batch) {
    if (bit_length < kMinModeledBits || bit_length > kMaxModeledBits)
        throw std::invalid_argument("bit length " + std::to_string(bit_length) +
                                    " outside modeled range [4, 16]");
    if (mac_batch < 1) throw std::invalid_argument("MAC batch size must be >= 1");
}

}  // namespace

std::string_view to_string(Approach a) noexcept {
    switch (a) {
        case Approach::ScPimApc: return "scpim_apc";
        case Approach::ScPimCsa: return "scpim_csa";
        case Approach::ConventionalSc: return "sc";
        case Approach::PimOnly: return "pim";
    }
    return "unknown";
}

void CostModel::validate() const {
    const auto& c = scpim_cycles;
    nonneg(c.preset, "cycles.scpim.preset");
    nonneg(c.lut, "cycles.scpim.lut");
    nonneg(c.write_pulse, "cycles.scpim.write_pulse");
    nonneg(c.apc, "cycles.scpim.apc");
    nonneg(c.csa_per_mul, "cycles.scpim.csa_per_mul");
    nonneg(c.fa_per_batch, "cycles.scpim.fa_per_batch");
    if (!(c.pipeline_overlap >= 0.0 && c.pipeline_overlap <= 1.0))
        throw std::invalid_argument("CostModel: cycles.scpim.pipeline_overlap must be in [0, 1]");

    nonneg(sc_cycles.setup, "cycles.sc.setup");
    nonneg(sc_cycles.apc, "cycles.sc.apc");
    nonneg(sc_cycles.sng_per_bit, "cycles.sc.sng_per_bit");

    if (pim_cycles.table.empty()) throw std::invalid_argument("CostModel: cycles.pim.table is empty");
    double prev = 0.0;
    for (const auto& [bits, cyc] : pim_cycles.table) {
        nonneg(cyc, "cycles.pim.table entry");
        if (cyc < prev)
            throw std::invalid_argument("CostModel: cycles.pim.table must be non-decreasing");
        prev = cyc;
    }
    if (!(std::isfinite(pim_cycles.growth_per_bit) && pim_cycles.growth_per_bit >= 1.0))
        throw std::invalid_argument("CostModel: cycles.pim.growth_per_bit must be >= 1");

    const auto& e = scpim_energy;
    for (double v : {e.preset, e.write_pulse, e.apc, e.csa_per_mul, e.fa_per_batch, e.buffering})
        nonneg(v, "energy.scpim");
    for (double v : {sc_energy.sng, sc_energy.apc, sc_energy.buffering}) nonneg(v, "energy.sc");
    nonneg(pim_energy.per_cycle, "energy.pim.per_cycle");

    const auto& a = scpim_area;
    for (double v : {a.dtc_width, a.dtc_height, a.apc, a.csa_fa_periphery, a.lut_bit, a.mram_cell})
        nonneg(v, "area.scpim");
    for (double v : {sc_area.sng_per_bit, sc_area.apc, sc_area.other}) nonneg(v, "area.sc");
    for (double v : {pim_area.logic_periphery, pim_area.mram_cell}) nonneg(v, "area.pim");
}

void Breakdown::add(std::string name, double value) {
    parts.emplace_back(std::move(name), value);
    total += value;
}

double Breakdown::get(std::string_view name) const {
    for (const auto& [k, v] : parts)
        if (k == name) return v;
    throw std::out_of_range("no breakdown component '" + std::string(name) + "'");
}

double pim_cycles(unsigned bit_length, const PimCycles& pim) {
    const auto& t = pim.table;
    if (t.empty()) throw std::invalid_argument("PIM cycle table is empty");
    const auto lo = t.begin();
    const auto hi = std::prev(t.end());
    if (bit_length <= lo->first)
        return lo->second / std::pow(pim.growth_per_bit, lo->first - bit_length);
    if (bit_length >= hi->first)
        return hi->second * std::pow(pim.growth_per_bit, bit_length - hi->first);

    const auto upper = t.lower_bound(bit_length);
    if (upper->first == bit_length) return upper->second;
    const auto lower = std::prev(upper);
    const double frac = static_cast<double>(bit_length - lower->first) /
                        static_cast<double>(upper->first - lower->first);
    if (lower->second <= 0.0) return lower->second + frac * (upper->second - lower->second);
    return lower->second * std::pow(upper->second / lower->second, frac);
}

Breakdown cycle_breakdown(Approach approach, unsigned bit_length, const CostModel& model,
                          unsigned mac_batch) {
    check_inputs(bit_length, mac_batch);
    Breakdown b;
    const auto& c = model.scpim_cycles;
    switch (approach) {
        case Approach::ScPimApc:
        case Approach::ScPimCsa:
            b.add("preset", c.preset);
            b.add("lut", c.lut);
            b.add("write_pulses", 2.0 * c.write_pulse);
            if (approach == Approach::ScPimApc) {
                b.add("popcount", c.apc);
            } else {
                b.add("popcount", c.csa_per_mul + c.fa_per_batch / mac_batch);
            }
            b.add("pipeline_credit", -c.pipeline_overlap * std::min(c.lut, c.write_pulse));
            break;
        case Approach::ConventionalSc:
            b.add("setup", model.sc_cycles.setup);
            b.add("sng", std::ldexp(1.0, static_cast<int>(bit_length)) *
                             model.sc_cycles.sng_per_bit);
            b.add("popcount", model.sc_cycles.apc);
            break;
        case Approach::PimOnly:
            b.add("logic_ops", pim_cycles(bit_length, model.pim_cycles));
            break;
    }
    return b;
}

double cycles_per_mul(Approach approach, unsigned bit_length, const CostModel& model,
                      unsigned mac_batch) {
    return cycle_breakdown(approach, bit_length, model, mac_batch).total;
}

Breakdown energy_per_mul(Approach approach, const CostModel& model, unsigned bit_length,
                         unsigned mac_batch) {
    check_inputs(bit_length, mac_batch);
    Breakdown b;
    const auto& e = model.scpim_energy;
    switch (approach) {
        case Approach::ScPimApc:
        case Approach::ScPimCsa:
            b.add("initialization", e.preset);
            b.add("sc_pulses", 2.0 * e.write_pulse);
            b.add("popcount", approach == Approach::ScPimApc
                                  ? e.apc
                                  : e.csa_per_mul + e.fa_per_batch / mac_batch);
            b.add("buffering", e.buffering);
            break;
        case Approach::ConventionalSc:
            b.add("initialization", 0.0);
            b.add("sc_pulses", model.sc_energy.sng);
            b.add("popcount", model.sc_energy.apc);
            b.add("buffering", model.sc_energy.buffering);
            break;
        case Approach::PimOnly:
            b.add("logic_ops", model.pim_energy.per_cycle * pim_cycles(bit_length, model.pim_cycles));
            break;
    }
    return b;
}

Breakdown area(Approach approach, const CostModel& model, unsigned bit_length) {
    check_inputs(bit_length, 1);
    const double stochastic_bits = std::ldexp(1.0, static_cast<int>(bit_length));
    Breakdown b;
    const auto& a = model.scpim_area;
    switch (approach) {
        case Approach::ScPimApc:
        case Approach::ScPimCsa:
            b.add("dtc", a.dtc_width * a.dtc_height);
            if (approach == Approach::ScPimApc) b.add("apc", a.apc);
            else b.add("csa_fa", a.csa_fa_periphery);
            b.add("lut", stochastic_bits * a.lut_out_bits * a.lut_bit);
            b.add("mram_array", stochastic_bits * a.mram_cell);
            break;
        case Approach::ConventionalSc:
            b.add("sng", model.sc_area.sng_per_bit * bit_length);
            b.add("apc", model.sc_area.apc);
            b.add("other", model.sc_area.other);
            break;
        case Approach::PimOnly:
            b.add("logic_periphery", model.pim_area.logic_periphery);
            b.add("mram_array", 2.0 * bit_length * model.pim_area.mram_cell);
            break;
    }
    return b;
}

const ApproachReport& Report::at(Approach a) const {
    for (const auto& r : approaches)
        if (r.approach == a) return r;
    throw std::out_of_range("approach missing from report");
}

double Report::ratio(std::string_view name) const {
    for (const auto& [k, v] : ratios)
        if (k == name) return v;
    throw std::out_of_range("no ratio '" + std::string(name) + "'");
}

Report comparison_report(const CostModel& model, unsigned bit_length, unsigned mac_batch) {
    model.validate();
    Report r;
    r.bit_length = bit_length;
    r.mac_batch = mac_batch;
    for (Approach a : kAllApproaches) {
        r.approaches.push_back({a, cycle_breakdown(a, bit_length, model, mac_batch),
                                energy_per_mul(a, model, bit_length, mac_batch),
                                area(a, model, bit_length)});
    }
    auto ratio = [](double num, double den) { return den == 0.0 ? 0.0 : num / den; };
    const auto& apc = r.at(Approach::ScPimApc);
    const auto& csa = r.at(Approach::ScPimCsa);
    const auto& sc = r.at(Approach::ConventionalSc);
    const auto& pim = r.at(Approach::PimOnly);
    r.ratios = {
        {"cycles_sc_over_scpim_apc", ratio(sc.cycles.total, apc.cycles.total)},
        {"cycles_pim_over_scpim_apc", ratio(pim.cycles.total, apc.cycles.total)},
        {"cycles_sc_over_scpim_csa", ratio(sc.cycles.total, csa.cycles.total)},
        {"cycles_pim_over_scpim_csa", ratio(pim.cycles.total, csa.cycles.total)},
        {"energy_scpim_apc_over_sc", ratio(apc.energy.total, sc.energy.total)},
        {"energy_sc_buffering_fraction", ratio(sc.energy.get("buffering"), sc.energy.total)},
        {"area_sc_over_scpim_apc", ratio(sc.area.total, apc.area.total)},
        {"area_sc_sng_fraction", ratio(sc.area.get("sng"), sc.area.total)},
    };
    return r;
}

}  // namespace scpim
