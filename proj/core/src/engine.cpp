#include "scpim/engine.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace scpim {

namespace {

constexpr std::size_t kMinNbit = 16;

unsigned modeled_bits(unsigned width) {
    return std::clamp(width, kMinModeledBits, kMaxModeledBits);
}

void check_width(const Operand& x, const MulConfig& cfg) {
    if (x.width() != cfg.lut.in_width)
        throw std::invalid_argument("operand width " + std::to_string(x.width()) +
                                    " does not match configured width " +
                                    std::to_string(cfg.lut.in_width));
}

std::size_t count_survivors(const ArrayState& array, const Region& region, const MulConfig& cfg) {
    if (cfg.strategy == PopcountStrategy::Apc) return popcount_apc(array, region).count;
    const Region one[] = {region};
    return popcount_csa_fa(array, one, cfg.cost.scpim_cycles.csa_per_mul,
                           cfg.cost.scpim_cycles.fa_per_batch)
        .counts.front();
}

MulResult make_result(std::size_t count, const MulConfig& cfg) {
    const unsigned bits = modeled_bits(cfg.lut.in_width);
    MulResult r;
    r.count = count;
    r.nbit = cfg.nbit;
    r.estimate = static_cast<double>(count) / static_cast<double>(cfg.nbit);
    r.cycles = cycles_per_mul(cfg.approach(), bits, cfg.cost);
    r.energy_pj = energy_per_mul(cfg.approach(), cfg.cost, bits).total;
    return r;
}

std::size_t rows_needed(const MulConfig& cfg, std::size_t muls) {
    const MulLayout layout = mul_layout(cfg.nbit, cfg.row_length);
    const std::size_t rows = layout.rows * muls;
    if (rows > cfg.array_rows)
        throw std::length_error("array capacity exhausted: need " + std::to_string(rows) +
                                " rows of " + std::to_string(layout.cols) + " cells, have " +
                                std::to_string(cfg.array_rows));
    return rows;
}

std::vector<Region> mul_regions(const MulConfig& cfg, std::size_t muls) {
    const MulLayout layout = mul_layout(cfg.nbit, cfg.row_length);
    std::vector<Region> regions;
    regions.reserve(muls);
    for (std::size_t i = 0; i < muls; ++i)
        regions.push_back(Region{i * layout.rows, 0, layout.rows, layout.cols});
    return regions;
}

}  // namespace

MulConfig MulConfig::from(const SimConfig& sim, unsigned width, std::size_t nbit) {
    MulConfig cfg;
    cfg.nbit = nbit;
    cfg.lut = build_lut(width, std::max(sim.lut_out_bits, width), sim.tau_scale_ns);
    cfg.dtc = sim.dtc;
    cfg.device = sim.device;
    cfg.drive_current = sim.drive_current();
    cfg.row_length = sim.row_length;
    cfg.array_rows = sim.array_rows;
    cfg.cost = sim.cost;
    return cfg;
}

void MulConfig::validate() const {
    if (nbit < kMinNbit)
        throw std::invalid_argument("nbit must be >= 16, got " + std::to_string(nbit));
    if (row_length == 0 || array_rows == 0)
        throw std::invalid_argument("array geometry must be non-empty");
    device.validate();
    dtc.validate();
    variation.validate();
    PulseSpec{drive_current, 0.0}.validate();
}

MulLayout mul_layout(std::size_t nbit, std::size_t row_length) {
    if (nbit == 0 || row_length == 0) throw std::invalid_argument("empty MUL layout");
    std::size_t cols = std::min(nbit, row_length);
    while (nbit % cols != 0) --cols;
    return MulLayout{nbit / cols, cols};
}

std::size_t sc_multiply_on(ArrayState& array, const Region& region, const PulseSpec& px,
                           const PulseSpec& py, const MulConfig& cfg, RngStream& rng) {
    array.preset(region);
    array.apply_pulse(region, px, cfg.variation, rng);
    array.apply_pulse(region, py, cfg.variation, rng);
    return count_survivors(array, region, cfg);
}

MulResult sc_multiply_pulses(const PulseSpec& px, const PulseSpec& py, const MulConfig& cfg,
                             RngStream& rng) {
    cfg.validate();
    rows_needed(cfg, 1);
    const MulLayout layout = mul_layout(cfg.nbit, cfg.row_length);
    ArrayState array(layout.rows, layout.cols, cfg.device, cfg.variation, rng);
    return make_result(sc_multiply_on(array, array.full(), px, py, cfg, rng), cfg);
}

MulResult sc_multiply(const Operand& x, const Operand& y, const MulConfig& cfg, RngStream& rng) {
    check_width(x, cfg);
    check_width(y, cfg);
    return sc_multiply_pulses(operand_to_pulse(x, cfg.lut, cfg.dtc, cfg.drive_current),
                              operand_to_pulse(y, cfg.lut, cfg.dtc, cfg.drive_current), cfg, rng);
}

MacResult sc_mac(std::span<const Operand> ws, std::span<const Operand> xs, const MulConfig& cfg,
                 RngStream& rng) {
    if (ws.empty() || xs.empty()) throw std::invalid_argument("sc_mac: empty operand list");
    if (ws.size() != xs.size())
        throw std::invalid_argument("sc_mac: " + std::to_string(ws.size()) + " weights vs " +
                                    std::to_string(xs.size()) + " inputs");
    cfg.validate();
    for (const auto& w : ws) check_width(w, cfg);
    for (const auto& x : xs) check_width(x, cfg);

    const std::size_t m = ws.size();
    const std::size_t rows = rows_needed(cfg, m);
    const auto regions = mul_regions(cfg, m);
    ArrayState array(rows, regions.front().cols, cfg.device, cfg.variation, rng);
    array.preset();
    for (std::size_t i = 0; i < m; ++i) {
        RngStream mul_rng = rng.split();
        array.apply_pulse(regions[i], operand_to_pulse(ws[i], cfg.lut, cfg.dtc, cfg.drive_current),
                          cfg.variation, mul_rng);
        array.apply_pulse(regions[i], operand_to_pulse(xs[i], cfg.lut, cfg.dtc, cfg.drive_current),
                          cfg.variation, mul_rng);
    }

    MacResult out;
    out.nbit = cfg.nbit;
    if (cfg.strategy == PopcountStrategy::Apc) {
        for (const auto& region : regions) {
            const ApcResult r = popcount_apc(array, region);
            out.counts.push_back(r.count);
            out.popcount_cycles_total += r.cycles;
        }
        out.popcount_cycles_per_mul = out.popcount_cycles_total / static_cast<double>(m);
    } else {
        CsaFaResult r = popcount_csa_fa(array, regions, cfg.cost.scpim_cycles.csa_per_mul,
                                        cfg.cost.scpim_cycles.fa_per_batch);
        out.counts = std::move(r.counts);
        out.popcount_cycles_total = r.csa_cycles + r.fa_cycles;
        out.popcount_cycles_per_mul = r.per_mul_cycles;
    }
    for (std::size_t c : out.counts)
        out.estimate += static_cast<double>(c) / static_cast<double>(cfg.nbit);

    const unsigned bits = modeled_bits(cfg.lut.in_width);
    const auto batch = static_cast<unsigned>(m);
    out.cycles_per_mul = cycle_breakdown(cfg.approach(), bits, cfg.cost, batch);
    out.energy_pj_per_mul = energy_per_mul(cfg.approach(), cfg.cost, bits, batch).total;
    return out;
}

PreconvertedWeights preconvert_weights(std::span<const Operand> ws, const MulConfig& cfg,
                                       RngStream& rng) {
    if (ws.empty()) throw std::invalid_argument("preconvert_weights: empty weight list");
    cfg.validate();
    for (const auto& w : ws) check_width(w, cfg);

    const std::size_t rows = rows_needed(cfg, ws.size());
    auto regions = mul_regions(cfg, ws.size());
    PreconvertedWeights out{ArrayState(rows, regions.front().cols, cfg.device, cfg.variation, rng),
                            std::move(regions), std::vector<bool>(ws.size(), false),
                            cfg.lut.in_width};
    out.array.preset();
    for (std::size_t i = 0; i < ws.size(); ++i) {
        RngStream w_rng = rng.split();
        out.array.apply_pulse(out.regions[i],
                              operand_to_pulse(ws[i], cfg.lut, cfg.dtc, cfg.drive_current),
                              cfg.variation, w_rng);
    }
    return out;
}

MulResult multiply_with_preconverted(PreconvertedWeights& weights, std::size_t index,
                                     const Operand& x, const MulConfig& cfg, RngStream& rng) {
    if (index >= weights.regions.size())
        throw std::out_of_range("no preconverted weight at index " + std::to_string(index));
    if (weights.consumed[index])
        throw std::logic_error("preconverted weight " + std::to_string(index) + " already consumed");
    check_width(x, cfg);

    const Region& region = weights.regions[index];
    weights.array.apply_pulse(region, operand_to_pulse(x, cfg.lut, cfg.dtc, cfg.drive_current),
                              cfg.variation, rng);
    weights.consumed[index] = true;

    MulResult r = make_result(count_survivors(weights.array, region, cfg), cfg);
    // The stored plane already paid for preset and the weight pulse.
    r.cycles -= cfg.cost.scpim_cycles.preset + cfg.cost.scpim_cycles.write_pulse;
    r.energy_pj -= cfg.cost.scpim_energy.preset + cfg.cost.scpim_energy.write_pulse;
    return r;
}

}  // namespace scpim
