#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "lanwave/channel.hpp"
#include "lanwave/demod.hpp"
#include "lanwave/framing.hpp"
#include "lanwave/linecode.hpp"
#include "lanwave/tx.hpp"

namespace testutil {

// Independent table-driven CRC-8 reference. The library computes bit by bit;
// this one goes through a generated lookup table, so the two only agree if
// both are right.
inline std::uint8_t reflect8(std::uint8_t b)
{
    std::uint8_t r = 0;
    for (int i = 0; i < 8; ++i) {
        if (b & (1u << i)) {
            r |= static_cast<std::uint8_t>(1u << (7 - i));
        }
    }
    return r;
}

inline std::uint8_t reference_crc8(std::span<const std::uint8_t> data,
                                   const lanwave::framing::CrcParams& p)
{
    std::uint8_t table[256];
    for (int i = 0; i < 256; ++i) {
        std::uint8_t c = static_cast<std::uint8_t>(i);
        for (int b = 0; b < 8; ++b) {
            c = (c & 0x80) ? static_cast<std::uint8_t>((c << 1) ^ p.poly)
                           : static_cast<std::uint8_t>(c << 1);
        }
        table[i] = c;
    }
    std::uint8_t crc = p.init;
    for (std::uint8_t byte : data) {
        const std::uint8_t d = p.reflect_in ? reflect8(byte) : byte;
        crc = table[crc ^ d];
    }
    if (p.reflect_out) {
        crc = reflect8(crc);
    }
    return crc ^ p.xor_out;
}

inline std::vector<std::uint8_t> random_bytes(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_int_distribution<int> dist(0, 255);
    std::vector<std::uint8_t> out(n);
    for (auto& b : out) {
        b = static_cast<std::uint8_t>(dist(rng));
    }
    return out;
}

inline std::vector<lanwave::framing::Frame> random_frames(std::mt19937_64& rng, std::size_t n)
{
    std::vector<lanwave::framing::Frame> frames;
    frames.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto payload = random_bytes(rng, lanwave::framing::kPayloadBytes);
        frames.push_back(lanwave::framing::build_frame(payload));
    }
    return frames;
}

// Compressed channel settings shared by the pipeline tests: 24 kS/s, window
// 60 (Welch segment 24, 1 kHz bins), tone dead on bin 10.
struct PipelineConfig {
    double sample_rate = 24000.0;
    std::size_t window_size = 60;
    double carrier_offset_hz = 10e3;
    double rate_bps = 10.0;  // 40 windows per bit

    double bit_time_s() const { return 1.0 / rate_bps; }
    double chip_s() const { return bit_time_s() / 2.0; }
    std::size_t windows_per_bit() const
    {
        return static_cast<std::size_t>(bit_time_s() * sample_rate) / window_size;
    }
};

struct PipelineRun {
    std::vector<lanwave::framing::Frame> frames;
    std::vector<std::uint8_t> bits;
    lanwave::tx::TxReport report;
    lanwave::IqBuffer buffer;
    lanwave::channel::ChannelParams params;
    lanwave::demod::DemodConfig demod_cfg;
};

// frames -> bits -> chips -> recorded udp transmission -> synthesized capture
inline PipelineRun run_pipeline(const PipelineConfig& cfg,
                                std::span<const lanwave::framing::Frame> frames, double snr_db,
                                std::uint64_t seed)
{
    namespace lw = lanwave;
    PipelineRun run;
    run.frames.assign(frames.begin(), frames.end());
    for (const auto& frame : frames) {
        const auto bits = frame.to_bits();
        run.bits.insert(run.bits.end(), bits.begin(), bits.end());
    }
    const auto chips = lw::linecode::manchester_encode(run.bits, cfg.chip_s());

    lw::SimulatedClock clock;
    lw::tx::RecordingSink sink(clock);
    lw::tx::UdpBurstConfig tx_cfg;
    run.report = lw::tx::modulate_udp(chips, tx_cfg, clock, sink);

    run.params = lw::channel::device_preset("pc");
    const double absolute = run.params.absolute_carrier_hz();
    run.params.carrier_offset_hz = cfg.carrier_offset_hz;
    run.params.center_frequency_hz = absolute - cfg.carrier_offset_hz;
    run.params.sample_rate = cfg.sample_rate;
    run.params.analysis_window = cfg.window_size;
    run.params.snr_db = snr_db;
    run.params.seed = seed;
    run.params.harmonics.clear();

    const auto intervals = lw::channel::emission_intervals(run.report);
    const double duration = run.report.t_end - run.report.t_begin +
                            2.0 * static_cast<double>(cfg.window_size) / cfg.sample_rate;
    run.buffer = lw::channel::synthesize(intervals, duration, run.params);

    run.demod_cfg.target_freq_hz = run.params.absolute_carrier_hz();
    run.demod_cfg.center_frequency_hz = run.params.center_frequency_hz;
    run.demod_cfg.sample_rate = cfg.sample_rate;
    run.demod_cfg.bit_time_s = cfg.bit_time_s();
    run.demod_cfg.window_size = cfg.window_size;
    return run;
}

}  // namespace testutil
