#include "lanwave/harness.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "lanwave/tx.hpp"

namespace lanwave::harness {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t point_seed(std::uint64_t master, std::size_t rate_idx, std::size_t snr_idx)
{
    return splitmix64(master ^ splitmix64(1000 * rate_idx + snr_idx + 1));
}

void ExperimentSpec::validate() const
{
    if (bit_rates_bps.empty() || snr_points_db.empty()) {
        throw std::invalid_argument("experiment grid must have at least one rate and one SNR");
    }
    if (bits_per_point < 1000) {
        throw std::invalid_argument("bits per point must be at least 1000");
    }
    if (method != "udp" && method != "toggle") {
        throw std::invalid_argument("method must be udp or toggle");
    }
    channel::device_preset(preset);  // throws for unknown names
    if (method == "toggle") {
        const auto profile = tx::toggle_profile(preset, toggle_transition);
        const double max_rate = tx::max_feasible_bitrate(profile);
        for (double rate : bit_rates_bps) {
            if (rate > max_rate) {
                const double limit = std::max(profile.up_latency_s, profile.down_latency_s);
                throw tx::InfeasibleRateError(
                    "rate " + std::to_string(rate) + " bit/s exceeds the feasible maximum " +
                        std::to_string(max_rate) + " bit/s (limiting transition latency " +
                        std::to_string(limit) + " s)",
                    limit);
            }
        }
    }
    for (double rate : bit_rates_bps) {
        demod::DemodConfig cfg;
        cfg.target_freq_hz = carrier_offset_hz;
        cfg.center_frequency_hz = 0.0;
        cfg.sample_rate = sample_rate;
        cfg.bit_time_s = 1.0 / rate;
        cfg.window_size = window_size;
        cfg.validate();
    }
}

const CellResult& BerReport::cell(std::size_t rate_idx, std::size_t snr_idx) const
{
    return cells.at(rate_idx * spec.snr_points_db.size() + snr_idx);
}

namespace {

channel::ChannelParams point_channel(const ExperimentSpec& spec, double snr_db)
{
    channel::ChannelParams params = channel::device_preset(spec.preset);
    const double absolute = params.absolute_carrier_hz();
    params.carrier_offset_hz = spec.carrier_offset_hz;
    params.center_frequency_hz = absolute - spec.carrier_offset_hz;
    params.sample_rate = spec.sample_rate;
    params.analysis_window = spec.window_size;
    params.snr_db = snr_db;
    params.harmonics.clear();  // other bands are out of the compressed window anyway
    params.validate();
    return params;
}

struct BatchTx {
    tx::TxReport report;
    std::vector<std::uint8_t> bits;
    std::vector<framing::Frame> frames;
};

BatchTx transmit_batch(const ExperimentSpec& spec, double rate_bps,
                       std::span<const framing::Frame> frames)
{
    BatchTx batch;
    batch.frames.assign(frames.begin(), frames.end());
    for (const auto& frame : frames) {
        const auto bits = frame.to_bits();
        batch.bits.insert(batch.bits.end(), bits.begin(), bits.end());
    }
    const double chip_s = 1.0 / (2.0 * rate_bps);
    const auto chips = linecode::manchester_encode(batch.bits, chip_s);

    SimulatedClock clock;
    if (spec.method == "toggle") {
        const auto profile = tx::toggle_profile(spec.preset, spec.toggle_transition);
        tx::SimulatedLinkController controller(profile, clock);
        batch.report = tx::modulate_toggle(chips, controller, clock, profile.on_speed_mbps);
    } else {
        tx::UdpBurstConfig cfg;
        cfg.packets_per_second = spec.packets_per_second;
        tx::RecordingSink sink(clock);
        batch.report = tx::modulate_udp(chips, cfg, clock, sink);
    }
    return batch;
}

}  // namespace

CellResult run_point(const ExperimentSpec& spec, double rate_bps, double snr_db,
                     std::uint64_t seed)
{
    CellResult cell;
    cell.rate_bps = rate_bps;
    cell.snr_db = snr_db;
    cell.seed = seed;

    const std::size_t n_frames =
        (spec.bits_per_point + framing::kFrameBits - 1) / framing::kFrameBits;

    demod::DemodConfig dc;
    dc.sample_rate = spec.sample_rate;
    dc.bit_time_s = 1.0 / rate_bps;
    dc.window_size = spec.window_size;
    const std::size_t wpb = dc.windows_per_bit();
    const std::size_t windows_per_frame = framing::kFrameBits * wpb;

    // Cap each synthesized batch at roughly 4M samples to bound memory.
    const std::size_t samples_per_frame = windows_per_frame * spec.window_size;
    const std::size_t frames_per_batch =
        std::clamp<std::size_t>(4'000'000 / std::max<std::size_t>(samples_per_frame, 1), 1,
                                n_frames);

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> byte_dist(0, 255);

    dsp::WelchPsd psd(spec.window_size);
    std::vector<double> spectrum(psd.bins());

    std::size_t done = 0;
    std::size_t batch_index = 0;
    while (done < n_frames) {
        const std::size_t nb = std::min(frames_per_batch, n_frames - done);
        std::vector<framing::Frame> frames;
        frames.reserve(nb);
        for (std::size_t f = 0; f < nb; ++f) {
            std::array<std::uint8_t, framing::kPayloadBytes> payload{};
            for (auto& byte : payload) {
                byte = static_cast<std::uint8_t>(byte_dist(rng));
            }
            frames.push_back(framing::build_frame(payload));
        }

        BatchTx batch = transmit_batch(spec, rate_bps, frames);

        channel::ChannelParams params = point_channel(spec, snr_db);
        params.seed = splitmix64(seed + 0x100 + batch_index);
        const auto intervals = channel::emission_intervals(batch.report);
        const double duration = batch.report.t_end - batch.report.t_begin +
                                2.0 * static_cast<double>(spec.window_size) / spec.sample_rate;
        const IqBuffer buf = channel::synthesize(intervals, duration, params);

        // Full receiver path for the frame statistics.
        dc.target_freq_hz = params.absolute_carrier_hz();
        dc.center_frequency_hz = params.center_frequency_hz;
        const auto rx = demod::demodulate(buf, dc);
        for (std::size_t f = 0; f < nb; ++f) {
            const auto expected = batch.frames[f].serialize();
            bool ok = false;
            for (const auto& rec : rx.records) {
                if (!(rec.preamble_ok && rec.crc_ok)) {
                    continue;
                }
                const auto mapped = static_cast<std::size_t>(std::llround(
                    static_cast<double>(rec.start_window) / static_cast<double>(windows_per_frame)));
                if (mapped == f && std::equal(expected.begin(), expected.end(), rec.bytes.begin())) {
                    ok = true;
                    break;
                }
            }
            ++cell.frames;
            if (!ok) {
                ++cell.frame_errors;
            }
        }

        // Channel bit fidelity at the known bit positions.
        const std::size_t nwin = buf.samples.size() / spec.window_size;
        std::vector<double> amps(nwin);
        for (std::size_t w = 0; w < nwin; ++w) {
            const std::span<const std::complex<float>> window(
                buf.samples.data() + w * spec.window_size, spec.window_size);
            psd.estimate(window, spectrum);
            amps[w] = spectrum[psd.bin_for(params.carrier_offset_hz, params.sample_rate)];
        }
        for (std::size_t k = 0; k < batch.bits.size(); ++k) {
            if ((k + 1) * wpb > nwin) {
                break;
            }
            const std::span<const double> bit_amps(amps.data() + k * wpb, wpb);
            const int bit = demod::samples_to_bit_manchester(bit_amps, wpb);
            ++cell.bits;
            if (bit != batch.bits[k]) {
                ++cell.bit_errors;
            }
        }

        done += nb;
        ++batch_index;
    }
    return cell;
}

BerReport run_experiment(const ExperimentSpec& spec)
{
    spec.validate();
    BerReport report;
    report.spec = spec;
    report.cells.reserve(spec.bit_rates_bps.size() * spec.snr_points_db.size());
    for (std::size_t i = 0; i < spec.bit_rates_bps.size(); ++i) {
        for (std::size_t j = 0; j < spec.snr_points_db.size(); ++j) {
            report.cells.push_back(run_point(spec, spec.bit_rates_bps[i], spec.snr_points_db[j],
                                             point_seed(spec.seed, i, j)));
        }
    }
    return report;
}

std::string render_text(const BerReport& report)
{
    if (report.cells.empty()) {
        throw std::invalid_argument("cannot render an empty report");
    }
    std::ostringstream out;
    out << "method=" << report.spec.method << " preset=" << report.spec.preset
        << " bits/point=" << report.spec.bits_per_point << " seed=" << report.spec.seed
        << " version=" << report.tool_version << "\n";
    out << "cells are BER (FER)\n";

    char buf[64];
    out << std::left;
    std::snprintf(buf, sizeof(buf), "%-12s", "rate\\snr");
    out << buf;
    for (double snr : report.spec.snr_points_db) {
        std::snprintf(buf, sizeof(buf), "%18.1f dB", snr);
        out << buf;
    }
    out << '\n';
    for (std::size_t i = 0; i < report.spec.bit_rates_bps.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%-12g", report.spec.bit_rates_bps[i]);
        out << buf;
        for (std::size_t j = 0; j < report.spec.snr_points_db.size(); ++j) {
            const auto& cell = report.cell(i, j);
            std::snprintf(buf, sizeof(buf), "%12.5f (%6.3f)", cell.ber(), cell.fer());
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

std::string render_csv(const BerReport& report)
{
    if (report.cells.empty()) {
        throw std::invalid_argument("cannot render an empty report");
    }
    std::ostringstream out;
    out << "method,rate_bps,snr_db,bits,bit_errors,ber,frames,frame_errors,fer,seed\n";
    out.precision(10);
    for (const auto& cell : report.cells) {
        out << report.spec.method << ',' << cell.rate_bps << ',' << cell.snr_db << ','
            << cell.bits << ',' << cell.bit_errors << ',' << cell.ber() << ',' << cell.frames
            << ',' << cell.frame_errors << ',' << cell.fer() << ',' << cell.seed << '\n';
    }
    return out.str();
}

BerReport parse_csv(std::istream& in)
{
    BerReport report;
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("empty csv");
    }
    if (line != "method,rate_bps,snr_db,bits,bit_errors,ber,frames,frame_errors,fer,seed") {
        throw std::runtime_error("unexpected csv header: " + line);
    }
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream ss(line);
        std::string field;
        CellResult cell;
        std::getline(ss, field, ',');
        report.spec.method = field;
        auto next = [&]() {
            if (!std::getline(ss, field, ',')) {
                throw std::runtime_error("truncated csv row: " + line);
            }
            return field;
        };
        cell.rate_bps = std::stod(next());
        cell.snr_db = std::stod(next());
        cell.bits = std::stoull(next());
        cell.bit_errors = std::stoull(next());
        const double ber = std::stod(next());
        cell.frames = std::stoull(next());
        cell.frame_errors = std::stoull(next());
        const double fer = std::stod(next());
        cell.seed = std::stoull(next());
        if (std::abs(ber - cell.ber()) > 1e-9 || std::abs(fer - cell.fer()) > 1e-9) {
            throw std::runtime_error("inconsistent derived columns in csv row: " + line);
        }
        report.cells.push_back(cell);
    }
    return report;
}

}  // namespace lanwave::harness
