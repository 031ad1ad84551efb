#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lanwave/channel.hpp"
#include "lanwave/demod.hpp"

namespace lanwave::harness {

inline constexpr const char* kToolVersion = "0.1.0";

// One seeded BER/FER measurement campaign over a rate x SNR grid. Distance is
// not reproducible at desk scale; the SNR axis stands in for it, anchored to
// the measured SNR-at-distance figures of the physical experiments.
struct ExperimentSpec {
    std::string preset = "pc";
    std::string method = "udp";  // udp | toggle
    std::vector<double> bit_rates_bps;
    std::vector<double> snr_points_db;
    std::size_t bits_per_point = 1000;
    std::uint64_t seed = 1;

    // Simulated time is compressed by running the channel at a reduced sample
    // rate; detection statistics depend only on windows-per-bit and SNR.
    double sample_rate = 24000.0;
    std::size_t window_size = 60;
    double carrier_offset_hz = 10e3;
    double packets_per_second = 100.0;

    std::string toggle_transition = "0-100";  // toggle method profile row

    void validate() const;  // throws on infeasible rates or bad grid
};

struct CellResult {
    double rate_bps = 0.0;
    double snr_db = 0.0;
    std::uint64_t bits = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t frames = 0;
    std::uint64_t frame_errors = 0;
    std::uint64_t seed = 0;

    double ber() const { return bits ? static_cast<double>(bit_errors) / static_cast<double>(bits) : 0.0; }
    double fer() const { return frames ? static_cast<double>(frame_errors) / static_cast<double>(frames) : 0.0; }
};

struct BerReport {
    ExperimentSpec spec;
    std::vector<CellResult> cells;  // rate-major grid
    std::string tool_version = kToolVersion;

    const CellResult& cell(std::size_t rate_idx, std::size_t snr_idx) const;
};

// Deterministic per-cell seed derived from the master seed and grid position.
std::uint64_t point_seed(std::uint64_t master, std::size_t rate_idx, std::size_t snr_idx);

// Transmits random frames through the recording transmitter, synthesizes the
// channel at the given SNR and measures both sides of the receiver:
//  - bits/bit_errors: Manchester decisions at the known bit positions, so the
//    figure stays defined even when synchronization is lost entirely;
//  - frames/frame_errors: the full receiver path (enable detection, CRC),
//    emitted frames matched to transmitted ones by preamble position.
CellResult run_point(const ExperimentSpec& spec, double rate_bps, double snr_db,
                     std::uint64_t seed);

BerReport run_experiment(const ExperimentSpec& spec);

std::string render_text(const BerReport& report);
std::string render_csv(const BerReport& report);
BerReport parse_csv(std::istream& in);

}  // namespace lanwave::harness
