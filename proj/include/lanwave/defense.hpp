#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lanwave/clock.hpp"
#include "lanwave/trace.hpp"
#include "lanwave/tx.hpp"

namespace lanwave::defense {

class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Alert {
    enum class Kind { link_toggling, ook_traffic };

    Kind kind = Kind::link_toggling;
    double t_begin = 0.0;
    double t_end = 0.0;
    double score = 0.0;
    double peak_hz = 0.0;  // ook alerts: dominant periodicity
    std::string evidence;
};

const char* to_string(Alert::Kind kind);

struct LinkDetectorConfig {
    double window_s = 60.0;
    std::size_t max_changes = 5;  // changes beyond this within a window alert
};

// Flags bursts of link state changes. A single up or down (boot, cable plug)
// never alerts; a modulated link does within one window. Overlapping
// violations collapse into one alert per episode.
// Throws std::invalid_argument on unsorted input.
std::vector<Alert> detect_link_toggling(std::span<const LinkEvent> events,
                                        const LinkDetectorConfig& cfg = {});

struct OokDetectorConfig {
    double bin_s = 0.01;
    double min_score = 10.0;     // spectral peak over median, smoothed
    double f_lo_hz = 0.5;        // plausible chip-rate range
    double f_hi_hz = 50.0;
    double smooth_hz = 0.25;
    double min_gap_cv = 0.5;     // uniform-gap bulk transfers are not on-off keyed
};

// Bins bytes-per-interval into a time series and looks for a dominant
// periodic on-off component in the chip-rate range. Bursty inter-arrival
// spacing (coefficient of variation of the gaps) gates the spectral score so
// constant-rate bulk transfers stay quiet.
// Throws InsufficientDataError when the trace spans fewer than 16 bins.
std::vector<Alert> detect_ook_traffic(std::span<const PacketRecord> trace,
                                      const OokDetectorConfig& cfg = {});

struct JamProfile {
    double min_gap_s = 0.001;
    double max_gap_s = 0.05;
    std::size_t min_size = 64;
    std::size_t max_size = 1480;
};

struct JamResult {
    std::vector<PacketRecord> trace;
    bool aborted = false;
};

// Emits UDP datagrams at random times and in random volumes within the
// profile bounds. Deterministic given the seed.
JamResult jam(double duration_s, const JamProfile& profile, Clock& clock, tx::PacketSink& sink,
              std::uint64_t seed);

}  // namespace lanwave::defense
