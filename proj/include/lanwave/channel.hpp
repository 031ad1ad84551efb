#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "lanwave/iq.hpp"
#include "lanwave/linecode.hpp"
#include "lanwave/trace.hpp"
#include "lanwave/tx.hpp"

namespace lanwave::channel {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Extra emission band at a multiple of the base carrier, in dB relative to it.
struct HarmonicBand {
    double multiple = 1.0;
    double relative_db = 0.0;  // <= 0: never stronger than the base band
};

// Device and receiver model for the simulated emanation. Distance is modeled
// solely through the SNR knob; snr_db is in-band SNR, defined as tone-bin
// power over median off-bin power at the analysis window size below.
struct ChannelParams {
    double center_frequency_hz = 249.990e6;  // tuner
    double carrier_offset_hz = 10e3;         // base tone offset in baseband
    double sample_rate = 2.4e6;
    double snr_db = std::numeric_limits<double>::infinity();  // infinity = noiseless
    std::vector<HarmonicBand> harmonics;     // bands beyond the base (multiple 1.0)
    double on_amplitude = 0.5;
    std::uint64_t seed = 1;
    std::size_t analysis_window = 2400;      // demod default window; SNR is defined here

    double absolute_carrier_hz() const { return center_frequency_hz + carrier_offset_hz; }
    void validate() const;  // throws ConfigError
};

// Presets pinning the measured base carrier per transmitter class.
// Throws std::invalid_argument for unknown names, listing the valid ones.
ChannelParams device_preset(const std::string& name);

struct Interval {
    double t0 = 0.0;
    double t1 = 0.0;
};

// Carrier-on intervals reconstructed from a transmit activity trace. For the
// udp method these are the on-chips; for the toggle method the emission
// follows the achieved link state (on from up-completion to down-completion).
std::vector<Interval> emission_intervals(const tx::TxReport& report);
std::vector<Interval> emission_intervals(const tx::TxSchedule& schedule, double t_begin = 0.0);
std::vector<Interval> emission_intervals(const linecode::ChipStream& chips, double t_begin = 0.0);

// Co-channel interference intervals from a traffic trace: each datagram holds
// the band busy for pulse_s seconds (overlaps merge).
std::vector<Interval> traffic_intervals(std::span<const PacketRecord> trace, double pulse_s);

// Synthesizes the complex baseband capture: a tone at carrier_offset_hz (plus
// any in-window harmonic bands) gated by the on-intervals, over white Gaussian
// noise scaled to the configured in-band SNR. Deterministic given the seed.
IqBuffer synthesize(const std::vector<Interval>& on_intervals, double duration_s,
                    const ChannelParams& params,
                    const std::vector<Interval>& interference = {});
IqBuffer synthesize(const tx::TxReport& report, const ChannelParams& params,
                    const std::vector<Interval>& interference = {});
IqBuffer synthesize(const linecode::ChipStream& chips, const ChannelParams& params);

// One buffer per SNR point, identical apart from the noise scale.
std::vector<IqBuffer> snr_sweep(const std::vector<Interval>& on_intervals, double duration_s,
                                const ChannelParams& base, const std::vector<double>& snrs_db);

// Measures in-band SNR the same way the knob defines it: mean tone-bin power
// across windows over the median of all other bins.
double measure_inband_snr_db(const IqBuffer& buf, const ChannelParams& params);

}  // namespace lanwave::channel
