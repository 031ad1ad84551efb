#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lanwave/framing.hpp"
#include "lanwave/iq.hpp"
#include "lanwave/linecode.hpp"
#include "lanwave/psd.hpp"

namespace lanwave::demod {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DemodConfig {
    double target_freq_hz = 250.000e6;   // absolute band to watch
    double center_frequency_hz = 249.990e6;  // tuner frequency of the capture
    double sample_rate = 2.4e6;
    double bit_time_s = 0.1;
    std::size_t window_size = 2400;
    double enable_threshold = 0.7;       // normalized correlation score
    int band_halfwidth_bins = 0;         // 0 = nearest bin, 1 = sum of +-1 bins

    double freq_offset_hz() const { return target_freq_hz - center_frequency_hz; }
    // bit_time * sample_rate / window_size, which must be integral and >= 4.
    std::size_t windows_per_bit() const;
    void validate() const;  // throws ConfigError

    static DemodConfig for_buffer(const IqBuffer& buf, double target_freq_hz, double bit_time_s,
                                  std::size_t window_size);
};

// PSD of one window evaluated at the bin nearest the frequency offset,
// optionally summed over +-band_halfwidth_bins neighbours.
double window_band_power(const dsp::WelchPsd& psd, std::span<const std::complex<float>> window,
                         double freq_offset_hz, double sample_rate,
                         int band_halfwidth_bins = 0);

struct EnableDetection {
    std::size_t offset = 0;  // window index where the preamble begins
    double score = 0.0;
};

// Streaming preamble detector: correlates the per-window amplitude history
// against the Manchester chip template of 10101010. The alternating pattern
// makes alignment ambiguous modulo two bits, so after the first threshold
// crossing it keeps scanning for two and a half more bits and locks on the
// earliest candidate whose score ties the maximum.
class EnableScanner {
public:
    EnableScanner(std::size_t windows_per_bit, double threshold);

    std::size_t template_windows() const { return tmpl_.size(); }

    // Evaluates candidates made complete by new amplitudes. `base` is the
    // absolute index of amps[0]; candidates below `scan_from` are skipped.
    std::optional<EnableDetection> scan(std::span<const double> amps, std::size_t base,
                                        std::size_t scan_from);
    // Resolves a pending crossing at end of data (batch use).
    std::optional<EnableDetection> flush();
    void reset();

    // Lowest absolute amplitude index the scanner may still need.
    std::size_t low_watermark() const;

private:
    double score_at(std::span<const double> amps, std::size_t pos) const;
    std::optional<EnableDetection> resolve() const;

    std::vector<double> tmpl_;  // mean-removed chip template at window granularity
    double tmpl_norm_ = 0.0;
    double threshold_;
    std::size_t wpb_;
    std::size_t next_ = 0;  // next absolute candidate offset to evaluate
    bool crossed_ = false;
    std::size_t deadline_ = 0;
    std::vector<EnableDetection> candidates_;  // since crossing
};

// Batch form over a complete amplitude trace.
std::optional<EnableDetection> detect_enable(std::span<const double> amplitudes,
                                             std::size_t windows_per_bit,
                                             double threshold = 0.7);

// Averages the first and second half of a bit's windows and compares them.
// With an odd window count the middle window belongs to neither half.
int samples_to_bit_manchester(std::span<const double> amplitudes, std::size_t windows_per_bit,
                              linecode::DecodeStats* stats = nullptr);

struct FrameRecord {
    std::size_t start_window = 0;  // absolute window index of the frame start
    double enable_score = 0.0;
    double one_level = 0.0;   // learned from the preamble on-chips
    double zero_level = 0.0;  // learned from the preamble off-chips
    double measured_snr_db = 0.0;
    std::array<std::uint8_t, framing::kFrameBytes> bytes{};
    bool preamble_ok = false;
    bool crc_ok = false;
};

struct DemodReport {
    std::vector<FrameRecord> records;
    std::vector<std::uint8_t> bits;  // every demodulated bit, in order
    std::uint64_t windows_processed = 0;
    std::uint64_t soft_ties = 0;

    std::size_t valid_frames() const;
};

// Extracts the payload-bearing frames that passed all checks.
std::vector<framing::Frame> frames_of(const DemodReport& report);

void write_report(std::ostream& out, const DemodReport& report);

// Single-consumer streaming state machine: window in, amplitude history,
// enable detection, Manchester bits, frame assembly with per-frame re-sync.
class Demodulator {
public:
    explicit Demodulator(DemodConfig cfg);

    void push_window(std::span<const std::complex<float>> window);
    DemodReport run(WindowSource& source);
    DemodReport take_report();

    const DemodConfig& config() const { return cfg_; }

private:
    enum class State { searching, locked };

    void progress();
    bool scan_step();
    bool decode_step();
    void trim_history();

    DemodConfig cfg_;
    dsp::WelchPsd psd_;
    std::vector<double> spectrum_;
    EnableScanner scanner_;
    std::size_t wpb_;

    std::vector<double> amps_;
    std::size_t base_ = 0;  // absolute index of amps_[0]
    std::size_t total_ = 0;
    std::size_t scan_from_ = 0;

    State state_ = State::searching;
    EnableDetection lock_{};
    std::size_t bits_done_ = 0;
    std::array<std::uint8_t, framing::kFrameBits> frame_bits_{};
    double on_sum_ = 0.0;
    double off_sum_ = 0.0;

    linecode::DecodeStats decode_stats_;
    DemodReport report_;
};

DemodReport demodulate(WindowSource& source, const DemodConfig& cfg);
DemodReport demodulate(const IqBuffer& buf, const DemodConfig& cfg);

}  // namespace lanwave::demod
