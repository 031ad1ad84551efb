#include "lanwave/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "lanwave/psd.hpp"

namespace lanwave::channel {

void ChannelParams::validate() const
{
    if (!(sample_rate > 0)) {
        throw ConfigError("sample rate must be positive");
    }
    if (!(sample_rate > 2.0 * std::abs(carrier_offset_hz))) {
        throw ConfigError("sample rate " + std::to_string(sample_rate) +
                          " cannot represent a carrier offset of " +
                          std::to_string(carrier_offset_hz) + " Hz in baseband");
    }
    if (!(on_amplitude > 0)) {
        throw ConfigError("on amplitude must be positive");
    }
    for (const auto& band : harmonics) {
        if (band.relative_db > 0) {
            throw ConfigError("harmonic bands cannot exceed the base band (relative dB > 0)");
        }
        if (!(band.multiple > 0)) {
            throw ConfigError("harmonic multiple must be positive");
        }
    }
    if (analysis_window < 20) {
        throw ConfigError("analysis window must hold at least 20 samples");
    }
}

ChannelParams device_preset(const std::string& name)
{
    ChannelParams params;
    params.carrier_offset_hz = 10e3;
    params.sample_rate = 2.4e6;
    // Weaker bands at 0.5x, 1.5x and 2.5x of the base; relative levels are
    // configuration, only the base band level is pinned by measurement.
    params.harmonics = {{0.5, -9.0}, {1.5, -6.0}, {2.5, -12.0}};

    double absolute = 0.0;
    if (name == "pc") {
        absolute = 250.000e6;
    } else if (name == "laptop") {
        absolute = 249.99488e6;
    } else if (name == "embedded") {
        absolute = 250.00285e6;
    } else {
        throw std::invalid_argument("unknown device preset '" + name +
                                    "'; valid presets: pc laptop embedded");
    }
    params.center_frequency_hz = absolute - params.carrier_offset_hz;
    return params;
}

std::vector<Interval> emission_intervals(const tx::TxReport& report)
{
    std::vector<Interval> intervals;
    if (report.method == "toggle" && !report.events.empty()) {
        // Emission follows the achieved link state; with a speed-change off
        // state the monitored band is lit only at the on-speed.
        double up_since = -1.0;
        for (const auto& ev : report.events) {
            const bool up = ev.kind != LinkEvent::Kind::down &&
                            (report.on_speed_mbps == 0 || ev.mbps == report.on_speed_mbps);
            if (up && up_since < 0) {
                up_since = ev.t;
            } else if (!up && up_since >= 0) {
                intervals.push_back({up_since, ev.t});
                up_since = -1.0;
            }
        }
        if (up_since >= 0) {
            intervals.push_back({up_since, report.t_end});
        }
        return intervals;
    }
    for (const auto& chip : report.chips) {
        if (chip.on) {
            intervals.push_back({chip.t_start, chip.t_end});
        }
    }
    return intervals;
}

std::vector<Interval> emission_intervals(const tx::TxSchedule& schedule, double t_begin)
{
    std::vector<Interval> intervals;
    double t = t_begin;
    for (const auto& step : schedule) {
        if (step.on) {
            intervals.push_back({t, t + step.duration_s});
        }
        t += step.duration_s;
    }
    return intervals;
}

std::vector<Interval> emission_intervals(const linecode::ChipStream& chips, double t_begin)
{
    return emission_intervals(tx::schedule_from_chips(chips), t_begin);
}

std::vector<Interval> traffic_intervals(std::span<const PacketRecord> trace, double pulse_s)
{
    std::vector<Interval> intervals;
    for (const auto& rec : trace) {
        const double t0 = rec.t;
        const double t1 = rec.t + pulse_s;
        if (!intervals.empty() && t0 <= intervals.back().t1) {
            intervals.back().t1 = std::max(intervals.back().t1, t1);
        } else {
            intervals.push_back({t0, t1});
        }
    }
    return intervals;
}

namespace {

// Walks sorted intervals alongside a monotonically increasing time cursor.
class IntervalCursor {
public:
    explicit IntervalCursor(const std::vector<Interval>& intervals) : intervals_(&intervals) {}

    bool contains(double t)
    {
        while (idx_ < intervals_->size() && (*intervals_)[idx_].t1 <= t) {
            ++idx_;
        }
        return idx_ < intervals_->size() && (*intervals_)[idx_].t0 <= t;
    }

private:
    const std::vector<Interval>* intervals_;
    std::size_t idx_ = 0;
};

struct ToneBank {
    std::vector<double> freqs;
    std::vector<double> amps;
};

// Base band plus whichever harmonic bands land inside the capture bandwidth.
ToneBank in_window_tones(const ChannelParams& params)
{
    ToneBank bank;
    const double absolute = params.absolute_carrier_hz();
    bank.freqs.push_back(params.carrier_offset_hz);
    bank.amps.push_back(params.on_amplitude);
    for (const auto& band : params.harmonics) {
        const double offset = band.multiple * absolute - params.center_frequency_hz;
        if (std::abs(offset) < 0.45 * params.sample_rate) {
            bank.freqs.push_back(offset);
            bank.amps.push_back(params.on_amplitude * std::pow(10.0, band.relative_db / 20.0));
        }
    }
    return bank;
}

double noise_sigma(const ChannelParams& params)
{
    if (std::isinf(params.snr_db)) {
        return 0.0;
    }
    dsp::WelchPsd psd(params.analysis_window);
    const double gain = psd.tone_gain(params.carrier_offset_hz, params.sample_rate);
    const double tone_bin_power = params.on_amplitude * params.on_amplitude * gain;
    const double snr_lin = std::pow(10.0, params.snr_db / 10.0);
    // tone_bin_power / (median noise bin) == snr_lin, with
    // median = kNoiseMedianToMean * sigma2 * sum(w^2)/sum(w)^2.
    const double mean_bin_per_sigma2 = psd.noise_bin_mean(1.0);
    const double sigma2 =
        tone_bin_power / (snr_lin * dsp::WelchPsd::kNoiseMedianToMean * mean_bin_per_sigma2);
    return std::sqrt(sigma2);
}

}  // namespace

IqBuffer synthesize(const std::vector<Interval>& on_intervals, double duration_s,
                    const ChannelParams& params, const std::vector<Interval>& interference)
{
    params.validate();
    if (!(duration_s > 0)) {
        throw ConfigError("activity duration must be positive");
    }

    const auto n = static_cast<std::size_t>(std::llround(duration_s * params.sample_rate));
    const ToneBank tones = in_window_tones(params);
    const double sigma = noise_sigma(params);
    const double sigma_part = sigma / std::numbers::sqrt2;

    IqBuffer buf;
    buf.sample_rate = params.sample_rate;
    buf.center_frequency_hz = params.center_frequency_hz;
    buf.samples.resize(n);

    std::mt19937_64 rng(params.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    IntervalCursor on_cursor(on_intervals);
    IntervalCursor jam_cursor(interference);
    const bool has_jam = !interference.empty();

    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / params.sample_rate;
        double re = 0.0;
        double im = 0.0;
        const bool on = on_cursor.contains(t);
        const bool jam = has_jam && jam_cursor.contains(t);
        if (on || jam) {
            const double scale = (on && jam) ? 2.0 : 1.0;
            for (std::size_t b = 0; b < tones.freqs.size(); ++b) {
                const double phase = 2.0 * std::numbers::pi * tones.freqs[b] * t;
                re += scale * tones.amps[b] * std::cos(phase);
                im += scale * tones.amps[b] * std::sin(phase);
            }
        }
        if (sigma > 0.0) {
            re += sigma_part * gauss(rng);
            im += sigma_part * gauss(rng);
        }
        buf.samples[i] = {static_cast<float>(re), static_cast<float>(im)};
    }
    return buf;
}

IqBuffer synthesize(const tx::TxReport& report, const ChannelParams& params,
                    const std::vector<Interval>& interference)
{
    const auto intervals = emission_intervals(report);
    const double duration = report.t_end - report.t_begin;
    // Activity timestamps are absolute; rebase to the report start.
    std::vector<Interval> rebased;
    rebased.reserve(intervals.size());
    for (const auto& iv : intervals) {
        rebased.push_back({iv.t0 - report.t_begin, iv.t1 - report.t_begin});
    }
    std::vector<Interval> jam_rebased;
    jam_rebased.reserve(interference.size());
    for (const auto& iv : interference) {
        jam_rebased.push_back({iv.t0 - report.t_begin, iv.t1 - report.t_begin});
    }
    return synthesize(rebased, duration, params, jam_rebased);
}

IqBuffer synthesize(const linecode::ChipStream& chips, const ChannelParams& params)
{
    return synthesize(emission_intervals(chips), chips.duration_s(), params);
}

std::vector<IqBuffer> snr_sweep(const std::vector<Interval>& on_intervals, double duration_s,
                                const ChannelParams& base, const std::vector<double>& snrs_db)
{
    if (snrs_db.empty()) {
        throw ConfigError("snr sweep needs at least one point");
    }
    std::vector<IqBuffer> buffers;
    buffers.reserve(snrs_db.size());
    for (double snr : snrs_db) {
        ChannelParams params = base;
        params.snr_db = snr;
        buffers.push_back(synthesize(on_intervals, duration_s, params));
    }
    return buffers;
}

double measure_inband_snr_db(const IqBuffer& buf, const ChannelParams& params)
{
    dsp::WelchPsd psd(params.analysis_window);
    const std::size_t tone_bin = psd.bin_for(params.carrier_offset_hz, buf.sample_rate);
    const std::size_t nwin = buf.samples.size() / params.analysis_window;
    if (nwin == 0) {
        throw ConfigError("buffer shorter than one analysis window");
    }

    double tone_acc = 0.0;
    std::vector<double> off_bins;
    std::vector<double> spectrum(psd.bins());
    off_bins.reserve(nwin * (psd.bins() - 3));
    for (std::size_t w = 0; w < nwin; ++w) {
        const std::span<const std::complex<float>> window(
            buf.samples.data() + w * params.analysis_window, params.analysis_window);
        psd.estimate(window, spectrum);
        tone_acc += spectrum[tone_bin];
        for (std::size_t k = 0; k < spectrum.size(); ++k) {
            const std::size_t dist = std::min((k + spectrum.size() - tone_bin) % spectrum.size(),
                                              (tone_bin + spectrum.size() - k) % spectrum.size());
            if (dist > 1) {
                off_bins.push_back(spectrum[k]);
            }
        }
    }
    const double tone = tone_acc / static_cast<double>(nwin);
    auto mid = off_bins.begin() + static_cast<std::ptrdiff_t>(off_bins.size() / 2);
    std::nth_element(off_bins.begin(), mid, off_bins.end());
    const double floor = std::max(*mid, 1e-300);
    return 10.0 * std::log10(tone / floor);
}

}  // namespace lanwave::channel
