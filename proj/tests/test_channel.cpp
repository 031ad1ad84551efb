#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "lanwave/channel.hpp"
#include "lanwave/psd.hpp"

using namespace lanwave;
using namespace lanwave::channel;

namespace {

ChannelParams compressed_params(double snr_db, std::uint64_t seed)
{
    ChannelParams params = device_preset("pc");
    const double absolute = params.absolute_carrier_hz();
    params.sample_rate = 24000.0;
    params.carrier_offset_hz = 10e3;
    params.center_frequency_hz = absolute - params.carrier_offset_hz;
    params.analysis_window = 60;
    params.snr_db = snr_db;
    params.seed = seed;
    params.harmonics.clear();
    return params;
}

std::vector<Interval> all_on(double duration)
{
    return {{0.0, duration}};
}

}  // namespace

TEST_CASE("device presets pin the measured base carriers")
{
    CHECK(device_preset("pc").absolute_carrier_hz() == doctest::Approx(250.000e6));
    CHECK(device_preset("laptop").absolute_carrier_hz() == doctest::Approx(249.99488e6));
    CHECK(device_preset("embedded").absolute_carrier_hz() == doctest::Approx(250.00285e6));
    CHECK(device_preset("pc").carrier_offset_hz == doctest::Approx(10e3));

    CHECK_THROWS_WITH_AS(device_preset("toaster"),
                         "unknown device preset 'toaster'; valid presets: pc laptop embedded",
                         std::invalid_argument);
}

TEST_CASE("synthesis is deterministic given the seed")
{
    const auto params = compressed_params(10.0, 77);
    const auto a = synthesize(all_on(0.5), 0.5, params);
    const auto b = synthesize(all_on(0.5), 0.5, params);
    REQUIRE(a.samples.size() == b.samples.size());
    CHECK(std::equal(a.samples.begin(), a.samples.end(), b.samples.begin(),
                     [](auto x, auto y) { return x.real() == y.real() && x.imag() == y.imag(); }));

    auto params2 = params;
    params2.seed = 78;
    const auto c = synthesize(all_on(0.5), 0.5, params2);
    CHECK(!std::equal(a.samples.begin(), a.samples.end(), c.samples.begin(),
                      [](auto x, auto y) { return x.real() == y.real() && x.imag() == y.imag(); }));
}

TEST_CASE("all-off activity leaves only noise in the tone bin")
{
    const auto params = compressed_params(20.0, 5);
    const auto buf = synthesize({}, 2.0, params);

    dsp::WelchPsd psd(params.analysis_window);
    const std::size_t k = psd.bin_for(params.carrier_offset_hz, params.sample_rate);
    const std::size_t nwin = buf.samples.size() / params.analysis_window;
    std::vector<double> mean(psd.bins(), 0.0);
    std::vector<double> spectrum(psd.bins());
    for (std::size_t w = 0; w < nwin; ++w) {
        psd.estimate(std::span<const std::complex<float>>(
                         buf.samples.data() + w * params.analysis_window, params.analysis_window),
                     spectrum);
        for (std::size_t b = 0; b < spectrum.size(); ++b) {
            mean[b] += spectrum[b];
        }
    }
    // tone bin within 3 dB of its neighbours
    const double neighbour = (mean[(k + 3) % mean.size()] + mean[(k + mean.size() - 3) % mean.size()]) / 2.0;
    CHECK(std::abs(10.0 * std::log10(mean[k] / neighbour)) < 3.0);
}

TEST_CASE("measured in-band snr matches the knob at 20 dB")
{
    const auto params = compressed_params(20.0, 1234);
    const auto buf = synthesize(all_on(4.0), 4.0, params);
    const double measured = measure_inband_snr_db(buf, params);
    CHECK(measured == doctest::Approx(20.0).epsilon(0.05));  // +-1 dB
}

TEST_CASE("raising the knob by 6 dB raises the measured ratio by 6 dB")
{
    const auto low = compressed_params(14.0, 9);
    const auto high = compressed_params(20.0, 9);
    const auto buf_low = synthesize(all_on(4.0), 4.0, low);
    const auto buf_high = synthesize(all_on(4.0), 4.0, high);
    const double diff = measure_inband_snr_db(buf_high, high) - measure_inband_snr_db(buf_low, low);
    CHECK(diff == doctest::Approx(6.0).epsilon(0.17));  // 6 +- 1 dB
}

TEST_CASE("snr sweep is reproducible and propagates activity errors")
{
    const auto base = compressed_params(0.0, 33);
    const std::vector<double> snrs{24.0, 12.0, 5.0};
    const auto sweep1 = snr_sweep(all_on(0.2), 0.2, base, snrs);
    const auto sweep2 = snr_sweep(all_on(0.2), 0.2, base, snrs);
    REQUIRE(sweep1.size() == 3);
    for (std::size_t i = 0; i < sweep1.size(); ++i) {
        CHECK(std::equal(sweep1[i].samples.begin(), sweep1[i].samples.end(),
                         sweep2[i].samples.begin(), [](auto x, auto y) {
                             return x.real() == y.real() && x.imag() == y.imag();
                         }));
    }

    CHECK_THROWS_AS(synthesize(all_on(0.0), 0.0, base), ConfigError);
    CHECK_THROWS_AS(snr_sweep(all_on(0.2), 0.2, base, {}), ConfigError);
}

TEST_CASE("with harmonics disabled at least 90 percent of signal power sits near the carrier")
{
    auto params = compressed_params(std::numeric_limits<double>::infinity(), 1);
    params.harmonics.clear();
    const std::size_t window = params.analysis_window;
    const auto buf = synthesize(all_on(1.0), 1.0, params);

    // plain DFT at the analysis window size: bin width = fs / window
    const std::size_t n = window;
    std::vector<double> power(n, 0.0);
    const std::size_t nwin = buf.samples.size() / n;
    for (std::size_t w = 0; w < nwin; ++w) {
        for (std::size_t k = 0; k < n; ++k) {
            std::complex<double> acc{0.0, 0.0};
            for (std::size_t i = 0; i < n; ++i) {
                const double ph = -2.0 * std::numbers::pi * static_cast<double>(k) *
                                  static_cast<double>(i) / static_cast<double>(n);
                const auto s = buf.samples[w * n + i];
                acc += std::complex<double>(s.real(), s.imag()) *
                       std::complex<double>(std::cos(ph), std::sin(ph));
            }
            power[k] += std::norm(acc);
        }
    }
    double total = 0.0;
    for (double p : power) {
        total += p;
    }
    const auto k0 = static_cast<std::size_t>(
        std::llround(params.carrier_offset_hz / params.sample_rate * static_cast<double>(n)));
    double near = 0.0;
    for (int d = -2; d <= 2; ++d) {
        near += power[(k0 + n + static_cast<std::size_t>(d + static_cast<int>(n))) % n];
    }
    CHECK(near / total >= 0.9);
}

TEST_CASE("in-window harmonic bands carry their configured relative power")
{
    // toy frequencies so several bands fit one capture: base 14 kHz, tuner
    // 12 kHz, 0.5x at -5 kHz and 1.5x at +9 kHz in baseband
    ChannelParams params;
    params.center_frequency_hz = 12e3;
    params.carrier_offset_hz = 2e3;
    params.sample_rate = 48000.0;
    params.analysis_window = 120;  // Welch segment 48, 1 kHz bins
    params.snr_db = std::numeric_limits<double>::infinity();
    params.on_amplitude = 0.5;
    params.harmonics = {{0.5, -9.0}, {1.5, -6.0}};

    const auto buf = synthesize(all_on(1.0), 1.0, params);
    dsp::WelchPsd psd(params.analysis_window);
    std::vector<double> mean(psd.bins(), 0.0);
    std::vector<double> spectrum(psd.bins());
    const std::size_t nwin = buf.samples.size() / params.analysis_window;
    for (std::size_t w = 0; w < nwin; ++w) {
        psd.estimate(std::span<const std::complex<float>>(
                         buf.samples.data() + w * params.analysis_window, params.analysis_window),
                     spectrum);
        for (std::size_t b = 0; b < spectrum.size(); ++b) {
            mean[b] += spectrum[b] / static_cast<double>(nwin);
        }
    }
    const double base_power = 0.25;
    const auto check_band = [&](double offset_hz, double rel_db) {
        const std::size_t k = psd.bin_for(offset_hz, params.sample_rate);
        const double expected = base_power * std::pow(10.0, rel_db / 10.0);
        CHECK(10.0 * std::log10(mean[k] / expected) == doctest::Approx(0.0).epsilon(1.0));
    };
    check_band(2e3, 0.0);    // base
    check_band(-5e3, -9.0);  // 0.5x
    check_band(9e3, -6.0);   // 1.5x
}

TEST_CASE("unrepresentable carrier offsets are rejected")
{
    auto params = compressed_params(10.0, 1);
    params.carrier_offset_hz = 13000.0;  // beyond 12 kHz Nyquist
    CHECK_THROWS_AS(synthesize(all_on(0.1), 0.1, params), ConfigError);

    auto params2 = compressed_params(10.0, 1);
    params2.harmonics = {{1.5, +3.0}};
    CHECK_THROWS_AS(synthesize(all_on(0.1), 0.1, params2), ConfigError);
}

TEST_CASE("emission intervals follow the recorded activity")
{
    SUBCASE("udp on-chips")
    {
        testutil::PipelineConfig cfg;
        std::mt19937_64 rng(4);
        const auto frames = testutil::random_frames(rng, 1);
        const auto run = testutil::run_pipeline(cfg, frames, 24.0, 1);
        const auto intervals = emission_intervals(run.report);
        std::size_t on_chips = 0;
        for (const auto& chip : run.report.chips) {
            if (chip.on) {
                ++on_chips;
            }
        }
        CHECK(intervals.size() == on_chips);
    }

    SUBCASE("toggle link state")
    {
        linecode::ChipStream chips;
        chips.chips = {1, 0, 1, 0};
        chips.chip_duration_s = 0.5;
        SimulatedClock clock;
        tx::SimulatedLinkController controller(tx::toggle_profile("embedded", "0-100"), clock);
        const auto report = tx::modulate_toggle(chips, controller, clock, 100);
        const auto intervals = emission_intervals(report);
        REQUIRE(intervals.size() == 2);
        // first up completes 0.095 s into the chip; down completes 0.17 s into the next
        CHECK(intervals[0].t0 == doctest::Approx(0.095));
        CHECK(intervals[0].t1 == doctest::Approx(0.5 + 0.17));
    }
}

TEST_CASE("traffic intervals merge overlapping pulses")
{
    std::vector<PacketRecord> trace{{0.0, 100}, {0.003, 100}, {0.02, 100}};
    const auto intervals = traffic_intervals(trace, 0.005);
    REQUIRE(intervals.size() == 2);
    CHECK(intervals[0].t0 == doctest::Approx(0.0));
    CHECK(intervals[0].t1 == doctest::Approx(0.008));
    CHECK(intervals[1].t0 == doctest::Approx(0.02));
}
