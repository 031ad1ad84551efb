#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "lanwave/channel.hpp"
#include "lanwave/defense.hpp"
#include "lanwave/demod.hpp"

using namespace lanwave;
using namespace lanwave::defense;

namespace {

// Matched-volume background traffic with exponential inter-arrivals.
std::vector<PacketRecord> poisson_trace(double rate_pps, double duration, std::uint64_t seed,
                                        std::size_t size = 1480)
{
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> gap(rate_pps);
    std::vector<PacketRecord> trace;
    double t = 0.0;
    for (;;) {
        t += gap(rng);
        if (t >= duration) {
            break;
        }
        trace.push_back({t, size});
    }
    return trace;
}

std::vector<PacketRecord> ook_trace(double rate_bps, double duration, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> bit(0, 1);
    std::vector<std::uint8_t> payload(4);
    std::vector<std::uint8_t> bits;
    while (static_cast<double>(bits.size()) / rate_bps < duration) {
        for (auto& b : payload) {
            b = static_cast<std::uint8_t>(bit(rng) * 255);
        }
        const auto frame_bits = framing::build_frame(payload).to_bits();
        bits.insert(bits.end(), frame_bits.begin(), frame_bits.end());
    }
    const auto chips = linecode::manchester_encode(bits, 1.0 / (2.0 * rate_bps));
    SimulatedClock clock;
    tx::RecordingSink sink(clock);
    tx::UdpBurstConfig cfg;
    tx::modulate_udp(chips, cfg, clock, sink);
    auto trace = sink.records();
    const double span = static_cast<double>(bits.size()) / rate_bps;
    while (!trace.empty() && trace.back().t > std::min(duration, span)) {
        trace.pop_back();
    }
    return trace;
}

}  // namespace

TEST_CASE("single link events and slow changes stay quiet")
{
    std::vector<LinkEvent> one{{12.0, LinkEvent::Kind::up, 100}};
    CHECK(detect_link_toggling(one).empty());

    std::vector<LinkEvent> slow{{10.0, LinkEvent::Kind::up, 100},
                                {1800.0, LinkEvent::Kind::down, 0}};
    CHECK(detect_link_toggling(slow).empty());

    // five changes within the window is still within max_changes
    std::vector<LinkEvent> five;
    for (int i = 0; i < 5; ++i) {
        five.push_back({static_cast<double>(i), LinkEvent::Kind::up, 100});
    }
    CHECK(detect_link_toggling(five).empty());
}

TEST_CASE("unsorted link events are rejected")
{
    std::vector<LinkEvent> bad{{5.0, LinkEvent::Kind::up, 100}, {1.0, LinkEvent::Kind::down, 0}};
    CHECK_THROWS_AS(detect_link_toggling(bad), std::invalid_argument);
}

TEST_CASE("a toggled frame transmission raises exactly one episode alert")
{
    const auto frame = framing::build_frame(std::vector<std::uint8_t>{'D', 'A', 'T', 'A'});
    const auto chips = linecode::manchester_encode(frame.to_bits(), 0.5);
    SimulatedClock clock;
    tx::SimulatedLinkController controller(tx::toggle_profile("embedded", "0-100"), clock);
    const auto report = tx::modulate_toggle(chips, controller, clock, 100);
    REQUIRE(report.events.size() > 5);

    const auto alerts = detect_link_toggling(report.events);
    REQUIRE(alerts.size() == 1);
    CHECK(alerts[0].kind == Alert::Kind::link_toggling);
    CHECK(alerts[0].score > 1.0);
    CHECK(alerts[0].t_end > alerts[0].t_begin);
}

TEST_CASE("ook traffic detector flags modulated traces and names the periodicity")
{
    for (double rate : {1.0, 5.0, 10.0}) {
        const double duration = rate < 2.0 ? 120.0 : 60.0;
        const auto trace = ook_trace(rate, duration, 42);
        const auto alerts = detect_ook_traffic(trace);
        REQUIRE_MESSAGE(alerts.size() == 1, "rate " << rate);
        CHECK(alerts[0].kind == Alert::Kind::ook_traffic);
        CHECK(alerts[0].score >= 10.0);
        CHECK(alerts[0].peak_hz >= rate / 4.0);
        CHECK(alerts[0].peak_hz <= rate * 2.5);
    }
}

TEST_CASE("uniform-gap bulk transfer does not alert")
{
    std::vector<PacketRecord> trace;
    for (int i = 0; i < 3000; ++i) {
        trace.push_back({static_cast<double>(i) * 0.02, 1480});  // constant 50 pkt/s
    }
    CHECK(detect_ook_traffic(trace).empty());
}

TEST_CASE("poisson traffic at matched volume rarely alerts")
{
    int alerted = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto trace = poisson_trace(50.0, 60.0, 1000 + seed);
        if (!detect_ook_traffic(trace).empty()) {
            ++alerted;
        }
    }
    CHECK(alerted <= 1);
}

TEST_CASE("short traces raise insufficient-data")
{
    std::vector<PacketRecord> tiny{{0.0, 100}, {0.05, 100}};
    CHECK_THROWS_AS(detect_ook_traffic(tiny), InsufficientDataError);
    CHECK_THROWS_AS(detect_ook_traffic({}), InsufficientDataError);
}

TEST_CASE("jammer honors its profile and reproduces from the seed")
{
    JamProfile profile;
    profile.min_gap_s = 0.002;
    profile.max_gap_s = 0.03;
    profile.min_size = 100;
    profile.max_size = 900;

    SimulatedClock clock_a;
    tx::RecordingSink sink_a(clock_a);
    const auto a = jam(5.0, profile, clock_a, sink_a, 77);
    CHECK(!a.aborted);
    CHECK(!a.trace.empty());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        CHECK(a.trace[i].length >= 100);
        CHECK(a.trace[i].length <= 900);
        const double prev = i == 0 ? 0.0 : a.trace[i - 1].t;
        CHECK(a.trace[i].t - prev >= 0.002 - 1e-12);
        CHECK(a.trace[i].t - prev <= 0.03 + 1e-12);
        CHECK(a.trace[i].t <= 5.0);
    }

    SimulatedClock clock_b;
    tx::RecordingSink sink_b(clock_b);
    const auto b = jam(5.0, profile, clock_b, sink_b, 77);
    REQUIRE(b.trace.size() == a.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        CHECK(a.trace[i].t == b.trace[i].t);
        CHECK(a.trace[i].length == b.trace[i].length);
    }

    SimulatedClock clock_c;
    tx::RecordingSink sink_c(clock_c);
    CHECK(jam(0.0, profile, clock_c, sink_c, 1).trace.empty());
}

TEST_CASE("a failing sink aborts the jammer with a partial trace")
{
    class FailingSink final : public tx::PacketSink {
    public:
        bool send(std::span<const std::uint8_t>) override { return sent_++ < 3; }

    private:
        int sent_ = 0;
    };
    SimulatedClock clock;
    FailingSink sink;
    const auto result = jam(10.0, JamProfile{}, clock, sink, 5);
    CHECK(result.aborted);
    CHECK(result.trace.size() == 3);
}

TEST_CASE("jam interference strictly degrades frame recovery at 14 dB")
{
    testutil::PipelineConfig cfg;
    std::mt19937_64 rng(2024);
    const auto frames = testutil::random_frames(rng, 20);
    const auto run = testutil::run_pipeline(cfg, frames, 14.0, 88);

    const auto count_ok = [&](const IqBuffer& buf) {
        const auto report = demod::demodulate(buf, run.demod_cfg);
        std::size_t ok = 0;
        for (const auto& frame : frames) {
            const auto expected = frame.serialize();
            for (const auto& rec : report.records) {
                if (rec.preamble_ok && rec.crc_ok &&
                    std::equal(expected.begin(), expected.end(), rec.bytes.begin())) {
                    ++ok;
                    break;
                }
            }
        }
        return ok;
    };

    const std::size_t baseline_ok = count_ok(run.buffer);

    // jam the same span; each datagram holds the band for half a chip
    JamProfile profile;
    profile.min_gap_s = 0.005;
    profile.max_gap_s = 0.04;
    SimulatedClock clock;
    tx::RecordingSink sink(clock);
    const auto jam_result =
        jam(run.report.t_end - run.report.t_begin, profile, clock, sink, 1234);
    const auto interference = channel::traffic_intervals(jam_result.trace, cfg.chip_s() / 2.0);

    const auto intervals = channel::emission_intervals(run.report);
    const double duration = run.report.t_end - run.report.t_begin +
                            2.0 * static_cast<double>(cfg.window_size) / cfg.sample_rate;
    const auto jammed = channel::synthesize(intervals, duration, run.params, interference);
    const std::size_t jammed_ok = count_ok(jammed);

    CHECK(baseline_ok == frames.size());
    CHECK(jammed_ok < baseline_ok);
}
