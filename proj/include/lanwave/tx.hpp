#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lanwave/clock.hpp"
#include "lanwave/linecode.hpp"
#include "lanwave/trace.hpp"

namespace lanwave::tx {

class PacketSink {
public:
    virtual ~PacketSink() = default;
    // false = sink failure; the transmission aborts with a partial report.
    virtual bool send(std::span<const std::uint8_t> datagram) = 0;
};

// Real UDP socket. The default destination is the local discard port, so a
// recorded test run never leaves the host.
class UdpSink final : public PacketSink {
public:
    UdpSink(const std::string& host, std::uint16_t port);
    ~UdpSink() override;
    UdpSink(const UdpSink&) = delete;
    UdpSink& operator=(const UdpSink&) = delete;

    bool send(std::span<const std::uint8_t> datagram) override;

private:
    int fd_ = -1;
};

// Timestamps every datagram against the transmission clock.
class RecordingSink final : public PacketSink {
public:
    explicit RecordingSink(Clock& clock) : clock_(&clock) {}

    bool send(std::span<const std::uint8_t> datagram) override
    {
        records_.push_back({clock_->now(), datagram.size()});
        return true;
    }

    const std::vector<PacketRecord>& records() const { return records_; }

private:
    Clock* clock_;
    std::vector<PacketRecord> records_;
};

// Forwards to two sinks; fails if either fails.
class TeeSink final : public PacketSink {
public:
    TeeSink(PacketSink& a, PacketSink& b) : a_(&a), b_(&b) {}

    bool send(std::span<const std::uint8_t> datagram) override
    {
        const bool oka = a_->send(datagram);
        const bool okb = b_->send(datagram);
        return oka && okb;
    }

private:
    PacketSink* a_;
    PacketSink* b_;
};

struct UdpBurstConfig {
    std::size_t payload_size = 1480;   // fits one Ethernet frame unfragmented
    std::uint8_t payload_byte = 0x55;  // 'U' = alternating 01010101 on the wire
    std::string dest_host = "127.0.0.1";
    std::uint16_t dest_port = 9;
    double packets_per_second = 100.0;
};

struct ChipRecord {
    std::size_t index = 0;
    bool on = false;
    double t_start = 0.0;
    double t_end = 0.0;
    std::size_t packets = 0;
};

struct TxReport {
    std::string method;
    double chip_duration_s = 0.0;
    double t_begin = 0.0;
    double t_end = 0.0;
    std::vector<ChipRecord> chips;
    std::vector<PacketRecord> packets;  // udp method
    std::vector<LinkEvent> events;      // toggle method
    int on_speed_mbps = 0;              // toggle method: speed that lights the band
    bool aborted = false;
    std::string error;
};

// Activity schedule derived from a chip stream: (on|off, duration) steps.
struct ScheduleStep {
    bool on = false;
    double duration_s = 0.0;
};
using TxSchedule = std::vector<ScheduleStep>;

TxSchedule schedule_from_chips(const linecode::ChipStream& chips);

// Sends bursts of identical datagrams during on-chips and stays silent during
// off-chips. Chip boundaries are absolute deadlines from the stream start, so
// timing error does not accumulate over long messages.
TxReport modulate_udp(const linecode::ChipStream& chips, const UdpBurstConfig& cfg, Clock& clock,
                      PacketSink& sink);

// Up/down latencies of one speed transition pair, e.g. 0-100 Mbps.
struct ToggleProfile {
    std::string device;      // pc | laptop | embedded
    std::string transition;  // "0-10", "0-100", "0-1000", "10-100", "100-1000"
    double up_latency_s = 0.0;
    double down_latency_s = 0.0;
    int on_speed_mbps = 100;
};

// Measured transition latencies per device profile. Throws std::invalid_argument
// for unknown device/transition combinations, listing the valid ones.
ToggleProfile toggle_profile(const std::string& device, const std::string& transition = "0-100");

struct LinkState {
    bool up = false;
    int speed_mbps = 0;
};

class LinkController {
public:
    virtual ~LinkController() = default;
    virtual void link_up(int speed_mbps) = 0;
    virtual void link_down() = 0;
    virtual void set_speed(int speed_mbps) = 0;
    virtual LinkState query_state() const = 0;
    // Declared worst-case latencies, used for feasibility checks.
    virtual double up_latency_s() const = 0;
    virtual double down_latency_s() const = 0;
};

// In-process controller: each transition completes only after the profile
// latency has elapsed on the clock, and is logged as a LinkEvent.
class SimulatedLinkController final : public LinkController {
public:
    SimulatedLinkController(ToggleProfile profile, Clock& clock);

    void link_up(int speed_mbps) override;
    void link_down() override;
    void set_speed(int speed_mbps) override;
    LinkState query_state() const override { return state_; }
    double up_latency_s() const override { return profile_.up_latency_s; }
    double down_latency_s() const override { return profile_.down_latency_s; }

    const std::vector<LinkEvent>& events() const { return events_; }
    void clear_events() { events_.clear(); }

private:
    ToggleProfile profile_;
    Clock* clock_;
    LinkState state_{};
    std::vector<LinkEvent> events_;
};

// Shells out to an ethtool-style helper: `<cmd> up <mbps>`, `<cmd> down`,
// `<cmd> speed <mbps>`. Non-zero exit or timeout raises std::runtime_error.
class ExternalCommandLinkController final : public LinkController {
public:
    ExternalCommandLinkController(std::string command, double up_latency_s, double down_latency_s,
                                  double timeout_s = 30.0);

    void link_up(int speed_mbps) override;
    void link_down() override;
    void set_speed(int speed_mbps) override;
    LinkState query_state() const override { return state_; }
    double up_latency_s() const override { return up_latency_s_; }
    double down_latency_s() const override { return down_latency_s_; }

private:
    void run(const std::string& args);

    std::string command_;
    double up_latency_s_;
    double down_latency_s_;
    double timeout_s_;
    LinkState state_{};
};

// Requested bit rate cannot be carried by the link transition latencies.
class InfeasibleRateError : public std::runtime_error {
public:
    InfeasibleRateError(const std::string& what, double limiting_latency_s)
        : std::runtime_error(what), limiting_latency_s(limiting_latency_s)
    {
    }

    double limiting_latency_s;
};

// Drives the link to on_speed during on-chips and down (or to off_speed) during
// off-chips. Rejects before touching the link if a transition cannot complete
// inside one chip.
TxReport modulate_toggle(const linecode::ChipStream& chips, LinkController& controller,
                         Clock& clock, int on_speed_mbps,
                         std::optional<int> off_speed_mbps = std::nullopt);

// 1 / (2 * (up + down)): each bit is two chips and each chip must absorb one
// transition. A zero-latency profile returns the configured cap.
double max_feasible_bitrate(const ToggleProfile& profile, double zero_latency_cap_bps = 1000.0);

}  // namespace lanwave::tx
