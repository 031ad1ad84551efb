#include "lanwave/tx.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace lanwave::tx {

UdpSink::UdpSink(const std::string& host, std::uint16_t port)
{
    fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
    if (fd_ < 0) {
        throw std::runtime_error("socket: " + std::string(std::strerror(errno)));
    }

    sockaddr_in dest{};
    dest.sin_family = AF_INET;
    dest.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &dest.sin_addr) != 1) {
        addrinfo hints{};
        hints.ai_family = AF_INET;
        hints.ai_socktype = SOCK_DGRAM;
        addrinfo* res = nullptr;
        if (::getaddrinfo(host.c_str(), nullptr, &hints, &res) != 0 || res == nullptr) {
            ::close(fd_);
            throw std::runtime_error("cannot resolve host: " + host);
        }
        dest.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
        ::freeaddrinfo(res);
    }
    if (::connect(fd_, reinterpret_cast<sockaddr*>(&dest), sizeof(dest)) != 0) {
        ::close(fd_);
        throw std::runtime_error("connect: " + std::string(std::strerror(errno)));
    }
}

UdpSink::~UdpSink()
{
    if (fd_ >= 0) {
        ::close(fd_);
    }
}

bool UdpSink::send(std::span<const std::uint8_t> datagram)
{
    const ssize_t n = ::send(fd_, datagram.data(), datagram.size(), 0);
    return n == static_cast<ssize_t>(datagram.size());
}

TxSchedule schedule_from_chips(const linecode::ChipStream& chips)
{
    TxSchedule schedule;
    schedule.reserve(chips.chips.size());
    for (std::uint8_t chip : chips.chips) {
        schedule.push_back({chip != 0, chips.chip_duration_s});
    }
    return schedule;
}

TxReport modulate_udp(const linecode::ChipStream& chips, const UdpBurstConfig& cfg, Clock& clock,
                      PacketSink& sink)
{
    if (!(chips.chip_duration_s > 0)) {
        throw std::invalid_argument("chip duration must be positive");
    }
    if (!(cfg.packets_per_second > 0)) {
        throw std::invalid_argument("packet rate must be positive");
    }
    if (cfg.payload_size == 0 || cfg.payload_size > 1480) {
        throw std::invalid_argument("payload size must be in 1..1480");
    }

    const std::vector<std::uint8_t> payload(cfg.payload_size, cfg.payload_byte);
    const double gap = 1.0 / cfg.packets_per_second;
    const double d = chips.chip_duration_s;

    TxReport report;
    report.method = "udp";
    report.chip_duration_s = d;
    report.chips.reserve(chips.chips.size());

    const double t0 = clock.now();
    report.t_begin = t0;
    double last = t0;

    for (std::size_t k = 0; k < chips.chips.size(); ++k) {
        const double chip_begin = t0 + static_cast<double>(k) * d;
        const double chip_end = t0 + static_cast<double>(k + 1) * d;
        clock.sleep_until(chip_begin);

        ChipRecord rec;
        rec.index = k;
        rec.on = chips.chips[k] != 0;
        rec.t_start = clock.now();
        if (rec.t_start < last) {
            throw std::runtime_error("clock went backwards during transmission");
        }
        last = rec.t_start;

        if (rec.on) {
            // guard against chip_begin + j*gap landing one ulp short of the
            // boundary and bleeding a datagram into the off-chip
            const double edge = chip_end - gap * 1e-6;
            for (std::size_t j = 0;; ++j) {
                const double deadline = chip_begin + static_cast<double>(j) * gap;
                if (deadline >= edge) {
                    break;
                }
                clock.sleep_until(deadline);
                if (clock.now() >= chip_end) {
                    break;  // overran the chip; stay silent rather than bleed into the off-chip
                }
                if (!sink.send(payload)) {
                    rec.t_end = clock.now();
                    report.chips.push_back(rec);
                    report.aborted = true;
                    report.error = "packet sink failure";
                    report.t_end = clock.now();
                    return report;
                }
                report.packets.push_back({clock.now(), payload.size()});
                ++rec.packets;
            }
        }
        clock.sleep_until(chip_end);
        rec.t_end = clock.now();
        report.chips.push_back(rec);
    }
    report.t_end = clock.now();
    return report;
}

ToggleProfile toggle_profile(const std::string& device, const std::string& transition)
{
    struct Row {
        const char* device;
        const char* transition;
        double up_s;
        double down_s;
        int speed;
    };
    // Transition response times per device class; the pc 0-1000 bring-up
    // measures 4-6 s, the profile carries the 4 s floor and the field is
    // writable for the rest of the range.
    static const Row rows[] = {
        {"pc", "0-10", 4.0, 0.013, 10},          {"pc", "0-100", 4.0, 0.013, 100},
        {"pc", "0-1000", 4.0, 0.013, 1000},      {"pc", "10-100", 4.0, 4.0, 100},
        {"pc", "100-1000", 4.0, 4.0, 1000},      {"laptop", "0-10", 4.0, 0.02, 10},
        {"laptop", "0-100", 4.0, 0.024, 100},    {"laptop", "0-1000", 4.0, 0.024, 1000},
        {"laptop", "10-100", 4.0, 4.0, 100},     {"laptop", "100-1000", 4.0, 4.0, 1000},
        {"embedded", "0-10", 0.095, 0.17, 10},   {"embedded", "0-100", 0.095, 0.17, 100},
        {"embedded", "10-100", 0.081, 0.072, 100},
    };
    for (const auto& row : rows) {
        if (device == row.device && transition == row.transition) {
            return {row.device, row.transition, row.up_s, row.down_s, row.speed};
        }
    }
    std::string valid;
    for (const auto& row : rows) {
        valid += std::string(" ") + row.device + ":" + row.transition;
    }
    throw std::invalid_argument("unknown toggle profile '" + device + ":" + transition +
                                "'; valid:" + valid);
}

SimulatedLinkController::SimulatedLinkController(ToggleProfile profile, Clock& clock)
    : profile_(std::move(profile)), clock_(&clock)
{
}

void SimulatedLinkController::link_up(int speed_mbps)
{
    if (state_.up && state_.speed_mbps == speed_mbps) {
        return;
    }
    clock_->sleep_for(profile_.up_latency_s);
    state_ = {true, speed_mbps};
    events_.push_back({clock_->now(), LinkEvent::Kind::up, speed_mbps});
}

void SimulatedLinkController::link_down()
{
    if (!state_.up) {
        return;
    }
    clock_->sleep_for(profile_.down_latency_s);
    state_ = {false, 0};
    events_.push_back({clock_->now(), LinkEvent::Kind::down, 0});
}

void SimulatedLinkController::set_speed(int speed_mbps)
{
    if (!state_.up) {
        link_up(speed_mbps);
        return;
    }
    if (state_.speed_mbps == speed_mbps) {
        return;
    }
    // Speed changes ride the same negotiation as a fresh bring-up.
    clock_->sleep_for(profile_.up_latency_s);
    state_ = {true, speed_mbps};
    events_.push_back({clock_->now(), LinkEvent::Kind::speed, speed_mbps});
}

ExternalCommandLinkController::ExternalCommandLinkController(std::string command,
                                                             double up_latency_s,
                                                             double down_latency_s,
                                                             double timeout_s)
    : command_(std::move(command)),
      up_latency_s_(up_latency_s),
      down_latency_s_(down_latency_s),
      timeout_s_(timeout_s)
{
}

void ExternalCommandLinkController::run(const std::string& args)
{
    const std::string cmdline = command_ + " " + args;
    const pid_t pid = ::fork();
    if (pid < 0) {
        throw std::runtime_error("fork: " + std::string(std::strerror(errno)));
    }
    if (pid == 0) {
        ::execl("/bin/sh", "sh", "-c", cmdline.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }
    const double deadline = timeout_s_;
    double waited = 0.0;
    int status = 0;
    for (;;) {
        const pid_t r = ::waitpid(pid, &status, WNOHANG);
        if (r == pid) {
            break;
        }
        if (r < 0) {
            throw std::runtime_error("waitpid: " + std::string(std::strerror(errno)));
        }
        if (waited >= deadline) {
            ::kill(pid, SIGKILL);
            ::waitpid(pid, &status, 0);
            throw std::runtime_error("link command timed out: " + cmdline);
        }
        ::usleep(1000);
        waited += 0.001;
    }
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
        throw std::runtime_error("link command failed: " + cmdline);
    }
}

void ExternalCommandLinkController::link_up(int speed_mbps)
{
    run("up " + std::to_string(speed_mbps));
    state_ = {true, speed_mbps};
}

void ExternalCommandLinkController::link_down()
{
    run("down");
    state_ = {false, 0};
}

void ExternalCommandLinkController::set_speed(int speed_mbps)
{
    run("speed " + std::to_string(speed_mbps));
    state_ = {true, speed_mbps};
}

TxReport modulate_toggle(const linecode::ChipStream& chips, LinkController& controller,
                         Clock& clock, int on_speed_mbps, std::optional<int> off_speed_mbps)
{
    const double d = chips.chip_duration_s;
    if (!(d > 0)) {
        throw std::invalid_argument("chip duration must be positive");
    }
    const double worst = std::max(controller.up_latency_s(), controller.down_latency_s());
    if (d < worst) {
        throw InfeasibleRateError(
            "chip duration " + std::to_string(d) + " s is shorter than the worst-case link " +
                "transition latency " + std::to_string(worst) + " s",
            worst);
    }

    TxReport report;
    report.method = "toggle";
    report.chip_duration_s = d;
    report.on_speed_mbps = on_speed_mbps;

    const double t0 = clock.now();
    report.t_begin = t0;

    for (std::size_t k = 0; k < chips.chips.size(); ++k) {
        const double chip_begin = t0 + static_cast<double>(k) * d;
        const double chip_end = t0 + static_cast<double>(k + 1) * d;
        clock.sleep_until(chip_begin);

        ChipRecord rec;
        rec.index = k;
        rec.on = chips.chips[k] != 0;
        rec.t_start = clock.now();

        const LinkState state = controller.query_state();
        if (rec.on) {
            if (!state.up || state.speed_mbps != on_speed_mbps) {
                controller.link_up(on_speed_mbps);
            }
        } else {
            if (off_speed_mbps) {
                if (!state.up || state.speed_mbps != *off_speed_mbps) {
                    controller.set_speed(*off_speed_mbps);
                }
            } else if (state.up) {
                controller.link_down();
            }
        }

        clock.sleep_until(chip_end);
        rec.t_end = clock.now();
        report.chips.push_back(rec);
    }
    report.t_end = clock.now();

    if (auto* sim = dynamic_cast<SimulatedLinkController*>(&controller)) {
        report.events = sim->events();
    }
    return report;
}

double max_feasible_bitrate(const ToggleProfile& profile, double zero_latency_cap_bps)
{
    const double cycle = profile.up_latency_s + profile.down_latency_s;
    if (cycle <= 0) {
        return zero_latency_cap_bps;
    }
    return std::min(zero_latency_cap_bps, 1.0 / (2.0 * cycle));
}

}  // namespace lanwave::tx
