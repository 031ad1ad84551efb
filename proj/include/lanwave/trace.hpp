#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace lanwave {

// One datagram as seen by a recording sink. Trace files carry one line per
// datagram: "<t_seconds> <length>".
struct PacketRecord {
    double t = 0.0;
    std::size_t length = 0;

    bool operator==(const PacketRecord&) const = default;
};

// One NIC state change. Event logs carry one line per event:
// "<t_seconds> <up|down|speed> [mbps]".
struct LinkEvent {
    enum class Kind { up, down, speed };

    double t = 0.0;
    Kind kind = Kind::up;
    int mbps = 0;  // meaningful for up and speed

    bool operator==(const LinkEvent&) const = default;
};

const char* to_string(LinkEvent::Kind kind);

void write_trace(std::ostream& out, std::span<const PacketRecord> trace);
void save_trace(const std::filesystem::path& path, std::span<const PacketRecord> trace);
std::vector<PacketRecord> load_trace(const std::filesystem::path& path);

void write_events(std::ostream& out, std::span<const LinkEvent> events);
void save_events(const std::filesystem::path& path, std::span<const LinkEvent> events);
std::vector<LinkEvent> load_events(const std::filesystem::path& path);

}  // namespace lanwave
