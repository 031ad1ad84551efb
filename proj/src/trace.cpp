#include "lanwave/trace.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace lanwave {

namespace {

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    return out;
}

std::ifstream open_in(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return in;
}

}  // namespace

const char* to_string(LinkEvent::Kind kind)
{
    switch (kind) {
        case LinkEvent::Kind::up: return "up";
        case LinkEvent::Kind::down: return "down";
        case LinkEvent::Kind::speed: return "speed";
    }
    return "unknown";
}

void write_trace(std::ostream& out, std::span<const PacketRecord> trace)
{
    out.precision(9);
    for (const auto& rec : trace) {
        out << std::fixed << rec.t << ' ' << rec.length << '\n';
    }
}

void save_trace(const std::filesystem::path& path, std::span<const PacketRecord> trace)
{
    auto out = open_out(path);
    write_trace(out, trace);
}

std::vector<PacketRecord> load_trace(const std::filesystem::path& path)
{
    auto in = open_in(path);
    std::vector<PacketRecord> trace;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        std::istringstream ss(line);
        PacketRecord rec;
        if (!(ss >> rec.t >> rec.length)) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": malformed trace line");
        }
        trace.push_back(rec);
    }
    return trace;
}

void write_events(std::ostream& out, std::span<const LinkEvent> events)
{
    out.precision(9);
    for (const auto& ev : events) {
        out << std::fixed << ev.t << ' ' << to_string(ev.kind);
        if (ev.kind != LinkEvent::Kind::down) {
            out << ' ' << ev.mbps;
        }
        out << '\n';
    }
}

void save_events(const std::filesystem::path& path, std::span<const LinkEvent> events)
{
    auto out = open_out(path);
    write_events(out, events);
}

std::vector<LinkEvent> load_events(const std::filesystem::path& path)
{
    auto in = open_in(path);
    std::vector<LinkEvent> events;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        std::istringstream ss(line);
        LinkEvent ev;
        std::string kind;
        if (!(ss >> ev.t >> kind)) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": malformed event line");
        }
        if (kind == "up") {
            ev.kind = LinkEvent::Kind::up;
            ss >> ev.mbps;
        } else if (kind == "down") {
            ev.kind = LinkEvent::Kind::down;
        } else if (kind == "speed") {
            ev.kind = LinkEvent::Kind::speed;
            if (!(ss >> ev.mbps)) {
                throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                         ": speed event missing mbps");
            }
        } else {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": unknown event kind '" + kind + "'");
        }
        events.push_back(ev);
    }
    return events;
}

}  // namespace lanwave
