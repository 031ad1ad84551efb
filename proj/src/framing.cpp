#include "lanwave/framing.hpp"

#include <algorithm>
#include <stdexcept>

namespace lanwave::framing {

namespace {

std::uint8_t reflect8(std::uint8_t b)
{
    b = static_cast<std::uint8_t>((b & 0xF0) >> 4 | (b & 0x0F) << 4);
    b = static_cast<std::uint8_t>((b & 0xCC) >> 2 | (b & 0x33) << 2);
    b = static_cast<std::uint8_t>((b & 0xAA) >> 1 | (b & 0x55) << 1);
    return b;
}

}  // namespace

std::uint8_t crc8(std::span<const std::uint8_t> data, const CrcParams& params)
{
    std::uint8_t crc = params.init;
    for (std::uint8_t byte : data) {
        if (params.reflect_in) {
            byte = reflect8(byte);
        }
        crc ^= byte;
        for (int bit = 0; bit < 8; ++bit) {
            if (crc & 0x80) {
                crc = static_cast<std::uint8_t>((crc << 1) ^ params.poly);
            } else {
                crc = static_cast<std::uint8_t>(crc << 1);
            }
        }
    }
    if (params.reflect_out) {
        crc = reflect8(crc);
    }
    return crc ^ params.xor_out;
}

std::array<std::uint8_t, kFrameBytes> Frame::serialize() const
{
    std::array<std::uint8_t, kFrameBytes> out{};
    out[0] = enable;
    std::copy(payload.begin(), payload.end(), out.begin() + 1);
    out[5] = crc;
    return out;
}

std::vector<std::uint8_t> Frame::to_bits() const
{
    const auto bytes = serialize();
    return bytes_to_bits(bytes);
}

Frame build_frame(std::span<const std::uint8_t> payload, const CrcParams& params)
{
    if (payload.size() != kPayloadBytes) {
        throw std::invalid_argument("frame payload must be exactly 4 bytes, got " +
                                    std::to_string(payload.size()));
    }
    Frame frame;
    std::copy(payload.begin(), payload.end(), frame.payload.begin());
    frame.crc = crc8(payload, params);
    return frame;
}

const char* to_string(FrameError err)
{
    switch (err) {
        case FrameError::bad_length: return "bad-length";
        case FrameError::bad_preamble: return "bad-preamble";
        case FrameError::bad_crc: return "bad-crc";
    }
    return "unknown";
}

ParseResult parse_frame(std::span<const std::uint8_t> bytes, const CrcParams& params)
{
    if (bytes.size() != kFrameBytes) {
        return FrameError::bad_length;
    }
    if (bytes[0] != kEnableByte) {
        return FrameError::bad_preamble;
    }
    if (bytes[5] != crc8(bytes.subspan(1, kPayloadBytes), params)) {
        return FrameError::bad_crc;
    }
    Frame frame;
    std::copy(bytes.begin() + 1, bytes.begin() + 5, frame.payload.begin());
    frame.crc = bytes[5];
    return frame;
}

ParseResult parse_frame_bits(std::span<const std::uint8_t> bits, const CrcParams& params)
{
    if (bits.size() != kFrameBits) {
        return FrameError::bad_length;
    }
    const auto bytes = bits_to_bytes(bits);
    return parse_frame(bytes, params);
}

std::vector<Frame> chunk_message(std::span<const std::uint8_t> data)
{
    if (data.empty()) {
        throw std::invalid_argument("cannot chunk an empty message");
    }
    std::vector<Frame> frames;
    frames.reserve((data.size() + kPayloadBytes - 1) / kPayloadBytes);
    for (std::size_t pos = 0; pos < data.size(); pos += kPayloadBytes) {
        std::array<std::uint8_t, kPayloadBytes> payload{};
        const std::size_t n = std::min(kPayloadBytes, data.size() - pos);
        std::copy_n(data.begin() + pos, n, payload.begin());
        frames.push_back(build_frame(payload));
    }
    return frames;
}

std::vector<std::uint8_t> bytes_to_bits(std::span<const std::uint8_t> bytes)
{
    std::vector<std::uint8_t> bits;
    bits.reserve(bytes.size() * 8);
    for (std::uint8_t byte : bytes) {
        for (int i = 7; i >= 0; --i) {
            bits.push_back((byte >> i) & 1);
        }
    }
    return bits;
}

std::vector<std::uint8_t> bits_to_bytes(std::span<const std::uint8_t> bits)
{
    if (bits.size() % 8 != 0) {
        throw std::invalid_argument("bit count must be a multiple of 8");
    }
    std::vector<std::uint8_t> bytes(bits.size() / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) {
            bytes[i / 8] |= static_cast<std::uint8_t>(1u << (7 - i % 8));
        }
    }
    return bytes;
}

}  // namespace lanwave::framing
