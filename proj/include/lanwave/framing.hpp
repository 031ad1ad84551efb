#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace lanwave::framing {

// CRC-8 parameterization. Transmitter and receiver must share identical
// values for the lifetime of a deployment.
struct CrcParams {
    std::uint8_t poly = 0x07;
    std::uint8_t init = 0x00;
    bool reflect_in = false;
    bool reflect_out = false;
    std::uint8_t xor_out = 0x00;
};

// Plain CRC-8 (poly 0x07, zero init, no reflection). This is the variant
// whose checksum over "DATA" is 0xB6, matching the protocol's frame check.
inline constexpr CrcParams kProtocolCrc{};

std::uint8_t crc8(std::span<const std::uint8_t> data, const CrcParams& params = kProtocolCrc);

inline constexpr std::uint8_t kEnableByte = 0xAA;
inline constexpr std::size_t kPayloadBytes = 4;
inline constexpr std::size_t kFrameBytes = 6;
inline constexpr std::size_t kFrameBits = 48;

// One protocol packet: enable byte, 4-byte payload, CRC-8 over the payload.
struct Frame {
    std::uint8_t enable = kEnableByte;
    std::array<std::uint8_t, kPayloadBytes> payload{};
    std::uint8_t crc = 0;

    std::array<std::uint8_t, kFrameBytes> serialize() const;
    // MSB-first bit view, 48 entries of 0/1.
    std::vector<std::uint8_t> to_bits() const;

    bool operator==(const Frame&) const = default;
};

// Throws std::invalid_argument unless payload is exactly 4 bytes.
Frame build_frame(std::span<const std::uint8_t> payload, const CrcParams& params = kProtocolCrc);

enum class FrameError { bad_length, bad_preamble, bad_crc };
const char* to_string(FrameError err);

using ParseResult = std::variant<Frame, FrameError>;

// Validates enable byte and CRC. Expects exactly 6 bytes.
ParseResult parse_frame(std::span<const std::uint8_t> bytes, const CrcParams& params = kProtocolCrc);
// Same check over a 48-entry MSB-first bit sequence.
ParseResult parse_frame_bits(std::span<const std::uint8_t> bits, const CrcParams& params = kProtocolCrc);

// Splits data into 4-byte payload frames, zero-padding the last one.
// Throws std::invalid_argument on empty input.
std::vector<Frame> chunk_message(std::span<const std::uint8_t> data);

// MSB-first bit helpers shared by the modem stages.
std::vector<std::uint8_t> bytes_to_bits(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> bits_to_bytes(std::span<const std::uint8_t> bits);

}  // namespace lanwave::framing
