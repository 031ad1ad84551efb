#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lanwave::linecode {

// Manchester half-bit symbol sequence. Bit 1 -> (on, off); bit 0 -> (off, on).
// Length is always even and the two chips of a bit are never equal.
struct ChipStream {
    std::vector<std::uint8_t> chips;  // 1 = carrier on, 0 = carrier off
    double chip_duration_s = 0.05;

    double duration_s() const { return static_cast<double>(chips.size()) * chip_duration_s; }
};

ChipStream manchester_encode(std::span<const std::uint8_t> bits, double chip_duration_s);

struct DecodeStats {
    std::uint64_t ties = 0;  // equal half-amplitudes decoded as 0; marginal-link indicator
};

// Decides a bit from the amplitudes of its two halves. No absolute threshold:
// only the relative change matters, so the decision is invariant under common
// scaling or offset of both halves. Throws std::invalid_argument on
// non-finite or negative input. Ties decode as 0 and bump stats->ties.
int manchester_decode_pair(double first_half, double second_half, DecodeStats* stats = nullptr);

// Pairs of half-bit amplitudes -> bits. Size must be even.
std::vector<std::uint8_t> manchester_decode(std::span<const double> half_amplitudes,
                                            DecodeStats* stats = nullptr);

}  // namespace lanwave::linecode
