#include "lanwave/linecode.hpp"

#include <cmath>
#include <stdexcept>

namespace lanwave::linecode {

ChipStream manchester_encode(std::span<const std::uint8_t> bits, double chip_duration_s)
{
    if (!(chip_duration_s > 0)) {
        throw std::invalid_argument("chip duration must be positive");
    }
    ChipStream stream;
    stream.chip_duration_s = chip_duration_s;
    stream.chips.reserve(bits.size() * 2);
    for (std::uint8_t bit : bits) {
        if (bit) {
            stream.chips.push_back(1);
            stream.chips.push_back(0);
        } else {
            stream.chips.push_back(0);
            stream.chips.push_back(1);
        }
    }
    return stream;
}

int manchester_decode_pair(double first_half, double second_half, DecodeStats* stats)
{
    if (!std::isfinite(first_half) || !std::isfinite(second_half) || first_half < 0 ||
        second_half < 0) {
        throw std::invalid_argument("half-bit amplitudes must be finite and non-negative");
    }
    if (first_half > second_half) {
        return 1;
    }
    if (first_half == second_half && stats != nullptr) {
        ++stats->ties;
    }
    return 0;
}

std::vector<std::uint8_t> manchester_decode(std::span<const double> half_amplitudes,
                                            DecodeStats* stats)
{
    if (half_amplitudes.size() % 2 != 0) {
        throw std::invalid_argument("half-amplitude count must be even");
    }
    std::vector<std::uint8_t> bits;
    bits.reserve(half_amplitudes.size() / 2);
    for (std::size_t i = 0; i + 1 < half_amplitudes.size(); i += 2) {
        bits.push_back(static_cast<std::uint8_t>(
            manchester_decode_pair(half_amplitudes[i], half_amplitudes[i + 1], stats)));
    }
    return bits;
}

}  // namespace lanwave::linecode
