#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lanwave {

// Complex baseband samples with capture metadata.
struct IqBuffer {
    std::vector<std::complex<float>> samples;
    double sample_rate = 2.4e6;
    double center_frequency_hz = 0.0;

    double duration_s() const
    {
        return static_cast<double>(samples.size()) / sample_rate;
    }
};

// cu8: interleaved unsigned 8-bit I,Q with 127.5 ~ zero (RTL-SDR native).
// cf32: interleaved little-endian 32-bit float I,Q.
enum class IqFormat { cu8, cf32 };

const char* to_string(IqFormat fmt);
IqFormat iq_format_from_string(const std::string& name);

struct IqMeta {
    double center_frequency_hz = 0.0;
    double sample_rate = 0.0;
    IqFormat format = IqFormat::cf32;
};

class IqFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::filesystem::path meta_path_for(const std::filesystem::path& iq_path);

// Writes the sample file plus a plain-text sidecar
// (center_frequency_hz=..., sample_rate=..., format=...).
void write_iq(const std::filesystem::path& path, const IqBuffer& buf, IqFormat fmt);
IqMeta read_meta(const std::filesystem::path& iq_path);
IqBuffer read_iq(const std::filesystem::path& path);

// Pull-based window source with blocking-read semantics: read() fills the
// whole span or reports end of stream (a trailing partial window is dropped).
class WindowSource {
public:
    virtual ~WindowSource() = default;
    virtual bool read(std::span<std::complex<float>> out) = 0;
};

class BufferWindowSource final : public WindowSource {
public:
    explicit BufferWindowSource(const IqBuffer& buf) : buf_(&buf) {}

    bool read(std::span<std::complex<float>> out) override
    {
        if (pos_ + out.size() > buf_->samples.size()) {
            return false;
        }
        std::copy_n(buf_->samples.begin() + static_cast<std::ptrdiff_t>(pos_), out.size(),
                    out.begin());
        pos_ += out.size();
        return true;
    }

    void reset() { pos_ = 0; }

private:
    const IqBuffer* buf_;
    std::size_t pos_ = 0;
};

// Streams windows straight from a cu8/cf32 file without loading it whole.
class IqFileWindowSource final : public WindowSource {
public:
    explicit IqFileWindowSource(const std::filesystem::path& path);

    const IqMeta& meta() const { return meta_; }
    bool read(std::span<std::complex<float>> out) override;

private:
    IqMeta meta_;
    std::ifstream file_;
    std::vector<std::uint8_t> raw_;
};

}  // namespace lanwave
