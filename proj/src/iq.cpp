#include "lanwave/iq.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <sstream>

namespace lanwave {

static_assert(std::endian::native == std::endian::little,
              "cf32 files are little-endian; big-endian hosts need byte swaps");

const char* to_string(IqFormat fmt)
{
    return fmt == IqFormat::cu8 ? "cu8" : "cf32";
}

IqFormat iq_format_from_string(const std::string& name)
{
    if (name == "cu8") {
        return IqFormat::cu8;
    }
    if (name == "cf32") {
        return IqFormat::cf32;
    }
    throw IqFormatError("unknown IQ format '" + name + "' (expected cu8 or cf32)");
}

std::filesystem::path meta_path_for(const std::filesystem::path& iq_path)
{
    std::filesystem::path p = iq_path;
    p += ".meta";
    return p;
}

namespace {

std::uint8_t to_cu8(float v)
{
    const float scaled = v * 127.5f + 127.5f;
    const float clamped = std::clamp(scaled, 0.0f, 255.0f);
    return static_cast<std::uint8_t>(std::lround(clamped));
}

float from_cu8(std::uint8_t v)
{
    return (static_cast<float>(v) - 127.5f) / 127.5f;
}

}  // namespace

void write_iq(const std::filesystem::path& path, const IqBuffer& buf, IqFormat fmt)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IqFormatError("cannot open " + path.string() + " for writing");
    }
    if (fmt == IqFormat::cu8) {
        std::vector<std::uint8_t> raw;
        raw.reserve(buf.samples.size() * 2);
        for (const auto& s : buf.samples) {
            raw.push_back(to_cu8(s.real()));
            raw.push_back(to_cu8(s.imag()));
        }
        out.write(reinterpret_cast<const char*>(raw.data()),
                  static_cast<std::streamsize>(raw.size()));
    } else {
        out.write(reinterpret_cast<const char*>(buf.samples.data()),
                  static_cast<std::streamsize>(buf.samples.size() * sizeof(std::complex<float>)));
    }
    if (!out) {
        throw IqFormatError("short write to " + path.string());
    }

    std::ofstream meta(meta_path_for(path));
    if (!meta) {
        throw IqFormatError("cannot open " + meta_path_for(path).string() + " for writing");
    }
    meta.precision(12);
    meta << "center_frequency_hz=" << buf.center_frequency_hz << '\n'
         << "sample_rate=" << buf.sample_rate << '\n'
         << "format=" << to_string(fmt) << '\n';
}

IqMeta read_meta(const std::filesystem::path& iq_path)
{
    const auto mpath = meta_path_for(iq_path);
    std::ifstream in(mpath);
    if (!in) {
        throw IqFormatError("missing sidecar metadata file " + mpath.string());
    }
    IqMeta meta;
    bool have_freq = false;
    bool have_rate = false;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            continue;
        }
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        if (key == "center_frequency_hz") {
            meta.center_frequency_hz = std::stod(value);
            have_freq = true;
        } else if (key == "sample_rate") {
            meta.sample_rate = std::stod(value);
            have_rate = true;
        } else if (key == "format") {
            meta.format = iq_format_from_string(value);
        }
    }
    if (!have_freq || !have_rate || !(meta.sample_rate > 0)) {
        throw IqFormatError("sidecar " + mpath.string() +
                            " must define center_frequency_hz and a positive sample_rate");
    }
    return meta;
}

IqBuffer read_iq(const std::filesystem::path& path)
{
    const IqMeta meta = read_meta(path);
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IqFormatError("cannot open " + path.string());
    }
    in.seekg(0, std::ios::end);
    const auto bytes = static_cast<std::size_t>(in.tellg());
    in.seekg(0);

    IqBuffer buf;
    buf.sample_rate = meta.sample_rate;
    buf.center_frequency_hz = meta.center_frequency_hz;

    if (meta.format == IqFormat::cu8) {
        std::vector<std::uint8_t> raw(bytes);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(bytes));
        const std::size_t n = raw.size() / 2;
        buf.samples.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            buf.samples.emplace_back(from_cu8(raw[2 * i]), from_cu8(raw[2 * i + 1]));
        }
    } else {
        const std::size_t n = bytes / sizeof(std::complex<float>);
        buf.samples.resize(n);
        in.read(reinterpret_cast<char*>(buf.samples.data()),
                static_cast<std::streamsize>(n * sizeof(std::complex<float>)));
    }
    if (!in) {
        throw IqFormatError("short read from " + path.string());
    }
    return buf;
}

IqFileWindowSource::IqFileWindowSource(const std::filesystem::path& path)
    : meta_(read_meta(path)), file_(path, std::ios::binary)
{
    if (!file_) {
        throw IqFormatError("cannot open " + path.string());
    }
}

bool IqFileWindowSource::read(std::span<std::complex<float>> out)
{
    if (meta_.format == IqFormat::cf32) {
        file_.read(reinterpret_cast<char*>(out.data()),
                   static_cast<std::streamsize>(out.size() * sizeof(std::complex<float>)));
        return file_.gcount() ==
               static_cast<std::streamsize>(out.size() * sizeof(std::complex<float>));
    }
    raw_.resize(out.size() * 2);
    file_.read(reinterpret_cast<char*>(raw_.data()), static_cast<std::streamsize>(raw_.size()));
    if (file_.gcount() != static_cast<std::streamsize>(raw_.size())) {
        return false;
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = {from_cu8(raw_[2 * i]), from_cu8(raw_[2 * i + 1])};
    }
    return true;
}

}  // namespace lanwave
