#include "lanwave/psd.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace lanwave::dsp {

namespace {

// FFTW plan creation/destruction is not thread safe; execution is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

std::vector<double> hann_periodic(std::size_t n)
{
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                    static_cast<double>(n));
    }
    return w;
}

}  // namespace

WelchPsd::WelchPsd(std::size_t window_size) : window_size_(window_size)
{
    if (window_size < 20) {
        throw std::invalid_argument("analysis window must hold at least 20 samples");
    }
    segment_ = 2 * window_size / 5;
    hop_ = segment_ / 2;
    hann_ = hann_periodic(segment_);
    window_sum_ = std::accumulate(hann_.begin(), hann_.end(), 0.0);
    window_sq_sum_ = 0.0;
    for (double w : hann_) {
        window_sq_sum_ += w * w;
    }

    in_.resize(segment_);
    out_.resize(segment_);
    std::scoped_lock lock(planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(segment_),
                             reinterpret_cast<fftw_complex*>(in_.data()),
                             reinterpret_cast<fftw_complex*>(out_.data()), FFTW_FORWARD,
                             FFTW_ESTIMATE);
    if (plan_ == nullptr) {
        throw std::runtime_error("fftw plan creation failed");
    }
}

WelchPsd::~WelchPsd()
{
    if (plan_ != nullptr) {
        std::scoped_lock lock(planner_mutex());
        fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    }
}

void WelchPsd::estimate(std::span<const std::complex<float>> window, std::span<double> out) const
{
    if (window.size() != window_size_) {
        throw std::invalid_argument("window size mismatch: expected " +
                                    std::to_string(window_size_) + ", got " +
                                    std::to_string(window.size()));
    }
    if (out.size() != segment_) {
        throw std::invalid_argument("psd output size mismatch");
    }

    std::fill(out.begin(), out.end(), 0.0);
    const double norm = window_sum_ * window_sum_;
    std::size_t count = 0;
    for (std::size_t start = 0; start + segment_ <= window_size_; start += hop_) {
        for (std::size_t i = 0; i < segment_; ++i) {
            const auto s = window[start + i];
            in_[i] = {hann_[i] * static_cast<double>(s.real()),
                      hann_[i] * static_cast<double>(s.imag())};
        }
        fftw_execute(static_cast<fftw_plan>(plan_));
        for (std::size_t k = 0; k < segment_; ++k) {
            out[k] += std::norm(out_[k]) / norm;
        }
        ++count;
    }
    for (double& v : out) {
        v /= static_cast<double>(count);
    }
}

std::vector<double> WelchPsd::estimate(std::span<const std::complex<float>> window) const
{
    std::vector<double> out(segment_);
    estimate(window, out);
    return out;
}

std::size_t WelchPsd::bin_for(double freq_offset_hz, double sample_rate) const
{
    const double l = static_cast<double>(segment_);
    long k = std::lround(freq_offset_hz / sample_rate * l);
    const long n = static_cast<long>(segment_);
    k %= n;
    if (k < 0) {
        k += n;
    }
    return static_cast<std::size_t>(k);
}

double WelchPsd::bin_frequency(std::size_t bin, double sample_rate) const
{
    const double l = static_cast<double>(segment_);
    double f = static_cast<double>(bin) / l * sample_rate;
    if (f > sample_rate / 2.0) {
        f -= sample_rate;
    }
    return f;
}

double WelchPsd::tone_gain(double freq_offset_hz, double sample_rate) const
{
    const std::size_t k = bin_for(freq_offset_hz, sample_rate);
    const double bin_freq = static_cast<double>(k) / static_cast<double>(segment_) * sample_rate;
    // distance to the chosen bin in cycles/sample, wrapped
    double delta = (freq_offset_hz - bin_freq) / sample_rate;
    delta -= std::round(delta);
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < segment_; ++i) {
        const double phase = 2.0 * std::numbers::pi * delta * static_cast<double>(i);
        acc += hann_[i] * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return std::norm(acc) / (window_sum_ * window_sum_);
}

std::vector<double> real_periodogram(std::span<const double> series)
{
    const std::size_t n = series.size();
    if (n < 4) {
        throw std::invalid_argument("series too short for a periodogram");
    }
    const double mean = std::accumulate(series.begin(), series.end(), 0.0) /
                        static_cast<double>(n);
    const auto hann = hann_periodic(n);

    std::vector<std::complex<double>> in(n);
    std::vector<std::complex<double>> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        in[i] = {hann[i] * (series[i] - mean), 0.0};
    }
    fftw_plan plan = nullptr;
    {
        std::scoped_lock lock(planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
                                reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD,
                                FFTW_ESTIMATE);
    }
    if (plan == nullptr) {
        throw std::runtime_error("fftw plan creation failed");
    }
    fftw_execute(plan);
    {
        std::scoped_lock lock(planner_mutex());
        fftw_destroy_plan(plan);
    }

    std::vector<double> psd(n / 2 + 1);
    for (std::size_t k = 0; k < psd.size(); ++k) {
        psd[k] = std::norm(out[k]);
    }
    return psd;
}

}  // namespace lanwave::dsp
