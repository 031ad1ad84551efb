#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace lanwave::dsp {

// Welch power spectral density over one analysis window: the window is split
// into Hann-tapered sub-segments of length 2N/5 at 50% overlap (four segments
// when N is a multiple of 5) and their periodograms are averaged.
//
// "Spectrum" scaling: a complex tone of amplitude A centered on bin k reads
// A^2 at bin k, and complex white noise of variance sigma^2 reads
// sigma^2 * sum(w^2) / sum(w)^2 on average in every bin.
class WelchPsd {
public:
    explicit WelchPsd(std::size_t window_size);
    ~WelchPsd();
    WelchPsd(const WelchPsd&) = delete;
    WelchPsd& operator=(const WelchPsd&) = delete;

    std::size_t window_size() const { return window_size_; }
    std::size_t segment_size() const { return segment_; }
    std::size_t bins() const { return segment_; }

    // window.size() must equal window_size(); out.size() must equal bins().
    void estimate(std::span<const std::complex<float>> window, std::span<double> out) const;
    std::vector<double> estimate(std::span<const std::complex<float>> window) const;

    // Bin nearest to the given baseband offset (negative offsets wrap).
    std::size_t bin_for(double freq_offset_hz, double sample_rate) const;
    // Frequency of bin center in Hz, in (-fs/2, fs/2].
    double bin_frequency(std::size_t bin, double sample_rate) const;

    // Response of a unit-amplitude tone at the given offset, read at the
    // nearest bin. 1.0 on-bin, less off-bin (scalloping).
    double tone_gain(double freq_offset_hz, double sample_rate) const;

    // Expected bin level for complex white noise of total variance sigma2.
    double noise_bin_mean(double sigma2) const { return sigma2 * window_sq_sum_ / (window_sum_ * window_sum_); }

    // Median-to-mean ratio of noise bins for this estimator (four Hann
    // segments, 50% overlap), measured once and pinned.
    static constexpr double kNoiseMedianToMean = 0.92;

private:
    std::size_t window_size_;
    std::size_t segment_;
    std::size_t hop_;
    std::vector<double> hann_;
    double window_sum_ = 0.0;
    double window_sq_sum_ = 0.0;
    void* plan_ = nullptr;  // fftw_plan
    mutable std::vector<std::complex<double>> in_;
    mutable std::vector<std::complex<double>> out_;
};

// Periodogram of a real series (mean removed, Hann tapered), for detecting
// periodic structure in traffic volumes. Returns bins 0..n/2 with frequency
// step 1/(n*dt).
std::vector<double> real_periodogram(std::span<const double> series);

}  // namespace lanwave::dsp
