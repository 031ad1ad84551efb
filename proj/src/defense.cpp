#include "lanwave/defense.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "lanwave/psd.hpp"

namespace lanwave::defense {

const char* to_string(Alert::Kind kind)
{
    return kind == Alert::Kind::link_toggling ? "link-toggling" : "ook-traffic";
}

std::vector<Alert> detect_link_toggling(std::span<const LinkEvent> events,
                                        const LinkDetectorConfig& cfg)
{
    for (std::size_t i = 1; i < events.size(); ++i) {
        if (events[i].t < events[i - 1].t) {
            throw std::invalid_argument("link events must be sorted by time");
        }
    }

    std::vector<Alert> alerts;
    bool in_episode = false;
    Alert current;
    std::size_t peak = 0;

    std::size_t lo = 0;
    for (std::size_t hi = 0; hi < events.size(); ++hi) {
        while (events[hi].t - events[lo].t > cfg.window_s) {
            ++lo;
        }
        const std::size_t changes = hi - lo + 1;
        if (changes > cfg.max_changes) {
            if (!in_episode) {
                in_episode = true;
                current = Alert{};
                current.kind = Alert::Kind::link_toggling;
                current.t_begin = events[lo].t;
                peak = changes;
            }
            peak = std::max(peak, changes);
            current.t_end = events[hi].t;
        } else if (in_episode && events[hi].t - current.t_end > cfg.window_s) {
            current.score = static_cast<double>(peak) / static_cast<double>(cfg.max_changes);
            std::ostringstream ev;
            ev << peak << " link state changes within " << cfg.window_s << " s";
            current.evidence = ev.str();
            alerts.push_back(current);
            in_episode = false;
        }
    }
    if (in_episode) {
        current.score = static_cast<double>(peak) / static_cast<double>(cfg.max_changes);
        std::ostringstream ev;
        ev << peak << " link state changes within " << cfg.window_s << " s";
        current.evidence = ev.str();
        alerts.push_back(current);
    }
    return alerts;
}

std::vector<Alert> detect_ook_traffic(std::span<const PacketRecord> trace,
                                      const OokDetectorConfig& cfg)
{
    if (trace.empty()) {
        throw InsufficientDataError("traffic trace is empty");
    }
    const double duration = trace.back().t;
    const auto nbins = static_cast<std::size_t>(std::ceil(duration / cfg.bin_s)) + 1;
    if (nbins < 16) {
        throw InsufficientDataError("traffic trace spans fewer than 16 bins");
    }

    std::vector<double> series(nbins, 0.0);
    for (const auto& rec : trace) {
        const auto idx = static_cast<std::size_t>(rec.t / cfg.bin_s);
        series[std::min(idx, nbins - 1)] += static_cast<double>(rec.length);
    }

    const auto psd = dsp::real_periodogram(series);
    const double df = 1.0 / (static_cast<double>(nbins) * cfg.bin_s);

    // Smooth so the broad hump of a random-data on-off pattern is not
    // penalized against a line spectrum.
    const auto half = static_cast<std::size_t>(std::max(0.0, cfg.smooth_hz / (2.0 * df)));
    std::vector<double> smooth(psd.size());
    for (std::size_t k = 0; k < psd.size(); ++k) {
        const std::size_t a = k > half ? k - half : 0;
        const std::size_t b = std::min(psd.size() - 1, k + half);
        double acc = 0.0;
        for (std::size_t i = a; i <= b; ++i) {
            acc += psd[i];
        }
        smooth[k] = acc / static_cast<double>(b - a + 1);
    }

    const auto k_lo = static_cast<std::size_t>(std::ceil(cfg.f_lo_hz / df));
    const auto k_hi = std::min(psd.size() - 1,
                               static_cast<std::size_t>(std::floor(cfg.f_hi_hz / df)));
    if (k_lo >= k_hi) {
        throw InsufficientDataError("trace too short to resolve the chip-rate range");
    }

    std::size_t peak_bin = k_lo;
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
        if (smooth[k] > smooth[peak_bin]) {
            peak_bin = k;
        }
    }
    std::vector<double> band(smooth.begin() + static_cast<std::ptrdiff_t>(k_lo),
                             smooth.begin() + static_cast<std::ptrdiff_t>(k_hi) + 1);
    auto mid = band.begin() + static_cast<std::ptrdiff_t>(band.size() / 2);
    std::nth_element(band.begin(), mid, band.end());
    const double median = std::max(*mid, 1e-300);
    const double score = smooth[peak_bin] / median;

    // Gate on inter-arrival burstiness: on-off keying leaves long off gaps
    // between dense bursts, uniform streaming does not.
    double gap_cv = 0.0;
    if (trace.size() > 2) {
        double mean = 0.0;
        for (std::size_t i = 1; i < trace.size(); ++i) {
            mean += trace[i].t - trace[i - 1].t;
        }
        mean /= static_cast<double>(trace.size() - 1);
        double var = 0.0;
        for (std::size_t i = 1; i < trace.size(); ++i) {
            const double d = trace[i].t - trace[i - 1].t - mean;
            var += d * d;
        }
        var /= static_cast<double>(trace.size() - 1);
        gap_cv = mean > 0 ? std::sqrt(var) / mean : 0.0;
    }

    std::vector<Alert> alerts;
    if (score >= cfg.min_score && gap_cv >= cfg.min_gap_cv) {
        Alert alert;
        alert.kind = Alert::Kind::ook_traffic;
        alert.t_begin = trace.front().t;
        alert.t_end = trace.back().t;
        alert.score = score;
        alert.peak_hz = static_cast<double>(peak_bin) * df;
        std::ostringstream ev;
        ev << trace.size() << " packets; periodicity " << alert.peak_hz << " Hz, score " << score
           << ", gap cv " << gap_cv;
        alert.evidence = ev.str();
        alerts.push_back(alert);
    }
    return alerts;
}

JamResult jam(double duration_s, const JamProfile& profile, Clock& clock, tx::PacketSink& sink,
              std::uint64_t seed)
{
    if (duration_s < 0) {
        throw std::invalid_argument("jam duration must be non-negative");
    }
    if (profile.min_gap_s <= 0 || profile.max_gap_s < profile.min_gap_s ||
        profile.min_size == 0 || profile.max_size < profile.min_size) {
        throw std::invalid_argument("invalid jam profile bounds");
    }

    JamResult result;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> gap_dist(profile.min_gap_s, profile.max_gap_s);
    std::uniform_int_distribution<std::size_t> size_dist(profile.min_size, profile.max_size);

    const double t0 = clock.now();
    std::vector<std::uint8_t> payload(profile.max_size, 0x00);
    double t = t0;
    for (;;) {
        t += gap_dist(rng);
        if (t - t0 >= duration_s) {
            break;
        }
        clock.sleep_until(t);
        const std::size_t size = size_dist(rng);
        if (!sink.send(std::span<const std::uint8_t>(payload.data(), size))) {
            result.aborted = true;
            return result;
        }
        result.trace.push_back({clock.now(), size});
    }
    clock.sleep_until(t0 + duration_s);
    return result;
}

}  // namespace lanwave::defense
