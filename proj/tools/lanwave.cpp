// Command-line front end for the Ethernet-emanation covert-channel toolkit:
// transmit, synthesize, receive, evaluate, detect, jam. Stages compose through
// files (packet traces, link-event logs, IQ captures) so each piece can be
// tested alone or swapped for real captures.
//
// Exit codes: 0 success, 1 usage/config error, 2 no-data outcome, 3 runtime
// failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lanwave/channel.hpp"
#include "lanwave/defense.hpp"
#include "lanwave/demod.hpp"
#include "lanwave/framing.hpp"
#include "lanwave/harness.hpp"
#include "lanwave/iq.hpp"
#include "lanwave/linecode.hpp"
#include "lanwave/trace.hpp"
#include "lanwave/tx.hpp"

namespace {

using namespace lanwave;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNoData = 2;
constexpr int kExitRuntime = 3;

struct HostPort {
    std::string host = "127.0.0.1";
    std::uint16_t port = 9;
};

HostPort parse_host_port(const std::string& s)
{
    const auto colon = s.rfind(':');
    if (colon == std::string::npos || colon + 1 >= s.size()) {
        throw std::invalid_argument("expected HOST:PORT, got '" + s + "'");
    }
    HostPort hp;
    hp.host = s.substr(0, colon);
    hp.port = static_cast<std::uint16_t>(std::stoul(s.substr(colon + 1)));
    return hp;
}

void write_tx_report(const std::filesystem::path& path, const tx::TxReport& report)
{
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out.precision(9);
    out << std::fixed;
    out << "method=" << report.method << '\n';
    out << "chip_duration_s=" << report.chip_duration_s << '\n';
    out << "chips=" << report.chips.size() << '\n';
    out << "packets=" << report.packets.size() << '\n';
    out << "events=" << report.events.size() << '\n';
    out << "t_begin=" << report.t_begin << '\n';
    out << "t_end=" << report.t_end << '\n';
    out << "aborted=" << (report.aborted ? 1 : 0) << '\n';
    if (!report.error.empty()) {
        out << "error=" << report.error << '\n';
    }
    for (const auto& chip : report.chips) {
        out << "chip." << chip.index << '=' << (chip.on ? "on" : "off") << ' ' << chip.t_start
            << ' ' << chip.t_end << ' ' << chip.packets << '\n';
    }
}

std::vector<std::uint8_t> read_message_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string payload_hex(const framing::Frame& frame)
{
    std::string out;
    char buf[3];
    for (std::uint8_t byte : frame.payload) {
        std::snprintf(buf, sizeof(buf), "%02x", byte);
        out += buf;
    }
    return out;
}

// ---------------------------------------------------------------- tx -------

struct TxOptions {
    std::string method = "udp";
    double rate_bps = 10.0;
    std::string message;
    std::string message_file;
    std::string record_path;
    std::string report_path;
    std::string events_path;
    std::string preset = "pc";
    std::string transition = "0-100";
    double pps = 100.0;
    std::size_t payload_size = 1480;
    std::string send_dest;
    bool realtime = false;
    std::string link_cmd;
    int on_speed = 100;
    int off_speed = 0;  // 0 = link down
    double link_timeout = 30.0;
};

int run_tx(const TxOptions& opt)
{
    std::vector<std::uint8_t> message;
    if (!opt.message.empty()) {
        message.assign(opt.message.begin(), opt.message.end());
    } else if (!opt.message_file.empty()) {
        message = read_message_file(opt.message_file);
    }
    if (message.empty()) {
        std::cerr << "tx: empty message (use --message or --in)\n";
        return kExitUsage;
    }

    const auto frames = framing::chunk_message(message);
    std::vector<std::uint8_t> bits;
    for (const auto& frame : frames) {
        const auto fb = frame.to_bits();
        bits.insert(bits.end(), fb.begin(), fb.end());
    }
    const auto chips = linecode::manchester_encode(bits, 1.0 / (2.0 * opt.rate_bps));

    const bool wants_real_time = opt.realtime || !opt.send_dest.empty() || !opt.link_cmd.empty();
    SimulatedClock sim_clock;
    SteadyClock steady_clock;
    Clock& clock =
        wants_real_time ? static_cast<Clock&>(steady_clock) : static_cast<Clock&>(sim_clock);

    tx::TxReport report;
    if (opt.method == "udp") {
        tx::UdpBurstConfig cfg;
        cfg.packets_per_second = opt.pps;
        cfg.payload_size = opt.payload_size;

        tx::RecordingSink recorder(clock);
        std::optional<tx::UdpSink> udp;
        if (!opt.send_dest.empty()) {
            const auto hp = parse_host_port(opt.send_dest);
            cfg.dest_host = hp.host;
            cfg.dest_port = hp.port;
            udp.emplace(hp.host, hp.port);
        }
        if (udp) {
            tx::TeeSink tee(recorder, *udp);
            report = tx::modulate_udp(chips, cfg, clock, tee);
        } else {
            report = tx::modulate_udp(chips, cfg, clock, recorder);
        }
        if (!opt.record_path.empty()) {
            save_trace(opt.record_path, recorder.records());
        }
    } else if (opt.method == "toggle") {
        const auto profile = tx::toggle_profile(opt.preset, opt.transition);
        const double max_rate = tx::max_feasible_bitrate(profile);
        if (opt.rate_bps > max_rate) {
            std::cerr << "tx: rate " << opt.rate_bps << " bit/s is infeasible for profile "
                      << opt.preset << ":" << opt.transition << " (max " << max_rate
                      << " bit/s; limiting latency "
                      << std::max(profile.up_latency_s, profile.down_latency_s) << " s)\n";
            return kExitUsage;
        }
        const std::optional<int> off =
            opt.off_speed > 0 ? std::optional<int>(opt.off_speed) : std::nullopt;
        if (!opt.link_cmd.empty()) {
            tx::ExternalCommandLinkController controller(opt.link_cmd, profile.up_latency_s,
                                                         profile.down_latency_s, opt.link_timeout);
            report = tx::modulate_toggle(chips, controller, clock, opt.on_speed, off);
        } else {
            tx::SimulatedLinkController controller(profile, clock);
            report = tx::modulate_toggle(chips, controller, clock, opt.on_speed, off);
            if (!opt.events_path.empty()) {
                save_events(opt.events_path, controller.events());
            }
        }
    } else {
        std::cerr << "tx: unknown method '" << opt.method << "'\n";
        return kExitUsage;
    }

    if (!opt.report_path.empty()) {
        write_tx_report(opt.report_path, report);
    }
    std::cout << "frames=" << frames.size() << " chips=" << chips.chips.size()
              << " duration_s=" << (report.t_end - report.t_begin)
              << " packets=" << report.packets.size() << " events=" << report.events.size()
              << '\n';
    if (report.aborted) {
        std::cerr << "tx: aborted: " << report.error << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

// ---------------------------------------------------------- simulate -------

struct SimulateOptions {
    std::string trace_path;
    std::string events_path;
    std::string out_path;
    std::string format = "cf32";
    std::string preset = "pc";
    double snr_db = std::numeric_limits<double>::infinity();
    bool no_noise = false;
    std::uint64_t seed = 1;
    double sample_rate = 0.0;  // 0 = preset default
    std::size_t window = 0;    // 0 = preset default
    double offset_hz = -1.0;   // <0 = preset default
    double amplitude = 0.0;    // 0 = preset default
    double hold_s = 0.01;
    double duration_s = 0.0;  // 0 = derive from activity
    int on_speed = 100;
    std::string interference_path;
    double pulse_s = 0.005;
};

channel::ChannelParams simulate_params(const SimulateOptions& opt)
{
    channel::ChannelParams params = channel::device_preset(opt.preset);
    const double absolute = params.absolute_carrier_hz();
    if (opt.offset_hz >= 0) {
        params.carrier_offset_hz = opt.offset_hz;
        params.center_frequency_hz = absolute - opt.offset_hz;
    }
    if (opt.sample_rate > 0) {
        params.sample_rate = opt.sample_rate;
    }
    if (opt.window > 0) {
        params.analysis_window = opt.window;
    }
    if (opt.amplitude > 0) {
        params.on_amplitude = opt.amplitude;
    }
    params.snr_db = opt.no_noise ? std::numeric_limits<double>::infinity() : opt.snr_db;
    params.seed = opt.seed;
    return params;
}

int run_simulate(const SimulateOptions& opt)
{
    std::vector<channel::Interval> intervals;
    double duration = opt.duration_s;
    if (!opt.trace_path.empty()) {
        const auto trace = load_trace(opt.trace_path);
        if (trace.empty()) {
            std::cerr << "simulate: trace " << opt.trace_path << " is empty\n";
            return kExitNoData;
        }
        intervals = channel::traffic_intervals(trace, opt.hold_s);
        if (duration <= 0) {
            duration = intervals.back().t1;
        }
    } else if (!opt.events_path.empty()) {
        tx::TxReport pseudo;
        pseudo.method = "toggle";
        pseudo.events = load_events(opt.events_path);
        pseudo.on_speed_mbps = opt.on_speed;
        if (pseudo.events.empty()) {
            std::cerr << "simulate: event log " << opt.events_path << " is empty\n";
            return kExitNoData;
        }
        pseudo.t_end = duration > 0 ? duration : pseudo.events.back().t + 1.0;
        intervals = channel::emission_intervals(pseudo);
        if (duration <= 0) {
            duration = pseudo.t_end;
        }
    } else {
        std::cerr << "simulate: need --trace or --events\n";
        return kExitUsage;
    }

    std::vector<channel::Interval> interference;
    if (!opt.interference_path.empty()) {
        interference = channel::traffic_intervals(load_trace(opt.interference_path), opt.pulse_s);
    }

    const auto params = simulate_params(opt);
    const auto buf = channel::synthesize(intervals, duration, params, interference);
    write_iq(opt.out_path, buf, iq_format_from_string(opt.format));
    std::cout << "samples=" << buf.samples.size() << " sample_rate=" << buf.sample_rate
              << " center_frequency_hz=" << buf.center_frequency_hz << " format=" << opt.format
              << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- rx -------

struct RxOptions {
    std::string in_path;
    double rate_bps = 10.0;
    std::string preset = "pc";
    double freq_hz = 0.0;    // 0 = preset absolute carrier
    std::size_t window = 0;  // 0 = sample_rate / 400
    double threshold = 0.7;
    int band_bins = 0;
    std::string report_path;
};

int run_rx(const RxOptions& opt)
{
    IqFileWindowSource source(opt.in_path);
    const auto& meta = source.meta();

    demod::DemodConfig cfg;
    cfg.target_freq_hz =
        opt.freq_hz > 0 ? opt.freq_hz : channel::device_preset(opt.preset).absolute_carrier_hz();
    cfg.center_frequency_hz = meta.center_frequency_hz;
    cfg.sample_rate = meta.sample_rate;
    cfg.bit_time_s = 1.0 / opt.rate_bps;
    cfg.window_size = opt.window > 0
                          ? opt.window
                          : static_cast<std::size_t>(std::llround(meta.sample_rate / 400.0));
    cfg.enable_threshold = opt.threshold;
    cfg.band_halfwidth_bins = opt.band_bins;
    cfg.validate();

    const auto report = demod::demodulate(source, cfg);
    if (!opt.report_path.empty()) {
        std::ofstream out(opt.report_path);
        demod::write_report(out, report);
    }

    const auto frames = demod::frames_of(report);
    for (const auto& frame : frames) {
        std::cout << payload_hex(frame) << '\n';
    }
    return frames.empty() ? kExitNoData : kExitOk;
}

// ---------------------------------------------------------- evaluate -------

struct EvaluateOptions {
    std::string preset = "pc";
    std::string method = "udp";
    std::vector<double> rates{1.0, 5.0, 10.0};
    std::vector<double> snrs{5.0, 13.0, 24.0};
    std::size_t bits = 1000;
    std::uint64_t seed = 1;
    double sample_rate = 24000.0;
    std::size_t window = 60;
    double offset_hz = 10e3;
    std::string transition = "0-100";
    std::string format = "table";
    std::string out_path;
};

int run_evaluate(const EvaluateOptions& opt)
{
    harness::ExperimentSpec spec;
    spec.preset = opt.preset;
    spec.method = opt.method;
    spec.bit_rates_bps = opt.rates;
    spec.snr_points_db = opt.snrs;
    spec.bits_per_point = opt.bits;
    spec.seed = opt.seed;
    spec.sample_rate = opt.sample_rate;
    spec.window_size = opt.window;
    spec.carrier_offset_hz = opt.offset_hz;
    spec.toggle_transition = opt.transition;
    spec.validate();

    const auto report = harness::run_experiment(spec);
    const auto csv = harness::render_csv(report);
    if (opt.format == "csv") {
        std::cout << csv;
    } else {
        std::cout << harness::render_text(report);
    }
    if (!opt.out_path.empty()) {
        std::ofstream out(opt.out_path);
        if (!out) {
            throw std::runtime_error("cannot open " + opt.out_path + " for writing");
        }
        out << csv;
    }
    return kExitOk;
}

// ------------------------------------------------------------- detect ------

struct DetectOptions {
    std::string link_path;
    std::string traffic_path;
    double window_s = 60.0;
    std::size_t max_changes = 5;
    double bin_s = 0.01;
    double min_score = 10.0;
    double min_gap_cv = 0.5;
};

int run_detect(const DetectOptions& opt)
{
    std::vector<defense::Alert> alerts;
    if (!opt.link_path.empty()) {
        defense::LinkDetectorConfig cfg;
        cfg.window_s = opt.window_s;
        cfg.max_changes = opt.max_changes;
        alerts = defense::detect_link_toggling(load_events(opt.link_path), cfg);
    } else if (!opt.traffic_path.empty()) {
        defense::OokDetectorConfig cfg;
        cfg.bin_s = opt.bin_s;
        cfg.min_score = opt.min_score;
        cfg.min_gap_cv = opt.min_gap_cv;
        alerts = defense::detect_ook_traffic(load_trace(opt.traffic_path), cfg);
    } else {
        std::cerr << "detect: need --link or --traffic\n";
        return kExitUsage;
    }

    for (const auto& alert : alerts) {
        std::cout << "ALERT " << defense::to_string(alert.kind) << " t=[" << alert.t_begin << ","
                  << alert.t_end << "] score=" << alert.score;
        if (alert.kind == defense::Alert::Kind::ook_traffic) {
            std::cout << " peak_hz=" << alert.peak_hz;
        }
        std::cout << " | " << alert.evidence << '\n';
    }
    return alerts.empty() ? kExitNoData : kExitOk;
}

// ---------------------------------------------------------------- jam ------

struct JamOptions {
    double duration_s = 10.0;
    std::uint64_t seed = 1;
    std::string record_path;
    std::string send_dest;
    bool realtime = false;
    defense::JamProfile profile;
};

int run_jam(const JamOptions& opt)
{
    const bool wants_real_time = opt.realtime || !opt.send_dest.empty();
    SimulatedClock sim_clock;
    SteadyClock steady_clock;
    Clock& clock =
        wants_real_time ? static_cast<Clock&>(steady_clock) : static_cast<Clock&>(sim_clock);

    tx::RecordingSink recorder(clock);
    std::optional<tx::UdpSink> udp;
    if (!opt.send_dest.empty()) {
        const auto hp = parse_host_port(opt.send_dest);
        udp.emplace(hp.host, hp.port);
    }

    defense::JamResult result;
    if (udp) {
        tx::TeeSink tee(recorder, *udp);
        result = defense::jam(opt.duration_s, opt.profile, clock, tee, opt.seed);
    } else {
        result = defense::jam(opt.duration_s, opt.profile, clock, recorder, opt.seed);
    }

    if (!opt.record_path.empty()) {
        save_trace(opt.record_path, result.trace);
    }
    std::cout << "packets=" << result.trace.size() << " duration_s=" << opt.duration_s << '\n';
    if (result.aborted) {
        std::cerr << "jam: aborted: packet sink failure\n";
        return kExitRuntime;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Software modem and analysis toolkit for the Ethernet-cable "
                 "emanation covert channel"};
    app.require_subcommand(1);

    TxOptions txo;
    auto* tx_cmd = app.add_subcommand("tx", "Modulate a message into network activity");
    tx_cmd->add_option("--method", txo.method, "udp | toggle")->default_val("udp");
    tx_cmd->add_option("--rate", txo.rate_bps, "bit rate in bit/s")->default_val(10.0);
    tx_cmd->add_option("--message", txo.message, "inline message bytes");
    tx_cmd->add_option("--in", txo.message_file, "message file");
    tx_cmd->add_option("--record", txo.record_path, "write packet trace here (udp)");
    tx_cmd->add_option("--events", txo.events_path, "write link event log here (toggle)");
    tx_cmd->add_option("--report", txo.report_path, "write transmit report here");
    tx_cmd->add_option("--profile", txo.preset, "device profile: pc | laptop | embedded");
    tx_cmd->add_option("--transition", txo.transition, "toggle speed pair, e.g. 0-100");
    tx_cmd->add_option("--pps", txo.pps, "packets per second during on-chips");
    tx_cmd->add_option("--payload-size", txo.payload_size, "datagram payload bytes (<= 1480)");
    tx_cmd->add_option("--send", txo.send_dest, "actually send UDP to HOST:PORT (real time)");
    tx_cmd->add_flag("--realtime", txo.realtime, "drive the wall clock even when only recording");
    tx_cmd->add_option("--link-cmd", txo.link_cmd,
                       "external link control command: <cmd> up|down|speed <mbps>");
    tx_cmd->add_option("--on-speed", txo.on_speed, "link speed during on-chips (Mbps)");
    tx_cmd->add_option("--off-speed", txo.off_speed,
                       "link speed during off-chips (Mbps, 0 = link down)");
    tx_cmd->add_option("--link-timeout", txo.link_timeout, "external command timeout (s)");

    SimulateOptions simo;
    auto* sim_cmd =
        app.add_subcommand("simulate", "Synthesize an IQ capture from recorded activity");
    sim_cmd->add_option("--trace", simo.trace_path, "packet trace input (udp activity)");
    sim_cmd->add_option("--events", simo.events_path, "link event log input (toggle activity)");
    sim_cmd->add_option("--out", simo.out_path, "output IQ file")->required();
    sim_cmd->add_option("--format", simo.format, "cu8 | cf32")->default_val("cf32");
    sim_cmd->add_option("--preset", simo.preset, "device preset: pc | laptop | embedded");
    sim_cmd->add_option("--snr", simo.snr_db, "in-band SNR in dB (omit for noiseless)");
    sim_cmd->add_flag("--no-noise", simo.no_noise, "force a noiseless capture");
    sim_cmd->add_option("--seed", simo.seed, "noise seed");
    sim_cmd->add_option("--sample-rate", simo.sample_rate, "capture sample rate");
    sim_cmd->add_option("--window", simo.window, "analysis window the SNR is defined at");
    sim_cmd->add_option("--offset", simo.offset_hz, "carrier offset from the tuner (Hz)");
    sim_cmd->add_option("--amplitude", simo.amplitude, "carrier-on amplitude");
    sim_cmd->add_option("--hold", simo.hold_s, "seconds each datagram keeps the band lit");
    sim_cmd->add_option("--duration", simo.duration_s, "capture length (derived if omitted)");
    sim_cmd->add_option("--on-speed", simo.on_speed, "toggle: speed that lights the band");
    sim_cmd->add_option("--interference", simo.interference_path, "jammer trace to superimpose");
    sim_cmd->add_option("--pulse", simo.pulse_s, "seconds each interference datagram lasts");

    RxOptions rxo;
    auto* rx_cmd = app.add_subcommand("rx", "Demodulate frames from an IQ capture");
    rx_cmd->add_option("--in", rxo.in_path, "IQ file (cu8/cf32 with .meta sidecar)")->required();
    rx_cmd->add_option("--rate", rxo.rate_bps, "bit rate in bit/s")->default_val(10.0);
    rx_cmd->add_option("--preset", rxo.preset, "device preset naming the target band");
    rx_cmd->add_option("--freq", rxo.freq_hz, "absolute target band (Hz), overrides --preset");
    rx_cmd->add_option("--window", rxo.window, "FFT window size in samples");
    rx_cmd->add_option("--threshold", rxo.threshold, "enable correlation threshold");
    rx_cmd->add_option("--band-bins", rxo.band_bins, "sum +-N bins around the tone");
    rx_cmd->add_option("--report", rxo.report_path, "write key=value demod report here");

    EvaluateOptions evo;
    auto* eval_cmd = app.add_subcommand("evaluate", "Run a seeded BER/FER grid");
    eval_cmd->add_option("--preset", evo.preset, "device preset");
    eval_cmd->add_option("--method", evo.method, "udp | toggle");
    eval_cmd->add_option("--rates", evo.rates, "bit rates (bit/s)")->delimiter(',');
    eval_cmd->add_option("--snrs", evo.snrs, "SNR points (dB)")->delimiter(',');
    eval_cmd->add_option("--bits", evo.bits, "bits per grid point (>= 1000)");
    eval_cmd->add_option("--seed", evo.seed, "master seed");
    eval_cmd->add_option("--sample-rate", evo.sample_rate, "channel sample rate");
    eval_cmd->add_option("--window", evo.window, "analysis window size");
    eval_cmd->add_option("--offset", evo.offset_hz, "carrier offset (Hz)");
    eval_cmd->add_option("--transition", evo.transition, "toggle speed pair");
    eval_cmd->add_option("--format", evo.format, "table | csv")->default_val("table");
    eval_cmd->add_option("--out", evo.out_path, "also write CSV here");

    DetectOptions deto;
    auto* det_cmd = app.add_subcommand("detect", "Scan logs for covert-channel activity");
    det_cmd->add_option("--link", deto.link_path, "link event log to scan");
    det_cmd->add_option("--traffic", deto.traffic_path, "packet trace to scan");
    det_cmd->add_option("--window", deto.window_s, "link: sliding window (s)");
    det_cmd->add_option("--max-changes", deto.max_changes, "link: allowed changes per window");
    det_cmd->add_option("--bin", deto.bin_s, "traffic: volume bin (s)");
    det_cmd->add_option("--min-score", deto.min_score, "traffic: periodicity score threshold");
    det_cmd->add_option("--min-gap-cv", deto.min_gap_cv,
                        "traffic: minimum inter-arrival burstiness");

    JamOptions jamo;
    auto* jam_cmd = app.add_subcommand("jam", "Generate randomized masking traffic");
    jam_cmd->add_option("--duration", jamo.duration_s, "seconds to run")->required();
    jam_cmd->add_option("--seed", jamo.seed, "randomness seed");
    jam_cmd->add_option("--record", jamo.record_path, "write the jam trace here");
    jam_cmd->add_option("--send", jamo.send_dest, "actually send UDP to HOST:PORT (real time)");
    jam_cmd->add_flag("--realtime", jamo.realtime, "drive the wall clock even when recording");
    jam_cmd->add_option("--gap-min", jamo.profile.min_gap_s, "minimum inter-packet gap (s)");
    jam_cmd->add_option("--gap-max", jamo.profile.max_gap_s, "maximum inter-packet gap (s)");
    jam_cmd->add_option("--size-min", jamo.profile.min_size, "minimum datagram size");
    jam_cmd->add_option("--size-max", jamo.profile.max_size, "maximum datagram size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (tx_cmd->parsed()) {
            return run_tx(txo);
        }
        if (sim_cmd->parsed()) {
            return run_simulate(simo);
        }
        if (rx_cmd->parsed()) {
            return run_rx(rxo);
        }
        if (eval_cmd->parsed()) {
            return run_evaluate(evo);
        }
        if (det_cmd->parsed()) {
            return run_detect(deto);
        }
        if (jam_cmd->parsed()) {
            return run_jam(jamo);
        }
    } catch (const tx::InfeasibleRateError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const channel::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const demod::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}
