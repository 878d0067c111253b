#include "cli.hpp"

#include <omp.h>
#include <signal.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "zerobas/dataio.hpp"
#include "zerobas/metrics.hpp"
#include "zerobas/pipeline.hpp"
#include "zerobas/spatial.hpp"
#include "zerobas/vocoder.hpp"
#include "zerobas/vocoder_server.hpp"

namespace zerobas::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct BinauralizeArgs {
  std::string input, trajectory, output;
  PipelineConfig config;
  std::string vocoder = "spectral-gate";
  double vocoder_timeout_s = 30.0;
  int bit_depth = 32;
  std::size_t fft_size = 1024, hop = 256, mel_bins = 128;
  double f_min = 20.0, f_max = 0.0, mel_floor = 1e-5;
};

struct EvaluateArgs {
  std::string reference, hypothesis, report;
  bool align = false;
  double max_lag_ms = 100.0;
  std::size_t fft_size = 1024, hop = 256;
};

struct DatasetArgs {
  std::string recordings, manifest, out;
  std::string frame = "x-forward-y-left";
  double ear_offset = kDefaultEarOffset;
};

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const StageError*>(&e) || dynamic_cast<const VocoderError*>(&e)) return kVocoder;
  if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const ParseError*>(&e)) return kIo;
  if (dynamic_cast<const fs::filesystem_error*>(&e)) return kIo;
  return kUsage;
}

/// Runs fn(i) for i in [0, count) on up to `jobs` threads; rethrows the
/// lowest-index failure.
template <typename Fn>
void for_each_parallel(std::size_t count, int jobs, Fn fn) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads =
      jobs > 0 ? static_cast<std::size_t>(jobs) : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < std::min(threads, count); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<std::string> wav_names(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".wav")
      names.push_back(entry.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

int cmd_binauralize(const BinauralizeArgs& a, int jobs, std::ostream& out, std::ostream& err) {
  PipelineConfig config = a.config;
  config.vocoder = VocoderSelector::parse(a.vocoder);
  config.validate();
  if (config.swap_order && !config.enable_gtw && !config.enable_as)
    err << "warning: --swap-order has no effect with --no-gtw --no-as\n";
  const BitDepth depth = parse_bit_depth(a.bit_depth);
  const StftConfig stft_cfg{a.fft_size, a.hop, Padding::kReflect};
  stft_cfg.validate();
  MelConfig mel_cfg;
  mel_cfg.mel_bins = a.mel_bins;
  mel_cfg.f_min = a.f_min;
  mel_cfg.f_max = a.f_max;
  mel_cfg.floor = a.mel_floor;

  if (jobs > 0) omp_set_num_threads(jobs);
  const Waveform mono = read_wav(a.input);
  if (mono.channels() != 1)
    throw InvalidInput(a.input + ": input must be mono, found " + std::to_string(mono.channels()) +
                       " channels");
  if (mono.frames() == 0) throw InvalidInput(a.input + ": input has no samples");
  mel_cfg.validate(mono.sample_rate());
  const PoseTrack track = read_trajectory_csv(fs::path(a.trajectory));
  const SampleTrajectory traj = interpolate_track(track, mono.sample_rate(), mono.frames());

  std::unique_ptr<DenoisingVocoder> vocoder;
  if (config.vocoder.kind == VocoderSelector::Kind::kExternal) {
    auto ep = VocoderEndpoint::parse(config.vocoder.endpoint);
    ep.timeout = std::chrono::milliseconds(static_cast<long long>(a.vocoder_timeout_s * 1000.0));
    vocoder = std::make_unique<ExternalVocoder>(ep);
  } else {
    vocoder = make_vocoder(config.vocoder);
  }

  const StereoPair result = binauralize(mono, traj, *vocoder, config, stft_cfg, mel_cfg);
  write_wav(a.output, result.to_interleaved(), depth);
  out << "wrote " << a.output << " (" << result.frames() << " frames, " << result.sample_rate()
      << " Hz, " << a.bit_depth << "-bit)\n";
  return kOk;
}

json report_json(const MetricReport& r) {
  auto channel = [](const ChannelMetrics& c) {
    return json{{"wave_l2", c.wave_l2}, {"amplitude_l2", c.amplitude_l2}, {"mrstft", c.mrstft}};
  };
  return json{{"utterance", r.utterance}, {"wave_l2", r.wave_l2},
              {"amplitude_l2", r.amplitude_l2}, {"phase_l2", r.phase_l2},
              {"mrstft", r.mrstft}, {"left", channel(r.left)}, {"right", channel(r.right)}};
}

int cmd_evaluate(const EvaluateArgs& a, int jobs, std::ostream& out, std::ostream& err) {
  const auto refs = wav_names(a.reference);
  const auto hyps = wav_names(a.hypothesis);
  std::vector<std::string> missing, extra;
  std::set_difference(refs.begin(), refs.end(), hyps.begin(), hyps.end(), std::back_inserter(missing));
  std::set_difference(hyps.begin(), hyps.end(), refs.begin(), refs.end(), std::back_inserter(extra));
  if (!missing.empty() || !extra.empty()) {
    for (const auto& m : missing) err << "error: missing hypothesis for " << m << '\n';
    for (const auto& x : extra) err << "error: no reference for hypothesis " << x << '\n';
    return kUsage;
  }
  if (refs.empty()) throw InvalidInput("no .wav files in " + a.reference);

  MetricConfig mcfg;
  mcfg.stft = {a.fft_size, a.hop, Padding::kReflect};
  mcfg.stft.validate();
  std::vector<MetricReport> reports(refs.size());
  std::vector<std::ptrdiff_t> lags(refs.size(), 0);
  const bool pooled = jobs != 1 && refs.size() > 1;
  for_each_parallel(refs.size(), jobs, [&](std::size_t i) {
    // One level of parallelism: utterances across the pool, or kernels within one.
    if (pooled) omp_set_num_threads(1);
    const auto gt_w = read_wav(fs::path(a.reference) / refs[i]);
    const auto syn_w = read_wav(fs::path(a.hypothesis) / refs[i]);
    if (gt_w.channels() != 2 || syn_w.channels() != 2)
      throw InvalidInput(refs[i] + ": evaluation expects stereo files");
    if (gt_w.sample_rate() != syn_w.sample_rate())
      throw InvalidInput(refs[i] + ": reference and hypothesis sample rates differ");
    const auto gt = StereoPair::from_interleaved(gt_w);
    const auto syn = StereoPair::from_interleaved(syn_w);
    std::pair<StereoPair, StereoPair> pair;
    if (a.align) {
      const auto max_lag = static_cast<std::size_t>(std::lround(a.max_lag_ms * 1e-3 * gt.sample_rate()));
      pair = align_pairs(gt, syn, max_lag, &lags[i]);
    } else {
      pair = trim_to_common(gt, syn);
    }
    reports[i] = evaluate_pair(pair.first, pair.second, mcfg, refs[i]);
  });

  const MetricReport mean = corpus_mean(reports);
  for (const auto& r : reports) write_key_value(out, r);
  write_key_value(out, mean);

  if (!a.report.empty()) {
    json doc;
    doc["schema"] = "zerobas-metrics/1";
    doc["stft"] = {{"fft_size", mcfg.stft.fft_size}, {"hop", mcfg.stft.hop}};
    doc["mrstft_ffts"] = mcfg.mrstft_ffts;
    doc["aligned"] = a.align;
    json utts = json::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
      json u = report_json(reports[i]);
      if (a.align) u["lag_samples"] = lags[i];
      utts.push_back(std::move(u));
    }
    doc["utterances"] = std::move(utts);
    doc["corpus"] = report_json(mean);
    doc["corpus"]["count"] = reports.size();
    std::ofstream f(a.report, std::ios::trunc);
    if (!f) throw IoError("cannot write " + a.report);
    f << doc.dump(2) << '\n';
  }
  return kOk;
}

std::string segment_stem(const SoundEvent& ev) {
  return ev.recording_id + "_" + std::to_string(std::llround(ev.onset_s * 1000.0)) + "ms";
}

int cmd_dataset_prep(const DatasetArgs& a, int jobs, std::ostream& out, std::ostream&) {
  const CoordinateFrame frame = parse_coordinate_frame(a.frame);
  if (!(a.ear_offset > 0.0)) throw InvalidInput("--ear-offset must be positive");
  const auto events = read_manifest(fs::path(a.manifest));
  std::vector<std::string> ids;
  for (const auto& ev : events)
    if (std::find(ids.begin(), ids.end(), ev.recording_id) == ids.end()) ids.push_back(ev.recording_id);

  const auto [ear_l_native, ear_r_native] = ears_from_head_pose({{}, {}, a.ear_offset});
  const Vec3 ear_l = to_frame(ear_l_native, frame);
  const Vec3 ear_r = to_frame(ear_r_native, frame);
  fs::create_directories(a.out);

  // Validate every recording before writing anything.
  std::vector<std::vector<Segment>> per_recording(ids.size());
  std::vector<std::size_t> bad_rows;
  std::string bad_text;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const Waveform rec = read_wav(fs::path(a.recordings) / (ids[i] + ".wav"));
    try {
      per_recording[i] = cut_segments(rec, events, ids[i]);
    } catch (const ManifestError& e) {
      bad_rows.insert(bad_rows.end(), e.rows().begin(), e.rows().end());
      bad_text += std::string(" ") + e.what();
    }
  }
  if (!bad_rows.empty()) throw ManifestError(bad_rows, "invalid manifest rows:" + bad_text);

  std::vector<const Segment*> segments;
  for (const auto& group : per_recording)
    for (const auto& s : group) segments.push_back(&s);
  std::set<std::string> stems;
  for (const auto* s : segments)
    if (!stems.insert(segment_stem(s->event)).second)
      throw ManifestError({s->event.line}, "duplicate output name " + segment_stem(s->event));

  for_each_parallel(segments.size(), jobs, [&](std::size_t i) {
    const Segment& s = *segments[i];
    const std::string stem = segment_stem(s.event);
    write_wav(fs::path(a.out) / (stem + ".wav"), s.audio, BitDepth::kFloat32);
    const Vec3 src = to_frame(spherical_to_cartesian(s.position), frame);
    write_trajectory_csv(fs::path(a.out) / (stem + ".csv"), PoseTrack::constant(src, ear_l, ear_r));
  });
  out << "wrote " << segments.size() << " segment(s) to " << a.out << '\n';
  return kOk;
}

int cmd_vocoder_echo(const std::string& host, int port, std::ostream& out) {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  VocoderServer server(VocoderServer::encoded(&VocoderServer::echo), host,
                       static_cast<std::uint16_t>(port));
  out << "listening on " << host << ':' << server.port() << std::endl;
  int sig = 0;
  sigwait(&set, &sig);
  server.stop();
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zero-shot mono-to-binaural speech synthesis and evaluation", "zerobas"};
  app.set_version_flag("--version", std::string("zerobas ") + kVersion);
  app.set_config("--config", "", "Config file (INI/TOML, one [section] per subcommand)")
      ->envname("ZEROBAS_CONFIG");
  app.require_subcommand(1);
  app.fallthrough();
  int jobs = 0;
  app.add_option("--jobs,-j", jobs, "Worker threads (default: logical cores)")
      ->check(CLI::NonNegativeNumber);

  BinauralizeArgs bin;
  auto* b = app.add_subcommand("binauralize", "Render a mono WAV to binaural along a trajectory");
  b->add_option("--input", bin.input, "Mono input WAV")->required();
  b->add_option("--trajectory", bin.trajectory, "Trajectory CSV")->required();
  b->add_option("--output", bin.output, "Stereo output WAV")->required();
  b->add_option("--iterations", bin.config.iterations, "Vocoder refinement iterations N")
      ->capture_default_str();
  b->add_option("--noise-level", bin.config.noise_level, "Noise-level index k passed to the vocoder")
      ->capture_default_str();
  b->add_option("--vocoder", bin.vocoder, "identity | spectral-gate | external:<host>:<port>")
      ->capture_default_str();
  b->add_option("--vocoder-timeout", bin.vocoder_timeout_s, "External vocoder timeout in seconds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  b->add_flag("!--no-gtw", bin.config.enable_gtw, "Disable geometric time warping");
  b->add_flag("!--no-as", bin.config.enable_as, "Disable amplitude scaling");
  b->add_flag("--swap-order", bin.config.swap_order, "Refine the mono input before GTW/AS");
  b->add_option("--speed-of-sound", bin.config.speed_of_sound, "Speed of sound in m/s")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  b->add_option("--bit-depth", bin.bit_depth, "Output WAV depth")
      ->check(CLI::IsMember({16, 24, 32}))
      ->capture_default_str();
  b->add_option("--fft-size", bin.fft_size, "Conditioning STFT size")->capture_default_str();
  b->add_option("--hop", bin.hop, "Conditioning STFT hop")->capture_default_str();
  b->add_option("--mel-bins", bin.mel_bins, "Log-mel bands")->capture_default_str();
  b->add_option("--f-min", bin.f_min, "Lowest mel edge in Hz")->capture_default_str();
  b->add_option("--f-max", bin.f_max, "Highest mel edge in Hz (0 = Nyquist)")->capture_default_str();
  b->add_option("--mel-floor", bin.mel_floor, "Constant added before the log")->capture_default_str();

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "Score hypothesis WAVs against references");
  e->add_option("--reference", ev.reference, "Directory of ground-truth stereo WAVs")->required();
  e->add_option("--hypothesis", ev.hypothesis, "Directory of synthesized stereo WAVs")->required();
  e->add_flag("--align", ev.align, "Cross-correlation alignment before scoring");
  e->add_option("--max-lag-ms", ev.max_lag_ms, "Alignment search range")->capture_default_str();
  e->add_option("--report", ev.report, "Write a JSON report here");
  e->add_option("--fft-size", ev.fft_size, "STFT size for amplitude/phase")->capture_default_str();
  e->add_option("--hop", ev.hop, "STFT hop for amplitude/phase")->capture_default_str();

  DatasetArgs ds;
  auto* d = app.add_subcommand("dataset-prep", "Cut annotated events into segment/trajectory pairs");
  d->add_option("--recordings", ds.recordings, "Directory of <recording_id>.wav")->required();
  d->add_option("--manifest", ds.manifest, "Event manifest CSV")->required();
  d->add_option("--out", ds.out, "Output directory")->required();
  d->add_option("--frame", ds.frame, "x-forward-y-left | x-right-y-forward")->capture_default_str();
  d->add_option("--ear-offset", ds.ear_offset, "Half inter-ear distance in meters")
      ->capture_default_str();

  std::string echo_host = "127.0.0.1";
  int echo_port = 0;
  auto* v = app.add_subcommand("vocoder-echo", "Serve the echo backend over the vocoder protocol");
  v->add_option("--host", echo_host, "IPv4 listen address")->capture_default_str();
  v->add_option("--port", echo_port, "TCP port (0 = ephemeral)")->capture_default_str();

  // omp_set_num_threads is sticky for the calling thread; restore it for in-process callers.
  struct OmpRestore {
    int saved = omp_get_max_threads();
    ~OmpRestore() { omp_set_num_threads(saved); }
  } omp_restore;

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << "zerobas " << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& pe) {
    err << "error: " << pe.what() << '\n';
    return kUsage;
  }

  try {
    if (b->parsed()) return cmd_binauralize(bin, jobs, out, err);
    if (e->parsed()) return cmd_evaluate(ev, jobs, out, err);
    if (d->parsed()) return cmd_dataset_prep(ds, jobs, out, err);
    if (v->parsed()) return cmd_vocoder_echo(echo_host, echo_port, out);
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return exit_code_for(ex);
  }
  return kUsage;
}

}  // namespace zerobas::cli
