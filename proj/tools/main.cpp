// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#include <pthread.h>

#include <csignal>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vibraverify/accel.hpp"
#include "vibraverify/audio_io.hpp"
#include "vibraverify/config.hpp"
#include "vibraverify/convert.hpp"
#include "vibraverify/error.hpp"
#include "vibraverify/eval.hpp"
#include "vibraverify/pipeline.hpp"
#include "vibraverify/preprocess.hpp"
#include "vibraverify/random.hpp"
#include "vibraverify/scenario.hpp"
#include "vibraverify/service.hpp"
#include "vibraverify/spectro.hpp"
#include "vibraverify/sync.hpp"
#include "vibraverify/wearsim.hpp"

namespace fs = std::filesystem;
using namespace vibraverify;

namespace {

constexpr int kExitAccept = 0;
constexpr int kExitReject = 1;
constexpr int kExitError = 2;

VerifyConfig resolve_config(const std::string& path) {
  if (!path.empty()) return load_config(path);
  if (const char* env = std::getenv("VIBRAVERIFY_CONFIG"); env != nullptr && *env != '\0') {
    return load_config(env);
  }
  return {};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

std::span<const std::uint8_t> bytes_of(const std::string& s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

int exit_for(const std::string& verdict_json) {
  return verdict_json.find("\"verdict\":\"accept\"") != std::string::npos ? kExitAccept : kExitReject;
}

struct StftOptions {
  std::size_t n_fft = 0;
  std::size_t hop = 0;
  std::string window = "hann";

  void add(CLI::App* app) {
    app->add_option("--n-fft", n_fft, "Frame length (power of two)");
    app->add_option("--hop", hop, "Frame advance in samples");
    app->add_option("--window", window, "hann or rect");
  }

  StftParams resolve(StftParams defaults) const {
    if (n_fft != 0) defaults.n_fft = n_fft;
    if (hop != 0) defaults.hop = hop;
    defaults.window = window_from_string(window);
    defaults.validate();
    return defaults;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-domain voice command verification (microphone vs wearable accelerometer)"};
  app.require_subcommand(1);

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Score a microphone recording against an accelerometer trace");
  std::string wav_path, accel_path, config_path;
  bool details = false;
  verify_cmd->add_option("--wav", wav_path, "Microphone WAV")->required();
  verify_cmd->add_option("--accel", accel_path, "Accelerometer CSV (t,x,y,z)")->required();
  verify_cmd->add_option("--config", config_path, "Config JSON (default: $VIBRAVERIFY_CONFIG)");
  verify_cmd->add_flag("--details", details, "Print segments and the shift curve to stderr");

  // simulate
  auto* simulate_cmd = app.add_subcommand("simulate", "Generate trials from a scenario file");
  std::string scenario_path, out_dir;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  simulate_cmd->add_option("--scenario", scenario_path, "Scenario JSON array")->required();
  simulate_cmd->add_option("--out", out_dir, "Output directory")->required();
  simulate_cmd->add_option("--seed", seed, "Base seed");
  simulate_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Verify every trial of a manifest and report metrics");
  std::string manifest_path, roc_path, confusion_path, metrics_path;
  eval_cmd->add_option("--manifest", manifest_path, "manifest.jsonl")->required();
  eval_cmd->add_option("--config", config_path, "Config JSON (default: $VIBRAVERIFY_CONFIG)");
  eval_cmd->add_option("--roc", roc_path, "Write ROC CSV (eta,tpr,fpr)");
  eval_cmd->add_option("--confusion", confusion_path, "Write per-kind accept/reject CSV");
  eval_cmd->add_option("--metrics", metrics_path, "Also write the metrics JSON here");
  eval_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");

  // matrix
  auto* matrix_cmd = app.add_subcommand("matrix", "Word-by-word score matrix on the synthetic corpus");
  int words = kCorpusWords;
  std::string matrix_out;
  matrix_cmd->add_option("--words", words, "Number of corpus words")->check(CLI::Range(1, kCorpusWords));
  matrix_cmd->add_option("--seed", seed, "Base seed");
  matrix_cmd->add_option("--config", config_path, "Config JSON (default: $VIBRAVERIFY_CONFIG)");
  matrix_cmd->add_option("--out", matrix_out, "Write the matrix CSV here instead of stdout");
  matrix_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");

  // spectrogram
  auto* spec_cmd = app.add_subcommand("spectrogram", "Dump the power spectrogram of a WAV or accelerometer CSV");
  std::string dump_path;
  bool highpass = false;
  StftOptions stft_opts;
  auto* spec_wav = spec_cmd->add_option("--wav", wav_path, "Microphone WAV");
  auto* spec_acc = spec_cmd->add_option("--accel", accel_path, "Accelerometer CSV (energy-selected axis)");
  spec_wav->excludes(spec_acc);
  spec_cmd->add_flag("--highpass", highpass, "High-pass the accelerometer axis first");
  spec_cmd->add_option("--out", dump_path, "Dump file")->required();
  stft_opts.add(spec_cmd);

  // convert
  auto* convert_cmd = app.add_subcommand("convert", "Dump the aliased (converted) microphone spectrogram");
  ConversionParams conversion;
  bool no_amp = false;
  double amp_db = -40.0;
  StftOptions conv_stft;
  convert_cmd->add_option("--wav", wav_path, "Microphone WAV")->required();
  convert_cmd->add_option("--out", dump_path, "Dump file")->required();
  convert_cmd->add_option("--f-ws", conversion.f_ws_hz, "Accelerometer sample rate");
  convert_cmd->add_option("--band-low", conversion.band_low_hz, "Lowest selected frequency");
  convert_cmd->add_option("--band-high", conversion.band_high_hz, "Highest selected frequency");
  convert_cmd->add_option("--amp-threshold-db", amp_db, "Amplitude selection in dBFS");
  convert_cmd->add_flag("--no-amp-threshold", no_amp, "Disable amplitude selection");
  convert_cmd->add_option("--target-bins", conversion.target_bins, "Output rows");
  convert_cmd->add_option("--n-shift-range", conversion.n_shift_range, "Shift search half-width (0 = auto)");
  conv_stft.add(convert_cmd);

  // serve / client
  auto* serve_cmd = app.add_subcommand("serve", "Run the verification service");
  std::string host = "127.0.0.1";
  std::uint16_t port = 7070;
  serve_cmd->add_option("--port", port, "TCP port");
  serve_cmd->add_option("--host", host, "IPv4 address to bind");
  serve_cmd->add_option("--config", config_path, "Config JSON (default: $VIBRAVERIFY_CONFIG)");

  auto* client_cmd = app.add_subcommand("client", "Send one session to a running service");
  std::string session_id;
  client_cmd->add_option("--host", host, "Service address");
  client_cmd->add_option("--port", port, "Service port");
  client_cmd->add_option("--wav", wav_path, "Microphone WAV")->required();
  client_cmd->add_option("--accel", accel_path, "Accelerometer CSV")->required();
  client_cmd->add_option("--session-id", session_id, "Session id (random when omitted)");
  client_cmd->add_option("--seed", seed, "Seed for the random session id");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*verify_cmd) {
      const VerifyConfig config = resolve_config(config_path);
      const Signal mic = load_wav(wav_path);
      const AccelTrace accel = load_accel_csv(accel_path);
      const VerifyResult result = verify_detailed(mic, accel, config);
      if (details) {
        std::cerr << "mic segment " << result.mic_segment.start_s << ".." << result.mic_segment.end_s
                  << (result.mic_detected ? "" : " (not detected)") << "\naccel segment "
                  << result.accel_segment.start_s << ".." << result.accel_segment.end_s
                  << (result.accel_detected ? "" : " (fallback)") << "\n";
        for (const auto& p : result.report.curve) std::cerr << "shift " << p.shift_s << " corr " << p.corr << "\n";
      }
      const std::string json = verdict_json(result.report, config_hash(config));
      std::cout << json << "\n";
      return exit_for(json);
    }
    if (*simulate_cmd) {
      const auto entries = run_scenario(load_scenario(scenario_path), out_dir, seed, threads);
      std::cout << (fs::path(out_dir) / "manifest.jsonl").string() << " (" << entries.size()
                << " trials)\n";
      return 0;
    }
    if (*eval_cmd) {
      const VerifyConfig config = resolve_config(config_path);
      const auto entries = read_manifest(manifest_path);
      const auto records = evaluate_manifest(entries, config, threads);
      const auto summary = compute_roc(records);
      const std::string metrics = metrics_json(summary, records, config.similarity.eta);
      std::cout << metrics;
      if (!metrics_path.empty()) write_text(metrics_path, metrics);
      if (!roc_path.empty()) write_text(roc_path, roc_csv(summary));
      if (!confusion_path.empty()) write_text(confusion_path, confusion_csv(records));
      return 0;
    }
    if (*matrix_cmd) {
      const VerifyConfig config = resolve_config(config_path);
      std::vector<CorpusEntry> corpus;
      for (int w = 0; w < words; ++w) {
        const Signal audio = synth_utterance(w, mix_seed(seed, static_cast<std::uint64_t>(w)));
        corpus.push_back({audio, simulate_accel(audio, AccelModel{}, mix_seed(seed, 1000 + w))});
      }
      const std::string csv = matrix_csv(cross_correlation_matrix(corpus, config, threads));
      if (matrix_out.empty()) {
        std::cout << csv;
      } else {
        write_text(matrix_out, csv);
      }
      return 0;
    }
    if (*spec_cmd) {
      if (wav_path.empty() == accel_path.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "give exactly one of --wav or --accel");
      }
      Spectrogram spec;
      if (!wav_path.empty()) {
        spec = stft_power(load_wav(wav_path), stft_opts.resolve(StftParams::mic_defaults()));
      } else {
        Signal axis = select_axis(regularize(load_accel_csv(accel_path)));
        if (highpass) axis = highpass_accel(axis);
        spec = stft_power(axis, stft_opts.resolve(StftParams::accel_defaults()), SpectrogramOrigin::kAccel);
      }
      write_spectrogram_dump(dump_path, spec);
      std::cout << dump_path << " (" << spec.cols() << " x " << spec.bins() << ")\n";
      return 0;
    }
    if (*convert_cmd) {
      conversion.amp_threshold_db = no_amp ? std::nullopt : std::optional<double>(amp_db);
      conversion.validate();
      const Spectrogram mic = stft_power(load_wav(wav_path), conv_stft.resolve(StftParams::mic_defaults()));
      const Spectrogram out = convert_spectrogram(mic, conversion);
      write_spectrogram_dump(dump_path, out);
      std::cout << dump_path << " (" << out.cols() << " x " << out.bins() << ")\n";
      return 0;
    }
    if (*serve_cmd) {
      sigset_t stop_signals;
      sigemptyset(&stop_signals);
      sigaddset(&stop_signals, SIGINT);
      sigaddset(&stop_signals, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);
      VerifyServer server(resolve_config(config_path), host, port);
      server.start();
      std::cout << "listening on " << host << ":" << server.port() << std::endl;
      int received = 0;
      sigwait(&stop_signals, &received);
      server.stop();
      return 0;
    }
    if (*client_cmd) {
      WakeMessage wake;
      if (session_id.empty()) {
        Rng rng(seed);
        session_id = make_session_id(rng);
      }
      wake.session_id = session_id;
      wake.va_clock_ms = 0;
      const auto wav = read_file_bytes(wav_path);
      const auto csv = read_file_bytes(accel_path);
      const std::string reply =
          request_verdict(host, port, bytes_of(format_wake_message(wake)), wav, csv);
      std::cout << reply << "\n";
      if (reply.find("\"error\"") != std::string::npos) return kExitError;
      return exit_for(reply);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
