// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit when any
// criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "properties.hpp"
#include "test_support.hpp"
#include "vibraverify/accel.hpp"
#include "vibraverify/audio_io.hpp"
#include "vibraverify/convert.hpp"
#include "vibraverify/eval.hpp"
#include "vibraverify/pipeline.hpp"
#include "vibraverify/preprocess.hpp"
#include "vibraverify/scenario.hpp"
#include "vibraverify/similarity.hpp"
#include "vibraverify/spectro.hpp"
#include "vibraverify/wearsim.hpp"

using namespace vibraverify;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::filesystem::path work_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "vibraverify_acceptance" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// 1. Fold against a literal sweep over N for every integer tone.
Outcome aliasing_oracle() {
  const auto t0 = Clock::now();
  int exact = 0;
  for (int f = 1; f <= 4000; ++f) {
    double best = std::numeric_limits<double>::infinity();
    for (int n = 0; n <= f / 200 + 1; ++n) best = std::min(best, std::abs(f - 200.0 * n));
    if (fold_frequency(f, 200.0) == best) ++exact;
  }
  const double t = seconds_since(t0);
  return {exact == 4000 && t < 1.0, fmt("%d/4000 tones exact, %.3f s (limit 1 s)", exact, t)};
}

// 2. Converted microphone sweep against the simulated wearable sweep.
Outcome chirp_agreement() {
  const auto t0 = Clock::now();
  // 50 Hz/s keeps the sweep inside one wearable frame to a few bins.
  const double duration = 52.0;
  const Signal audio = vvtest::chirp(700.0, 3300.0, 0.5, duration, 8000.0);
  const AccelTrace trace = simulate_accel(audio, AccelModel{}, 2024);

  ConversionParams conv;
  const Spectrogram mic = convert_spectrogram(stft_power(audio, StftParams::mic_defaults()), conv);
  const VerifyConfig defaults;
  const Signal axis = highpass_accel(select_axis(regularize(trace)), defaults.accel.highpass_hz);
  const Spectrogram acc = stft_power(axis, StftParams::accel_defaults(), SpectrogramOrigin::kAccel);
  const Spectrogram acc_on_mic = resample_columns(acc, mic.t0_s(), mic.col_step_s(), mic.cols());

  // The wearable cannot show images the high-pass removes; voiced columns are
  // those with converted content whose image sits at least one bin above the cutoff.
  const double min_image_hz = defaults.accel.highpass_hz + acc.bin_hz();
  std::size_t voiced = 0;
  std::size_t matched = 0;
  for (std::size_t c = 0; c < mic.cols(); ++c) {
    const double t = mic.col_time_s(c);
    if (t < 0.0 || t > duration) continue;
    const auto col = mic.column(c);
    if (*std::max_element(col.begin(), col.end()) <= 0.0) continue;
    const double image = fold_frequency(700.0 + 2600.0 / duration * t, conv.f_ws_hz);
    if (image < min_image_hz) continue;
    ++voiced;
    const auto a = static_cast<long>(column_argmax(mic, c));
    const auto b = static_cast<long>(column_argmax(acc_on_mic, c));
    if (std::labs(a - b) <= 1) ++matched;
  }
  const double t = seconds_since(t0);
  const double rate = voiced ? static_cast<double>(matched) / static_cast<double>(voiced) : 0.0;
  return {voiced > 0 && rate >= 0.95 && t < 5.0,
          fmt("%zu/%zu voiced columns within 1 bin (%.1f%%, need 95%%), sweep %.0f Hz/s, %.2f s "
              "(limit 5 s)",
              matched, voiced, 100.0 * rate, 2600.0 / duration, t)};
}

// 3. Self pairs dominate cross pairs on the 20-word corpus.
Outcome diagonal_dominance() {
  const std::uint64_t seed = 1;
  std::vector<CorpusEntry> corpus;
  for (int w = 0; w < kCorpusWords; ++w) {
    const Signal audio = synth_utterance(w, mix_seed(seed, static_cast<std::uint64_t>(w)));
    corpus.push_back({audio, simulate_accel(audio, AccelModel{}, mix_seed(seed, 1000 + w))});
  }
  const auto m = cross_correlation_matrix(corpus);
  int strict = 0;
  int within = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kCorpusWords; ++i) {
    double cross = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < kCorpusWords; ++j) {
      if (j != i) cross = std::max(cross, m[i][j]);
    }
    strict += m[i][i] > cross;
    within += m[i][i] >= cross - 0.05;
    worst_margin = std::min(worst_margin, m[i][i] - cross);
  }
  const bool ok = strict >= 19 && within == kCorpusWords;
  return {ok, fmt("strict %d/20 (need 19), within 0.05 %d/20 (need 20), smallest margin %.3f", strict,
                  within, worst_margin)};
}

// 4. Mixed attack corpus.
Outcome attack_rejection() {
  const auto t0 = Clock::now();
  const auto records = parse_scenario(
      R"([{"kind":"normal","count":50},{"kind":"replay","count":50},)"
      R"( {"kind":"hidden_command","count":50},{"kind":"ultrasound","count":50}])");
  const auto dir = work_dir("mixed");
  run_scenario(records, dir, 7);
  const auto entries = read_manifest(dir / "manifest.jsonl");
  const auto evals = evaluate_manifest(entries);
  const MetricsSummary m = compute_roc(evals);
  int ultra = 0;
  int ultra_rejected = 0;
  for (const auto& r : evals) {
    if (r.kind != AttackKind::kUltrasound) continue;
    ++ultra;
    ultra_rejected += !r.accepted;
  }
  const double t = seconds_since(t0);
  const double eta = VerifyConfig{}.similarity.eta;
  const bool ok = evals.size() == 200 && m.auc() >= 0.95 && ultra == 50 && ultra_rejected == 50 && t < 60.0;
  return {ok, fmt("AUC %.4f (need 0.95), ultrasound rejected %d/%d at eta %.2f, TPR %.2f FPR %.3f, %.1f s "
                  "(limit 60 s)",
                  m.auc(), ultra_rejected, ultra, eta, m.tpr_at(eta), m.fpr_at(eta), t)};
}

// 5. Trigger lag robustness on normal trials.
Outcome sync_robustness() {
  const int trials = 100;
  Rng rng(99);
  double sum0 = 0.0;
  double sum1 = 0.0;
  int shift_ok = 0;
  int under_5 = 0;
  double worst = 0.0;
  const double column = StftParams::mic_defaults().hop / 8000.0;
  for (int i = 0; i < trials; ++i) {
    const auto seed = mix_seed(5, static_cast<std::uint64_t>(i));
    const Signal legit = synth_utterance(i % kCorpusWords, mix_seed(seed, 100));
    const double lag = rng.uniform(-0.040, 0.040);
    AttackSpec spec;
    spec.lag_s = 0.0;
    const Trial base = generate_attack(spec, legit, seed);
    spec.lag_s = lag;
    const Trial moved = generate_attack(spec, legit, seed);
    const auto r0 = verify(base.mic, base.accel);
    const auto r1 = verify(moved.mic, moved.accel);
    sum0 += r0.peak_corr;
    sum1 += r1.peak_corr;
    const double rel = std::abs(r1.peak_corr - r0.peak_corr) / r0.peak_corr;
    under_5 += rel < 0.05;
    worst = std::max(worst, rel);
    shift_ok += std::abs(r1.best_shift_s - lag) <= column + 1e-9;
  }
  const double mean_rel = std::abs(sum1 - sum0) / sum0;
  const bool ok = mean_rel < 0.05 && shift_ok == trials;
  return {ok, fmt("mean normal score %.4f -> %.4f (%.2f%% change, need < 5%%); per trial < 5%%: %d/%d, "
                  "worst %.1f%%; shift within one column (%.0f ms): %d/%d",
                  sum0 / trials, sum1 / trials, 100.0 * mean_rel, under_5, trials, 100.0 * worst,
                  1000.0 * column, shift_ok, trials)};
}

// 6. Metric correctness.
Outcome metric_correctness() {
  const MetricsSummary hand({0.8, 0.6}, {0.7, 0.2});
  bool fnr_ok = true;
  Rng rng(6);
  std::vector<double> legit(300), attack(300);
  for (double& v : legit) v = rng.uniform();
  for (double& v : attack) v = rng.uniform() * 0.8;
  const MetricsSummary random(legit, attack);
  for (const auto* m : {&hand, &random}) {
    for (const auto& p : m->roc()) fnr_ok = fnr_ok && (m->fnr_at(p.eta) + m->tpr_at(p.eta) == 1.0);
  }
  const bool grid = hand.roc().size() == 101 && random.roc().size() == 101;
  const bool ok = hand.auc() == 0.75 && fnr_ok && grid;
  return {ok, fmt("hand case AUC %.17g (want 0.75), FNR + TPR = 1 at every eta: %s, ROC points %zu", hand.auc(),
                  fnr_ok ? "yes" : "no", hand.roc().size())};
}

// 7. Invariant suite.
Outcome invariant_suite() {
  const auto t0 = Clock::now();
  const auto results = vvtest::run_invariant_suite();
  std::size_t passed = 0;
  std::size_t min_cases = std::numeric_limits<std::size_t>::max();
  std::string failures;
  for (const auto& r : results) {
    min_cases = std::min(min_cases, r.cases);
    if (r.ok() && r.cases >= 100) {
      ++passed;
    } else {
      failures += "\n      " + r.name + ": " + r.first_failure;
    }
  }
  return {passed == results.size(),
          fmt("%zu/%zu properties hold, at least %zu cases each, %.2f s", passed, results.size(), min_cases,
              seconds_since(t0)) + failures};
}

int run_cli(const std::string& args) {
#ifdef VIBRAVERIFY_CLI_PATH
  const std::string cmd = std::string("\"") + VIBRAVERIFY_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#else
  (void)args;
  return -1;
#endif
}

// 8. CLI verify latency on a two-second command.
Outcome cli_latency() {
  const auto dir = work_dir("latency");
  // two phrases back to back, cut to exactly 2 s of command, 0.5 s quiet on each side
  const Signal a = synth_utterance(0, 1);
  const Signal b = synth_utterance(1, 1);
  std::vector<double> command;
  for (const Signal* s : {&a, &b}) {
    command.insert(command.end(), s->samples().begin() + 4000, s->samples().end() - 4000);
  }
  command.resize(16000);
  std::vector<double> x(4000, 0.0);
  x.insert(x.end(), command.begin(), command.end());
  x.resize(x.size() + 4000, 0.0);
  const Signal mic = vvtest::add(Signal(x, 8000.0), ambient_noise(3.0, 8000.0, -60.0, 3));
  write_wav(dir / "command.wav", mic, WavEncoding::kPcm16);
  write_accel_csv(dir / "command.csv", simulate_accel(mic, AccelModel{}, 4));

  const std::string args = "verify --wav \"" + (dir / "command.wav").string() + "\" --accel \"" +
                           (dir / "command.csv").string() + "\"";
  std::vector<double> times;
  int code = -1;
  for (int i = 0; i < 3; ++i) {
    const auto t0 = Clock::now();
    code = run_cli(args);
    times.push_back(seconds_since(t0));
  }
  std::sort(times.begin(), times.end());
  const double median = times[1];
  return {code == 0 && median < 1.0,
          fmt("median wall time %.3f s over 3 runs (limit 1 s), exit code %d", median, code)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"aliasing oracle", aliasing_oracle},
      {"conversion vs simulator sweep", chirp_agreement},
      {"diagonal dominance", diagonal_dominance},
      {"attack rejection", attack_rejection},
      {"sync robustness", sync_robustness},
      {"metric correctness", metric_correctness},
      {"numerical invariants", invariant_suite},
      {"cli verify latency", cli_latency},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] criterion %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
