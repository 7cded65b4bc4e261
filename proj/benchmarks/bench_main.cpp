// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "vibraverify/convert.hpp"
#include "vibraverify/pipeline.hpp"
#include "vibraverify/spectro.hpp"
#include "vibraverify/wearsim.hpp"

namespace {

using namespace vibraverify;

const Signal& utterance() {
  static const Signal s = synth_utterance(3, 11);
  return s;
}

void BM_StftMic(benchmark::State& state) {
  const auto params = StftParams::mic_defaults();
  for (auto _ : state) benchmark::DoNotOptimize(stft_power(utterance(), params));
}
BENCHMARK(BM_StftMic);

void BM_Convert(benchmark::State& state) {
  const Spectrogram mic = stft_power(utterance(), StftParams::mic_defaults());
  const ConversionParams params;
  for (auto _ : state) benchmark::DoNotOptimize(convert_spectrogram(mic, params));
}
BENCHMARK(BM_Convert);

void BM_SimulateAccel(benchmark::State& state) {
  const AccelModel model;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_accel(utterance(), model, 5));
}
BENCHMARK(BM_SimulateAccel);

void BM_Verify(benchmark::State& state) {
  const AccelTrace trace = simulate_accel(utterance(), AccelModel{}, 5);
  const VerifyConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(verify(utterance(), trace, config));
}
BENCHMARK(BM_Verify)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
