// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "properties.hpp"
#include "unit.hpp"
#include "vibraverify/config.hpp"
#include "vibraverify/pipeline.hpp"
#include "vibraverify/similarity.hpp"
#include "vibraverify/wearsim.hpp"

using namespace vibraverify;

namespace {

Spectrogram from_rows(const std::vector<std::vector<double>>& cols, double step = 0.064) {
  Spectrogram s(cols.size(), cols.front().size(), step, 3.125, SpectrogramOrigin::kConverted);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (std::size_t b = 0; b < cols[c].size(); ++b) s.at(c, b) = cols[c][b];
  }
  return s;
}

// A Gaussian ridge that climbs half a row per column.
Spectrogram ridge(std::size_t cols, std::size_t bins, double step, SpectrogramOrigin origin) {
  Spectrogram s(cols, bins, step, 3.125, origin);
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t b = 0; b < bins; ++b) {
      const double d = static_cast<double>(b) - 2.0 - 0.5 * static_cast<double>(c);
      s.at(c, b) = std::exp(-d * d / 18.0);
    }
  }
  return s;
}

// Mic view of accel columns [lead + delay, lead + delay + cols).
Spectrogram mic_view(const Spectrogram& acc, std::size_t lead, long delay, std::size_t cols) {
  Spectrogram mic(cols, acc.bins(), acc.col_step_s(), acc.bin_hz(), SpectrogramOrigin::kConverted);
  for (std::size_t c = 0; c < cols; ++c) {
    const auto src = acc.column(static_cast<std::size_t>(static_cast<long>(c + lead) + delay));
    std::copy(src.begin(), src.end(), mic.column(c).begin());
  }
  mic.set_t0_s(static_cast<double>(lead) * acc.col_step_s());
  return mic;
}

}  // namespace

TEST_CASE("interpolate_time: identity, constants and the linear rule") {
  const Spectrogram s = from_rows({{1, 2}, {3, 5}, {4, 4}});
  CHECK(interpolate_time(s, 3) == s);
  const Spectrogram flat = from_rows({{7, 7}, {7, 7}});
  const Spectrogram stretched = interpolate_time(flat, 9);
  CHECK(stretched.cols() == 9);
  for (double v : stretched.data()) CHECK(v == 7.0);
  const Spectrogram row = from_rows({{0}, {1}});
  const Spectrogram out = interpolate_time(row, 3);
  CHECK(out.at(0, 0) == 0.0);
  CHECK(out.at(1, 0) == 0.5);
  CHECK(out.at(2, 0) == 1.0);
  CHECK(out.col_step_s() == doctest::Approx(0.032));
  CHECK_ERROR_CODE(interpolate_time(Spectrogram{}, 3), ErrorCode::kEmptySpectrogram);
  CHECK_ERROR_CODE(interpolate_time(row, 1), ErrorCode::kInvalidArgument);
}

TEST_CASE("normalize_2d: column rules") {
  const Spectrogram n = normalize_2d(from_rows({{2, 4, 6}, {5, 5, 5}, {0, 0.5, 1}}));
  CHECK(n.at(0, 0) == 0.0);
  CHECK(n.at(0, 1) == 0.5);
  CHECK(n.at(0, 2) == 1.0);
  for (std::size_t b = 0; b < 3; ++b) CHECK(n.at(1, b) == 0.0);
  CHECK(n.at(2, 1) == 0.5);
}

TEST_CASE("corr2d: self, affine copy and disjoint single entries") {
  const Spectrogram a = from_rows({{1, 3}, {2, 7}});
  CHECK(corr2d(a, a) == doctest::Approx(1.0));
  Spectrogram b = a;
  for (double& v : b.data()) v = 3.0 * v + 2.0;
  CHECK(corr2d(a, b) == doctest::Approx(1.0));
  const Spectrogram x = from_rows({{1, 0}, {0, 0}});
  const Spectrogram y = from_rows({{0, 0}, {0, 1}});
  CHECK(corr2d(x, y) == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  CHECK(corr2d(x, y, false) == 0.0);
  CHECK(corr2d(x, from_rows({{4, 4}, {4, 4}})) == 0.0);
  CHECK_ERROR_CODE(corr2d(x, from_rows({{1, 0, 0}, {0, 0, 0}})), ErrorCode::kShapeMismatch);
}

TEST_CASE("shift_corr: delayed exact copy is found at full correlation") {
  const double step = 0.064;
  const Spectrogram acc = ridge(60, 40, step, SpectrogramOrigin::kAccel);
  for (long k : {-7L, -3L, 0L, 2L, 7L}) {
    const Spectrogram mic = mic_view(acc, 10, k, 30);
    const auto r = shift_corr(mic, acc);
    CHECK(r.peak_corr == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.best_shift_s == doctest::Approx(static_cast<double>(k) * step));
    CHECK(r.verdict == Verdict::kAccept);
    CHECK_FALSE(r.reject_reason.has_value());
    CHECK(r.curve.size() == 15);
  }
}

TEST_CASE("shift_corr: delay beyond the search range is flagged") {
  const double step = 0.1;
  const Spectrogram acc = ridge(60, 40, step, SpectrogramOrigin::kAccel);
  const Spectrogram mic = mic_view(acc, 12, 8, 30);
  const auto r = shift_corr(mic, acc);
  CHECK(r.peak_corr < 1.0);
  CHECK(r.at_search_edge);
  CHECK(r.best_shift_s == doctest::Approx(0.5));
}

TEST_CASE("shift_corr: silent accelerometer and silent mic") {
  const Spectrogram acc = ridge(60, 40, 0.064, SpectrogramOrigin::kAccel);
  const Spectrogram mic = mic_view(acc, 10, 0, 30);
  Spectrogram zeros = acc;
  for (double& v : zeros.data()) v = 0.0;
  const auto r = shift_corr(mic, zeros);
  CHECK(r.peak_corr == 0.0);
  CHECK(r.verdict == Verdict::kReject);
  CHECK(r.reject_reason == RejectReason::kEmptyAccel);

  Spectrogram quiet = mic;
  for (double& v : quiet.data()) v = 0.0;
  CHECK(shift_corr(quiet, acc).reject_reason == RejectReason::kEmptyMic);
}

TEST_CASE("shift_corr: ties prefer the smallest shift, then the negative one") {
  Spectrogram acc(20, 4, 0.064, 3.125, SpectrogramOrigin::kAccel);
  for (std::size_t c = 0; c < 20; ++c) acc.at(c, c % 2 == 0 ? 0 : 3) = 1.0;
  Spectrogram mic = mic_view(acc, 6, 0, 8);
  ShiftCorrOptions opts;
  opts.max_shift_s = 0.2;
  auto r = shift_corr(mic, acc, opts);
  CHECK(r.best_shift_s == 0.0);
  mic = mic_view(acc, 6, 1, 8);
  r = shift_corr(mic, acc, opts);
  CHECK(r.best_shift_s == doctest::Approx(-0.064));
}

TEST_CASE("shift_corr: shape and window errors") {
  const Spectrogram acc = ridge(60, 40, 0.064, SpectrogramOrigin::kAccel);
  const Spectrogram other = ridge(60, 30, 0.064, SpectrogramOrigin::kConverted);
  CHECK_ERROR_CODE(shift_corr(other, acc), ErrorCode::kShapeMismatch);
  const Spectrogram slow = ridge(60, 40, 0.08, SpectrogramOrigin::kConverted);
  CHECK_ERROR_CODE(shift_corr(slow, acc), ErrorCode::kShapeMismatch);
  const Spectrogram short_acc = ridge(16, 40, 0.064, SpectrogramOrigin::kAccel);
  CHECK_ERROR_CODE(shift_corr(mic_view(acc, 10, 0, 30), short_acc), ErrorCode::kWindowTooSmall);
}

TEST_CASE("verify: own voice accepted, another word rejected") {
  const Signal word3 = synth_utterance(3, 1);
  const Signal word8 = synth_utterance(8, 1);
  const AccelTrace acc3 = simulate_accel(word3, AccelModel{}, 2);
  const auto own = verify(word3, acc3);
  CHECK(own.verdict == Verdict::kAccept);
  CHECK(own.peak_corr >= 0.30);
  CHECK(std::abs(own.best_shift_s) <= 0.064);
  const auto cross = verify(word8, acc3);
  CHECK(cross.verdict == Verdict::kReject);
  CHECK(cross.reject_reason == RejectReason::kLowSimilarity);
  CHECK(cross.peak_corr < own.peak_corr);
}

TEST_CASE("verify: ultrasound-only audio is rejected") {
  AttackSpec spec;
  spec.kind = AttackKind::kUltrasound;
  const Trial t = generate_attack(spec, synth_utterance(0, 1), 5);
  const auto r = verify(t.mic, t.accel);
  CHECK(r.verdict == Verdict::kReject);
  CHECK((r.reject_reason == RejectReason::kEmptyAccel || r.reject_reason == RejectReason::kLowSimilarity));
}

TEST_CASE("verify: silent microphone and flat wearable") {
  const Signal word = synth_utterance(5, 2);
  const AccelTrace acc = simulate_accel(word, AccelModel{}, 3);
  const auto silent = verify(vvtest::silence(word.duration_s(), 8000.0), acc);
  CHECK(silent.verdict == Verdict::kReject);
  CHECK(silent.reject_reason == RejectReason::kEmptyMic);
  CHECK(silent.peak_corr == 0.0);

  AccelModel far;
  far.distance_m = 1.0;
  const auto absent = verify_detailed(word, simulate_accel(word, far, 3));
  CHECK(absent.report.verdict == Verdict::kReject);
  CHECK_FALSE(absent.accel_detected);
  CHECK(absent.report.reject_reason == RejectReason::kEmptyAccel);
}

TEST_CASE("verify: gain on the microphone does not change the outcome without amplitude selection") {
  VerifyConfig cfg;
  cfg.conversion.amp_threshold_db = std::nullopt;
  const Signal word = synth_utterance(11, 4);
  const AccelTrace acc = simulate_accel(word, AccelModel{}, 6);
  const auto base = verify(word, acc, cfg);
  for (double g : {0.25, 0.5, 1.5}) {
    const auto r = verify(vvtest::scale(word, g), acc, cfg);
    CHECK(r.verdict == base.verdict);
    CHECK(r.peak_corr == doctest::Approx(base.peak_corr).epsilon(1e-6));
  }
}

TEST_CASE("verify: detailed result exposes the compared spectrograms") {
  const Signal word = synth_utterance(7, 3);
  const auto r = verify_detailed(word, simulate_accel(word, AccelModel{}, 9));
  CHECK(r.mic_detected);
  CHECK(r.accel_detected);
  CHECK(r.mic_segment.start_s == doctest::Approx(0.5).epsilon(0.1));
  CHECK(r.mic_converted.bins() == r.accel_aligned.bins());
  CHECK(r.mic_converted.col_step_s() == doctest::Approx(0.016));
  CHECK(r.mic_converted.bins() < 33);
}

TEST_CASE("verify: malformed inputs throw") {
  const Signal word = synth_utterance(1, 1);
  AccelTrace empty;
  CHECK_ERROR_CODE(verify(word, empty), ErrorCode::kEmptyTrace);
  VerifyConfig bad;
  bad.time_upsample = 0;
  CHECK_ERROR_CODE(verify(word, simulate_accel(word, AccelModel{}, 1), bad), ErrorCode::kInvalidArgument);
}

TEST_CASE("verdict_json: field order and null reason") {
  SimilarityReport r;
  r.peak_corr = 0.75;
  r.best_shift_s = -0.016;
  r.verdict = Verdict::kAccept;
  CHECK(verdict_json(r, "00ff") ==
        "{\"verdict\":\"accept\",\"score\":0.75,\"best_shift_s\":-0.016,\"reason\":null,\"config_hash\":\"00ff\"}");
  r.verdict = Verdict::kReject;
  r.reject_reason = RejectReason::kEmptyAccel;
  CHECK(verdict_json(r, "x").find("\"reason\":\"empty_accel\"") != std::string::npos);
}

TEST_CASE("property: normalisation bounds") { CHECK_PROPERTY(vvtest::prop_normalize_bounds()); }
TEST_CASE("property: normalisation idempotence") { CHECK_PROPERTY(vvtest::prop_normalize_idempotent()); }
TEST_CASE("property: Pearson affine invariance") { CHECK_PROPERTY(vvtest::prop_pearson_affine()); }
TEST_CASE("property: Pearson symmetry") { CHECK_PROPERTY(vvtest::prop_pearson_symmetric()); }
TEST_CASE("property: joint shift invariance") { CHECK_PROPERTY(vvtest::prop_shift_corr_joint_shift()); }
