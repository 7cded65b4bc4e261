// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#include "vibraverify/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <string>

#include "json.hpp"
#include "parallel.hpp"
#include "vibraverify/accel.hpp"
#include "vibraverify/audio_io.hpp"
#include "vibraverify/error.hpp"
#include "vibraverify/random.hpp"

namespace vibraverify {
namespace {

using Json = nlohmann::json;

[[noreturn]] void bad(std::size_t index, const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, "scenario record " + std::to_string(index) + ": " + what);
}

double number(const Json& j, const char* key, std::size_t index) {
  if (!j.is_number()) bad(index, std::string(key) + " must be a number");
  return j.get<double>();
}

void read_model(const Json& j, AccelModel& m, std::size_t index) {
  if (!j.is_object()) bad(index, "model must be an object");
  for (const auto& [key, value] : j.items()) {
    const char* k = key.c_str();
    if (key == "f_ws_hz") m.f_ws_hz = number(value, k, index);
    else if (key == "band_low_hz") m.band_low_hz = number(value, k, index);
    else if (key == "band_high_hz") m.band_high_hz = number(value, k, index);
    else if (key == "band_order") m.band_order = static_cast<int>(number(value, k, index));
    else if (key == "sensitivity_floor_db") m.sensitivity_floor_db = number(value, k, index);
    else if (key == "distance_m") m.distance_m = number(value, k, index);
    else if (key == "reference_distance_m") m.reference_distance_m = number(value, k, index);
    else if (key == "cutoff_distance_m") m.cutoff_distance_m = number(value, k, index);
    else if (key == "response_gain") m.response_gain = number(value, k, index);
    else if (key == "hand_noise_rms") m.hand_noise_rms = number(value, k, index);
    else if (key == "hand_noise_max_hz") m.hand_noise_max_hz = number(value, k, index);
    else if (key == "sensor_noise_rms") m.sensor_noise_rms = number(value, k, index);
    else if (key == "gravity") m.gravity = number(value, k, index);
    else if (key == "timestamp_jitter") m.timestamp_jitter = number(value, k, index);
    else if (key == "gate_frame_s") m.gate_frame_s = number(value, k, index);
    else bad(index, "unknown model key '" + key + "'");
  }
}

int word(const Json& j, const char* key, std::size_t index) {
  if (!j.is_number_integer()) bad(index, std::string(key) + " must be an integer");
  const auto v = j.get<std::int64_t>();
  if (v < 0 || v >= kCorpusWords) {
    throw Error(ErrorCode::kUnknownWordId, "scenario record " + std::to_string(index) + ": " + key +
                                               " " + std::to_string(v) + " out of range");
  }
  return static_cast<int>(v);
}

ScenarioRecord read_record(const Json& j, std::size_t index) {
  if (!j.is_object()) bad(index, "expected an object");
  const auto kind = j.find("kind");
  if (kind == j.end() || !kind->is_string()) bad(index, "missing kind");
  ScenarioRecord r;
  r.spec.kind = attack_kind_from_string(kind->get<std::string>());
  for (const auto& [key, value] : j.items()) {
    const char* k = key.c_str();
    AttackSpec& s = r.spec;
    if (key == "kind") continue;
    if (key == "count") {
      if (!value.is_number_unsigned()) bad(index, "count must be a non-negative integer");
      r.count = value.get<std::size_t>();
    } else if (key == "word_id") {
      r.word_id = word(value, k, index);
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) bad(index, "seed must be a non-negative integer");
      r.seed = value.get<std::uint64_t>();
    } else if (key == "lag_s") {
      s.lag_s = number(value, k, index);
    } else if (key == "max_lag_s") {
      s.max_lag_s = number(value, k, index);
    } else if (key == "mic_ambient_db") {
      s.mic_ambient_db = number(value, k, index);
    } else if (key == "absent_source") {
      if (!value.is_string()) bad(index, "absent_source must be a string");
      const auto v = value.get<std::string>();
      if (v == "ambient") s.absent_source = AbsentSource::kAmbient;
      else if (v == "other_utterance") s.absent_source = AbsentSource::kOtherUtterance;
      else bad(index, "unknown absent_source '" + v + "'");
    } else if (key == "other_word_id") {
      s.other_word_id = word(value, k, index);
    } else if (key == "hidden_noise_db") {
      s.hidden_noise_db = number(value, k, index);
    } else if (key == "speaker_distance_m") {
      s.speaker_distance_m = number(value, k, index);
    } else if (key == "ultrasound_low_hz") {
      s.ultrasound_low_hz = number(value, k, index);
    } else if (key == "ultrasound_high_hz") {
      s.ultrasound_high_hz = number(value, k, index);
    } else if (key == "ultrasound_rate_hz") {
      s.ultrasound_rate_hz = number(value, k, index);
    } else if (key == "ultrasound_db") {
      s.ultrasound_db = number(value, k, index);
    } else if (key == "model") {
      read_model(value, s.model, index);
    } else {
      bad(index, "unknown key '" + key + "'");
    }
  }
  r.spec.validate();
  return r;
}

std::string trial_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "trial_%04zu", i);
  return buf;
}

}  // namespace

std::vector<ScenarioRecord> parse_scenario(std::string_view json_text) {
  const Json j = Json::parse(json_text, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::kInvalidArgument, "scenario is not valid JSON");
  if (!j.is_array()) throw Error(ErrorCode::kInvalidArgument, "scenario must be a JSON array");
  std::vector<ScenarioRecord> records;
  for (std::size_t i = 0; i < j.size(); ++i) records.push_back(read_record(j[i], i));
  return records;
}

std::vector<ScenarioRecord> load_scenario(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return parse_scenario(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

std::vector<PlannedTrial> plan_trials(const std::vector<ScenarioRecord>& records,
                                      std::uint64_t base_seed) {
  std::vector<PlannedTrial> plan;
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& rec = records[r];
    for (std::size_t k = 0; k < rec.count; ++k) {
      const std::size_t i = plan.size();
      PlannedTrial t;
      t.trial_id = trial_name(i);
      t.spec = rec.spec;
      t.word_id = rec.word_id.value_or(static_cast<int>(i % kCorpusWords));
      t.seed = rec.seed ? mix_seed(*rec.seed, k) : mix_seed(base_seed, i);
      plan.push_back(std::move(t));
    }
  }
  return plan;
}

Trial realize_trial(const PlannedTrial& planned) {
  const Signal legit = synth_utterance(planned.word_id, mix_seed(planned.seed, 100));
  return generate_attack(planned.spec, legit, planned.seed);
}

std::vector<ManifestEntry> run_scenario(const std::vector<ScenarioRecord>& records,
                                        const std::filesystem::path& out_dir,
                                        std::uint64_t base_seed, std::size_t threads) {
  const auto plan = plan_trials(records, base_seed);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<ManifestEntry> entries(plan.size());
  detail::parallel_for(plan.size(), threads, [&](std::size_t i) {
    const auto& p = plan[i];
    const Trial trial = realize_trial(p);
    ManifestEntry e;
    e.trial_id = p.trial_id;
    e.kind = trial.kind;
    e.label = trial.label;
    e.wav = p.trial_id + ".wav";
    e.csv = p.trial_id + ".csv";
    e.lag_s = trial.lag_s;
    e.word_id = p.word_id;
    write_wav(out_dir / e.wav, trial.mic, WavEncoding::kFloat32);
    write_accel_csv(out_dir / e.csv, trial.accel);
    entries[i] = std::move(e);
  });

  std::ofstream manifest(out_dir / "manifest.jsonl", std::ios::binary);
  if (!manifest) throw Error(ErrorCode::kIo, "cannot write manifest in " + out_dir.string());
  for (const auto& e : entries) manifest << format_manifest_line(e) << '\n';
  if (!manifest) throw Error(ErrorCode::kIo, "failed writing manifest in " + out_dir.string());
  return entries;
}

}  // namespace vibraverify
