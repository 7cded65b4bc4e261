// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vibraverify/eval.hpp"
#include "vibraverify/wearsim.hpp"

namespace vibraverify {

/// One record of a scenario file: `count` trials of one attack kind.
struct ScenarioRecord {
  AttackSpec spec;
  std::size_t count = 1;
  /// Legit word; cycles through the corpus by trial index when unset.
  std::optional<int> word_id;
  std::optional<std::uint64_t> seed;
};

/// JSON array of objects. Recognised keys: kind (required), count, word_id,
/// seed, lag_s, max_lag_s, mic_ambient_db, absent_source ("ambient" |
/// "other_utterance"), other_word_id, hidden_noise_db, speaker_distance_m,
/// ultrasound_low_hz, ultrasound_high_hz, ultrasound_rate_hz, ultrasound_db
/// and model (object of AccelModel fields). Throws kInvalidArgument on
/// unknown kinds or keys.
std::vector<ScenarioRecord> parse_scenario(std::string_view json_text);
std::vector<ScenarioRecord> load_scenario(const std::filesystem::path& path);

struct PlannedTrial {
  std::string trial_id;
  AttackSpec spec;
  int word_id = 0;
  std::uint64_t seed = 0;
};

/// Flattens records into trials numbered trial_0000, trial_0001, ...
/// Seeds derive from the record seed, or base_seed when it has none.
std::vector<PlannedTrial> plan_trials(const std::vector<ScenarioRecord>& records,
                                      std::uint64_t base_seed);

/// Synthesises the legit utterance and applies the attack.
Trial realize_trial(const PlannedTrial& planned);

/// Writes <id>.wav (float32), <id>.csv and manifest.jsonl into out_dir and
/// returns the manifest entries (paths relative to out_dir).
std::vector<ManifestEntry> run_scenario(const std::vector<ScenarioRecord>& records,
                                        const std::filesystem::path& out_dir,
                                        std::uint64_t base_seed, std::size_t threads = 0);

}  // namespace vibraverify
