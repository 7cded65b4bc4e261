// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vibraverify/config.hpp"
#include "vibraverify/signal.hpp"
#include "vibraverify/wearsim.hpp"

namespace vibraverify {

struct EvalRecord {
  std::string trial_id;
  double score = 0.0;  // peak correlation
  TrialLabel label = TrialLabel::kLegit;
  AttackKind kind = AttackKind::kNormal;
  bool accepted = false;
};

struct RocPoint {
  double eta = 0.0;
  double tpr = 0.0;
  double fpr = 0.0;
};

/// Scores count as accepted at threshold eta when score >= eta.
class MetricsSummary {
 public:
  MetricsSummary(std::vector<double> legit_scores, std::vector<double> attack_scores);

  /// eta = 0.00, 0.01, ..., 1.00 (101 points).
  const std::vector<RocPoint>& roc() const noexcept { return roc_; }
  /// Trapezoidal area under the empirical ROC through every distinct score,
  /// so score ties contribute one half.
  double auc() const noexcept { return auc_; }

  double tpr_at(double eta) const;
  double fpr_at(double eta) const;
  double fnr_at(double eta) const { return 1.0 - tpr_at(eta); }

  /// Grid threshold maximising tpr - fpr (Youden's J); the lowest such eta
  /// when several tie.
  double youden_eta() const;

  std::size_t legit_count() const noexcept { return legit_.size(); }
  std::size_t attack_count() const noexcept { return attack_.size(); }

 private:
  std::vector<double> legit_;   // sorted ascending
  std::vector<double> attack_;  // sorted ascending
  std::vector<RocPoint> roc_;
  double auc_ = 0.0;
};

inline constexpr std::size_t kRocGridPoints = 101;

/// Throws kSingleClassOnly unless both labels are present.
MetricsSummary compute_roc(std::span<const EvalRecord> records);

struct CorpusEntry {
  Signal mic;
  AccelTrace accel;
};

/// Entry (i, j) is the verification score of mic(i) against accel(j).
std::vector<std::vector<double>> cross_correlation_matrix(std::span<const CorpusEntry> corpus,
                                                          const VerifyConfig& config = {},
                                                          std::size_t threads = 0);

struct ManifestEntry {
  std::string trial_id;
  AttackKind kind = AttackKind::kNormal;
  TrialLabel label = TrialLabel::kLegit;
  std::filesystem::path wav;  // resolved against the manifest directory
  std::filesystem::path csv;
  std::optional<double> lag_s;
  std::optional<int> word_id;
};

/// JSON lines, one trial per line: {trial_id, kind, label, wav, csv} plus
/// optional lag_s and word_id. Blank lines are skipped. Throws
/// kInvalidArgument on a malformed line or an empty manifest.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
std::string format_manifest_line(const ManifestEntry& entry);

/// Verifies every trial; records come back in manifest order.
std::vector<EvalRecord> evaluate_manifest(std::span<const ManifestEntry> entries,
                                          const VerifyConfig& config = {},
                                          std::size_t threads = 0);

std::string metrics_json(const MetricsSummary& summary, std::span<const EvalRecord> records,
                         double eta);
/// Header "eta,tpr,fpr" then one row per grid point.
std::string roc_csv(const MetricsSummary& summary);
/// Header "kind,label,accept,reject" then one row per attack kind present.
std::string confusion_csv(std::span<const EvalRecord> records);
std::string matrix_csv(const std::vector<std::vector<double>>& matrix);

}  // namespace vibraverify
