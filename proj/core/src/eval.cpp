// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#include "vibraverify/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "json.hpp"
#include "parallel.hpp"
#include "vibraverify/accel.hpp"
#include "vibraverify/audio_io.hpp"
#include "vibraverify/error.hpp"
#include "vibraverify/pipeline.hpp"

namespace vibraverify {
namespace {

double fraction_at_or_above(const std::vector<double>& sorted, double eta) {
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), eta);
  return static_cast<double>(sorted.end() - it) / static_cast<double>(sorted.size());
}

double grid_eta(std::size_t i) { return static_cast<double>(i) / 100.0; }

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

const std::string& require_string(const nlohmann::json& j, const char* key, std::size_t line) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw Error(ErrorCode::kInvalidArgument,
                "manifest line " + std::to_string(line) + ": missing string \"" + key + "\"");
  }
  return it->get_ref<const std::string&>();
}

}  // namespace

MetricsSummary::MetricsSummary(std::vector<double> legit_scores, std::vector<double> attack_scores)
    : legit_(std::move(legit_scores)), attack_(std::move(attack_scores)) {
  if (legit_.empty() || attack_.empty()) {
    throw Error(ErrorCode::kSingleClassOnly, "ROC needs at least one legit and one attack score");
  }
  for (double s : legit_) {
    if (!std::isfinite(s)) throw Error(ErrorCode::kInvalidArgument, "non-finite score");
  }
  for (double s : attack_) {
    if (!std::isfinite(s)) throw Error(ErrorCode::kInvalidArgument, "non-finite score");
  }
  std::sort(legit_.begin(), legit_.end());
  std::sort(attack_.begin(), attack_.end());

  roc_.reserve(kRocGridPoints);
  for (std::size_t i = 0; i < kRocGridPoints; ++i) {
    const double eta = grid_eta(i);
    roc_.push_back({eta, tpr_at(eta), fpr_at(eta)});
  }

  // The empirical ROC steps through every distinct score; the trapezoid area
  // under it counts each (legit > attack) pair once and each tie one half.
  double pairs = 0.0;
  for (double l : legit_) {
    const auto lo = std::lower_bound(attack_.begin(), attack_.end(), l);
    const auto hi = std::upper_bound(lo, attack_.end(), l);
    pairs += static_cast<double>(lo - attack_.begin()) + 0.5 * static_cast<double>(hi - lo);
  }
  auc_ = pairs / (static_cast<double>(legit_.size()) * static_cast<double>(attack_.size()));
}

double MetricsSummary::tpr_at(double eta) const { return fraction_at_or_above(legit_, eta); }
double MetricsSummary::fpr_at(double eta) const { return fraction_at_or_above(attack_, eta); }

double MetricsSummary::youden_eta() const {
  double best_eta = roc_.front().eta;
  double best_j = roc_.front().tpr - roc_.front().fpr;
  for (const auto& p : roc_) {
    if (p.tpr - p.fpr > best_j) {
      best_j = p.tpr - p.fpr;
      best_eta = p.eta;
    }
  }
  return best_eta;
}

MetricsSummary compute_roc(std::span<const EvalRecord> records) {
  std::vector<double> legit;
  std::vector<double> attack;
  for (const auto& r : records) {
    (r.label == TrialLabel::kLegit ? legit : attack).push_back(r.score);
  }
  return MetricsSummary(std::move(legit), std::move(attack));
}

std::vector<std::vector<double>> cross_correlation_matrix(std::span<const CorpusEntry> corpus,
                                                          const VerifyConfig& config,
                                                          std::size_t threads) {
  const std::size_t n = corpus.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  detail::parallel_for(n * n, threads, [&](std::size_t k) {
    const std::size_t i = k / n;
    const std::size_t j = k % n;
    m[i][j] = verify(corpus[i].mic, corpus[j].accel, config).peak_corr;
  });
  return m;
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open manifest " + path.string());
  const auto base = path.parent_path();
  std::vector<ManifestEntry> entries;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "manifest line " + std::to_string(number) + " is not a JSON object");
    }
    ManifestEntry e;
    e.trial_id = require_string(j, "trial_id", number);
    e.kind = attack_kind_from_string(require_string(j, "kind", number));
    e.label = trial_label_from_string(require_string(j, "label", number));
    e.wav = base / require_string(j, "wav", number);
    e.csv = base / require_string(j, "csv", number);
    if (const auto it = j.find("lag_s"); it != j.end() && it->is_number()) e.lag_s = it->get<double>();
    if (const auto it = j.find("word_id"); it != j.end() && it->is_number_integer()) {
      e.word_id = it->get<int>();
    }
    entries.push_back(std::move(e));
  }
  if (entries.empty()) throw Error(ErrorCode::kInvalidArgument, "manifest " + path.string() + " has no trials");
  return entries;
}

std::string format_manifest_line(const ManifestEntry& entry) {
  nlohmann::ordered_json j;
  j["trial_id"] = entry.trial_id;
  j["kind"] = std::string(to_string(entry.kind));
  j["label"] = std::string(to_string(entry.label));
  j["wav"] = entry.wav.generic_string();
  j["csv"] = entry.csv.generic_string();
  if (entry.lag_s) j["lag_s"] = *entry.lag_s;
  if (entry.word_id) j["word_id"] = *entry.word_id;
  return j.dump();
}

std::vector<EvalRecord> evaluate_manifest(std::span<const ManifestEntry> entries,
                                          const VerifyConfig& config, std::size_t threads) {
  std::vector<EvalRecord> records(entries.size());
  detail::parallel_for(entries.size(), threads, [&](std::size_t i) {
    const auto& e = entries[i];
    try {
      const auto report = verify(load_wav(e.wav), load_accel_csv(e.csv), config);
      records[i] = {e.trial_id, report.peak_corr, e.label, e.kind, report.verdict == Verdict::kAccept};
    } catch (const Error& err) {
      throw Error(err.code(), "trial " + e.trial_id + ": " + err.what());
    }
  });
  return records;
}

std::string metrics_json(const MetricsSummary& summary, std::span<const EvalRecord> records,
                         double eta) {
  nlohmann::ordered_json j;
  j["auc"] = summary.auc();
  j["n_legit"] = summary.legit_count();
  j["n_attack"] = summary.attack_count();
  j["eta"] = eta;
  j["tpr"] = summary.tpr_at(eta);
  j["fpr"] = summary.fpr_at(eta);
  j["fnr"] = summary.fnr_at(eta);
  j["youden_eta"] = summary.youden_eta();
  std::map<std::string, std::pair<std::size_t, std::size_t>> per_kind;
  for (const auto& r : records) {
    auto& [n, accepted] = per_kind[std::string(to_string(r.kind))];
    ++n;
    if (r.accepted) ++accepted;
  }
  auto& kinds = j["per_kind"];
  kinds = nlohmann::ordered_json::object();
  for (const auto& [kind, counts] : per_kind) {
    kinds[kind] = {{"n", counts.first},
                   {"accepted", counts.second},
                   {"accept_rate", static_cast<double>(counts.second) / static_cast<double>(counts.first)}};
  }
  return j.dump(2) + "\n";
}

std::string roc_csv(const MetricsSummary& summary) {
  std::string out = "eta,tpr,fpr\n";
  for (const auto& p : summary.roc()) {
    out += fixed(p.eta, 2) + "," + fixed(p.tpr, 6) + "," + fixed(p.fpr, 6) + "\n";
  }
  return out;
}

std::string confusion_csv(std::span<const EvalRecord> records) {
  std::map<std::pair<int, int>, std::pair<std::size_t, std::size_t>> cells;
  for (const auto& r : records) {
    auto& [acc, rej] = cells[{static_cast<int>(r.kind), static_cast<int>(r.label)}];
    (r.accepted ? acc : rej) += 1;
  }
  std::string out = "kind,label,accept,reject\n";
  for (const auto& [key, counts] : cells) {
    out += std::string(to_string(static_cast<AttackKind>(key.first))) + "," +
           std::string(to_string(static_cast<TrialLabel>(key.second))) + "," +
           std::to_string(counts.first) + "," + std::to_string(counts.second) + "\n";
  }
  return out;
}

std::string matrix_csv(const std::vector<std::vector<double>>& matrix) {
  std::ostringstream out;
  out << "row";
  for (std::size_t j = 0; j < matrix.size(); ++j) out << "," << j;
  out << "\n";
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    out << i;
    for (double v : matrix[i]) out << "," << fixed(v, 6);
    out << "\n";
  }
  return out.str();
}

}  // namespace vibraverify
