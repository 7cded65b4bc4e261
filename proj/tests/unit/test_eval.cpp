// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "properties.hpp"
#include "unit.hpp"
#include "vibraverify/audio_io.hpp"
#include "vibraverify/eval.hpp"
#include "vibraverify/pipeline.hpp"
#include "vibraverify/scenario.hpp"

using namespace vibraverify;

namespace {

EvalRecord rec(double score, TrialLabel label, AttackKind kind = AttackKind::kNormal) {
  return {"t", score, label, kind, false};
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "vibraverify_unit" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("compute_roc: hand-enumerated AUC of 0.75") {
  const std::vector<EvalRecord> r{rec(0.8, TrialLabel::kLegit), rec(0.6, TrialLabel::kLegit),
                                  rec(0.7, TrialLabel::kAttack), rec(0.2, TrialLabel::kAttack)};
  const MetricsSummary m = compute_roc(r);
  CHECK(m.auc() == 0.75);
  CHECK(m.roc().size() == 101);
  CHECK(m.tpr_at(0.6) == 1.0);
  CHECK(m.tpr_at(0.61) == 0.5);
  CHECK(m.fpr_at(0.7) == 0.5);
  CHECK(m.fpr_at(0.71) == 0.0);
  CHECK(m.fnr_at(0.61) == 0.5);
}

TEST_CASE("compute_roc: perfect separation and a tied null") {
  std::vector<EvalRecord> r;
  for (int i = 0; i < 5; ++i) r.push_back(rec(0.9, TrialLabel::kLegit));
  for (int i = 0; i < 7; ++i) r.push_back(rec(0.1, TrialLabel::kAttack));
  CHECK(compute_roc(r).auc() == 1.0);
  const MetricsSummary tied({0.4, 0.4}, {0.4});
  CHECK(tied.auc() == 0.5);
}

TEST_CASE("compute_roc: identical score distributions give AUC near one half") {
  Rng rng(2024);
  std::vector<double> a(10000), b(10000);
  for (double& v : a) v = rng.uniform();
  for (double& v : b) v = rng.uniform();
  CHECK(std::abs(MetricsSummary(a, b).auc() - 0.5) <= 0.02);
}

TEST_CASE("compute_roc: grid, endpoints and errors") {
  const MetricsSummary m({0.3, 0.55, 0.9}, {0.1, 0.55});
  const auto& roc = m.roc();
  for (std::size_t i = 0; i < roc.size(); ++i) CHECK(roc[i].eta == doctest::Approx(i / 100.0));
  CHECK(roc.front().tpr == 1.0);
  CHECK(roc.front().fpr == 1.0);
  CHECK(roc.back().tpr == 0.0);
  CHECK(m.tpr_at(0.55) == doctest::Approx(2.0 / 3.0));
  CHECK(m.fpr_at(0.55) == 0.5);
  CHECK(m.youden_eta() == doctest::Approx(0.11));
  const std::vector<EvalRecord> only{rec(0.5, TrialLabel::kLegit)};
  CHECK_ERROR_CODE(compute_roc(only), ErrorCode::kSingleClassOnly);
  CHECK_ERROR_CODE(MetricsSummary({0.5}, {std::nan("")}), ErrorCode::kInvalidArgument);
}

TEST_CASE("roc_csv, confusion_csv and metrics_json") {
  std::vector<EvalRecord> r{{"a", 0.8, TrialLabel::kLegit, AttackKind::kNormal, true},
                            {"b", 0.2, TrialLabel::kAttack, AttackKind::kReplay, false},
                            {"c", 0.6, TrialLabel::kAttack, AttackKind::kReplay, true}};
  const MetricsSummary m = compute_roc(r);
  const std::string roc = roc_csv(m);
  CHECK(roc.rfind("eta,tpr,fpr\n0.00,1.000000,1.000000\n", 0) == 0);
  CHECK(std::count(roc.begin(), roc.end(), '\n') == 102);
  CHECK(confusion_csv(r) == "kind,label,accept,reject\nnormal,legit,1,0\nreplay,attack,1,1\n");

  const auto j = nlohmann::json::parse(metrics_json(m, r, 0.5));
  CHECK(j["auc"].get<double>() == 1.0);
  CHECK(j["n_legit"].get<int>() == 1);
  CHECK(j["n_attack"].get<int>() == 2);
  CHECK(j["fpr"].get<double>() == 0.5);
  CHECK(j["fnr"].get<double>() == 0.0);
  CHECK(j["per_kind"]["replay"]["accepted"].get<int>() == 1);
  CHECK(j["per_kind"]["replay"]["accept_rate"].get<double>() == 0.5);
}

TEST_CASE("matrix_csv layout") {
  CHECK(matrix_csv({{1.0, 0.25}, {0.5, 0.75}}) == "row,0,1\n0,1.000000,0.250000\n1,0.500000,0.750000\n");
}

TEST_CASE("cross_correlation_matrix: 1x1 and the 20-word diagonal") {
  std::vector<CorpusEntry> corpus;
  for (int w = 0; w < kCorpusWords; ++w) {
    const Signal audio = synth_utterance(w, mix_seed(1, static_cast<std::uint64_t>(w)));
    corpus.push_back({audio, simulate_accel(audio, AccelModel{}, mix_seed(1, 1000 + w))});
  }
  const auto one = cross_correlation_matrix(std::span(corpus).first(1));
  REQUIRE(one.size() == 1);
  REQUIRE(one[0].size() == 1);
  CHECK(one[0][0] == verify(corpus[0].mic, corpus[0].accel).peak_corr);

  const auto m = cross_correlation_matrix(corpus, {}, 2);
  double diag = 0.0, off = 0.0;
  for (int i = 0; i < kCorpusWords; ++i) {
    for (int j = 0; j < kCorpusWords; ++j) (i == j ? diag : off) += m[i][j];
  }
  diag /= kCorpusWords;
  off /= kCorpusWords * (kCorpusWords - 1);
  CHECK(diag - off >= 0.2);
}

TEST_CASE("manifest lines round-trip and resolve paths") {
  const auto dir = scratch_dir("manifest");
  ManifestEntry e{"trial_0001", AttackKind::kReplay, TrialLabel::kAttack, "a.wav", "sub/a.csv", 0.01, 4};
  const std::string line = format_manifest_line(e);
  CHECK(line == "{\"trial_id\":\"trial_0001\",\"kind\":\"replay\",\"label\":\"attack\",\"wav\":\"a.wav\","
                "\"csv\":\"sub/a.csv\",\"lag_s\":0.01,\"word_id\":4}");
  std::ofstream(dir / "m.jsonl") << line << "\n\n";
  const auto entries = read_manifest(dir / "m.jsonl");
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].wav == dir / "a.wav");
  CHECK(entries[0].csv == dir / "sub/a.csv");
  CHECK(entries[0].word_id == 4);

  std::ofstream(dir / "empty.jsonl") << "\n";
  CHECK_ERROR_CODE(read_manifest(dir / "empty.jsonl"), ErrorCode::kInvalidArgument);
  std::ofstream(dir / "bad.jsonl") << "{\"trial_id\":1}\n";
  CHECK_ERROR_CODE(read_manifest(dir / "bad.jsonl"), ErrorCode::kInvalidArgument);
}

TEST_CASE("parse_scenario: accepted and rejected documents") {
  const auto recs = parse_scenario(
      R"([{"kind":"normal","count":3,"seed":9},)"
      R"( {"kind":"hidden_command","hidden_noise_db":-10,"model":{"distance_m":0.08}},)"
      R"( {"kind":"random_attack","absent_source":"ambient","word_id":2}])");
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].count == 3);
  CHECK(recs[0].seed == 9u);
  CHECK(recs[1].spec.kind == AttackKind::kHiddenCommand);
  CHECK(recs[1].spec.hidden_noise_db == -10.0);
  CHECK(recs[1].spec.model.distance_m == 0.08);
  CHECK(recs[2].spec.absent_source == AbsentSource::kAmbient);
  CHECK(recs[2].word_id == 2);

  CHECK_ERROR_CODE(parse_scenario(R"([{"kind":"laser"}])"), ErrorCode::kInvalidArgument);
  CHECK_ERROR_CODE(parse_scenario(R"([{"kind":"normal","colour":1}])"), ErrorCode::kInvalidArgument);
  CHECK_ERROR_CODE(parse_scenario(R"([{"count":1}])"), ErrorCode::kInvalidArgument);
  CHECK_ERROR_CODE(parse_scenario(R"({"kind":"normal"})"), ErrorCode::kInvalidArgument);
}

TEST_CASE("plan_trials: ids, words and seeds") {
  const auto recs = parse_scenario(R"([{"kind":"normal","count":2},{"kind":"replay","count":2,"seed":5}])");
  const auto a = plan_trials(recs, 1);
  const auto b = plan_trials(recs, 1);
  const auto c = plan_trials(recs, 2);
  REQUIRE(a.size() == 4);
  CHECK(a[0].trial_id == "trial_0000");
  CHECK(a[3].trial_id == "trial_0003");
  CHECK(a[1].word_id == 1);
  CHECK(a[2].word_id == 2);
  for (std::size_t i = 0; i < 4; ++i) CHECK(a[i].seed == b[i].seed);
  CHECK(a[0].seed != c[0].seed);
  CHECK(a[2].seed == c[2].seed);
}

TEST_CASE("run_scenario and evaluate_manifest end to end") {
  const auto dir = scratch_dir("scenario");
  const auto recs = parse_scenario(R"([{"kind":"normal","count":3},{"kind":"replay","count":3}])");
  const auto written = run_scenario(recs, dir, 7, 2);
  REQUIRE(written.size() == 6);
  CHECK(std::filesystem::exists(dir / "trial_0000.wav"));
  CHECK(std::filesystem::exists(dir / "trial_0005.csv"));
  const auto entries = read_manifest(dir / "manifest.jsonl");
  REQUIRE(entries.size() == 6);
  const auto records = evaluate_manifest(entries, {}, 2);
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(records[i].trial_id == entries[i].trial_id);
    CHECK(records[i].accepted == (records[i].label == TrialLabel::kLegit));
  }
  CHECK(compute_roc(records).auc() == 1.0);

  const auto again = scratch_dir("scenario_again");
  run_scenario(recs, again, 7, 1);
  CHECK(read_file_bytes(dir / "trial_0004.wav") == read_file_bytes(again / "trial_0004.wav"));
  CHECK(read_file_bytes(dir / "manifest.jsonl") == read_file_bytes(again / "manifest.jsonl"));
}

TEST_CASE("property: ROC monotone with FNR + TPR = 1") { CHECK_PROPERTY(vvtest::prop_roc_monotone()); }
TEST_CASE("property: AUC under monotone maps") { CHECK_PROPERTY(vvtest::prop_auc_monotone_transform()); }
