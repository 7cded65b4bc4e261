// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#include "vibraverify/config.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <type_traits>
#include <cstdio>
#include <set>
#include <string>

#include "json.hpp"
#include "vibraverify/audio_io.hpp"
#include "vibraverify/error.hpp"

namespace vibraverify {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, "config " + path + ": " + what);
}

// Reads members of one JSON object, rejecting keys nobody asked for.
class Reader {
 public:
  Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) bad(path_, "expected an object");
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.contains(key)) bad(path_ + "." + key, "unknown key");
    }
  }

  void number(const char* key, double& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number()) bad(path_ + "." + key, "expected a number");
      out = v->get<double>();
    }
  }

  template <typename Int>
  void integer(const char* key, Int& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number_integer()) bad(path_ + "." + key, "expected an integer");
      const auto value = v->get<std::int64_t>();
      if (std::is_unsigned_v<Int> && value < 0) bad(path_ + "." + key, "must be non-negative");
      out = static_cast<Int>(value);
    }
  }

  void boolean(const char* key, bool& out) {
    if (const Json* v = find(key)) {
      if (!v->is_boolean()) bad(path_ + "." + key, "expected true or false");
      out = v->get<bool>();
    }
  }

  void window(const char* key, WindowKind& out) {
    if (const Json* v = find(key)) {
      if (!v->is_string()) bad(path_ + "." + key, "expected a string");
      out = window_from_string(v->get<std::string>());
    }
  }

  void optional_number(const char* key, std::optional<double>& out) {
    if (const Json* v = find(key)) {
      if (v->is_null()) {
        out.reset();
      } else if (v->is_number()) {
        out = v->get<double>();
      } else {
        bad(path_ + "." + key, "expected a number or null");
      }
    }
  }

  const Json* object(const char* key) { return find(key); }
  std::string child(const char* key) const { return path_ + "." + key; }

 private:
  const Json* find(const char* key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_stft(Reader& r, StftParams& p) {
  r.integer("n_fft", p.n_fft);
  r.integer("hop", p.hop);
  r.window("window", p.window);
}

void read_segmentation(const Json& j, const std::string& path, SegmentationParams& p) {
  Reader r(j, path);
  r.number("window_s", p.window_s);
  r.number("hop_s", p.hop_s);
  r.number("k_sigma", p.k_sigma);
  r.number("noise_ref_s", p.noise_ref_s);
  r.number("variance_floor", p.variance_floor);
  r.number("min_ratio", p.min_ratio);
  r.finish();
}

Json segmentation_json(const SegmentationParams& p) {
  Json j;
  j["window_s"] = p.window_s;
  j["hop_s"] = p.hop_s;
  j["k_sigma"] = p.k_sigma;
  j["noise_ref_s"] = p.noise_ref_s;
  j["variance_floor"] = p.variance_floor;
  j["min_ratio"] = p.min_ratio;
  return j;
}

void validate_segmentation(const SegmentationParams& p, const char* name) {
  if (!(p.window_s > 0.0) || !(p.hop_s > 0.0) || !(p.noise_ref_s > 0.0) || p.k_sigma < 0.0 ||
      p.variance_floor < 0.0 || p.min_ratio < 0.0) {
    bad(name, "segmentation windows must be positive and k_sigma, variance_floor non-negative");
  }
}

}  // namespace

void VerifyConfig::validate() const {
  if (!(mic.band_low_hz > 0.0) || !(mic.band_low_hz < mic.band_high_hz)) {
    bad("mic", "band must satisfy 0 < low < high");
  }
  if (mic.filter_order <= 0 || mic.filter_order % 2 != 0 || accel.filter_order <= 0 ||
      accel.filter_order % 2 != 0) {
    bad("filter_order", "must be even and positive");
  }
  mic.stft.validate();
  accel.stft.validate();
  if (!(mic.reference_rate_hz > 0.0)) bad("mic.reference_rate_hz", "must be positive");
  if (mic.silence_level < 0.0) bad("mic.silence_level", "must be non-negative");
  validate_segmentation(mic.segmentation, "mic.segmentation");
  validate_segmentation(accel.segmentation, "accel.segmentation");
  if (!(accel.highpass_hz > 0.0)) bad("accel.highpass_hz", "must be positive");
  if (accel.axis_min_hz < 0.0) bad("accel.axis_min_hz", "must be non-negative");
  if (!(accel.w_t_s > 0.0)) bad("accel.w_t_s", "must be positive");
  if (!(conversion.band_low_hz >= 0.0) || !(conversion.band_low_hz < conversion.band_high_hz)) {
    bad("conversion", "band must satisfy 0 <= low < high");
  }
  if (conversion.n_shift_range < 0) bad("conversion.n_shift_range", "must be non-negative");
  if (!(similarity.max_shift_s >= 0.0)) bad("similarity.max_shift_s", "must be non-negative");
  if (similarity.step_cols == 0) bad("similarity.step_cols", "must be positive");
  if (!std::isfinite(similarity.eta)) bad("similarity.eta", "must be finite");
  if (!(crop_margin_s >= 0.0)) bad("crop_margin_s", "must be non-negative");
  if (time_upsample == 0 || time_upsample > 64) bad("time_upsample", "must lie in 1..64");
}

VerifyConfig parse_config(std::string_view json_text) {
  const Json j = Json::parse(json_text, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::kInvalidArgument, "config is not valid JSON");
  VerifyConfig c;
  {
    Reader root(j, "$");
    if (const Json* m = root.object("mic")) {
      Reader r(*m, root.child("mic"));
      r.number("band_low_hz", c.mic.band_low_hz);
      r.number("band_high_hz", c.mic.band_high_hz);
      r.integer("filter_order", c.mic.filter_order);
      read_stft(r, c.mic.stft);
      r.boolean("scale_fft_with_rate", c.mic.scale_fft_with_rate);
      r.number("reference_rate_hz", c.mic.reference_rate_hz);
      r.number("silence_level", c.mic.silence_level);
      if (const Json* s = r.object("segmentation")) {
        read_segmentation(*s, r.child("segmentation"), c.mic.segmentation);
      }
      r.finish();
    }
    if (const Json* a = root.object("accel")) {
      Reader r(*a, root.child("accel"));
      r.number("highpass_hz", c.accel.highpass_hz);
      r.integer("filter_order", c.accel.filter_order);
      read_stft(r, c.accel.stft);
      r.number("axis_min_hz", c.accel.axis_min_hz);
      r.number("w_t_s", c.accel.w_t_s);
      if (const Json* s = r.object("segmentation")) {
        read_segmentation(*s, r.child("segmentation"), c.accel.segmentation);
      }
      r.finish();
    }
    if (const Json* cv = root.object("conversion")) {
      Reader r(*cv, root.child("conversion"));
      r.number("band_low_hz", c.conversion.band_low_hz);
      r.number("band_high_hz", c.conversion.band_high_hz);
      r.optional_number("amp_threshold_db", c.conversion.amp_threshold_db);
      r.integer("n_shift_range", c.conversion.n_shift_range);
      r.finish();
    }
    if (const Json* s = root.object("similarity")) {
      Reader r(*s, root.child("similarity"));
      r.number("max_shift_s", c.similarity.max_shift_s);
      r.integer("step_cols", c.similarity.step_cols);
      r.number("eta", c.similarity.eta);
      r.boolean("centered", c.similarity.centered);
      r.finish();
    }
    root.number("crop_margin_s", c.crop_margin_s);
    root.boolean("compare_above_highpass", c.compare_above_highpass);
    root.integer("time_upsample", c.time_upsample);
    root.finish();
  }
  c.validate();
  return c;
}

VerifyConfig load_config(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return parse_config(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

std::string config_to_json(const VerifyConfig& c) {
  Json j;
  auto& mic = j["mic"];
  mic["band_low_hz"] = c.mic.band_low_hz;
  mic["band_high_hz"] = c.mic.band_high_hz;
  mic["filter_order"] = c.mic.filter_order;
  mic["n_fft"] = c.mic.stft.n_fft;
  mic["hop"] = c.mic.stft.hop;
  mic["window"] = std::string(to_string(c.mic.stft.window));
  mic["scale_fft_with_rate"] = c.mic.scale_fft_with_rate;
  mic["reference_rate_hz"] = c.mic.reference_rate_hz;
  mic["silence_level"] = c.mic.silence_level;
  mic["segmentation"] = segmentation_json(c.mic.segmentation);
  auto& acc = j["accel"];
  acc["highpass_hz"] = c.accel.highpass_hz;
  acc["filter_order"] = c.accel.filter_order;
  acc["n_fft"] = c.accel.stft.n_fft;
  acc["hop"] = c.accel.stft.hop;
  acc["window"] = std::string(to_string(c.accel.stft.window));
  acc["axis_min_hz"] = c.accel.axis_min_hz;
  acc["w_t_s"] = c.accel.w_t_s;
  acc["segmentation"] = segmentation_json(c.accel.segmentation);
  auto& cv = j["conversion"];
  cv["band_low_hz"] = c.conversion.band_low_hz;
  cv["band_high_hz"] = c.conversion.band_high_hz;
  cv["amp_threshold_db"] =
      c.conversion.amp_threshold_db ? Json(*c.conversion.amp_threshold_db) : Json(nullptr);
  cv["n_shift_range"] = c.conversion.n_shift_range;
  auto& s = j["similarity"];
  s["max_shift_s"] = c.similarity.max_shift_s;
  s["step_cols"] = c.similarity.step_cols;
  s["eta"] = c.similarity.eta;
  s["centered"] = c.similarity.centered;
  j["crop_margin_s"] = c.crop_margin_s;
  j["compare_above_highpass"] = c.compare_above_highpass;
  j["time_upsample"] = c.time_upsample;
  return j.dump();
}

std::string config_hash(const VerifyConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char ch : config_to_json(config)) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace vibraverify
