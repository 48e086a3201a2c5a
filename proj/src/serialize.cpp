#include "serialize.hpp"

#include <fstream>
#include <sstream>

#include "error.hpp"

namespace rirlab {

using nlohmann::json;

void to_json(json& j, const Vec3& v) { j = json::array({v.x, v.y, v.z}); }

void from_json(const json& j, Vec3& v) {
  if (!j.is_array() || j.size() != 3) fail(ErrorCode::kFormat, "expected a 3-vector");
  v = {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

void to_json(json& j, const RoomSpec& room) {
  j = json{{"width", room.width},
           {"length", room.length},
           {"height", room.height},
           {"absorption", room.absorption},
           {"materials", room.materials}};
}

void from_json(const json& j, RoomSpec& room) {
  room.width = j.at("width").get<double>();
  room.length = j.at("length").get<double>();
  room.height = j.at("height").get<double>();
  const auto& a = j.at("absorption");
  if (a.is_number()) {
    room.absorption.fill(a.get<double>());
  } else {
    if (!a.is_array() || a.size() != kNumSurfaces) {
      fail(ErrorCode::kFormat, "absorption must be a number or 6 numbers");
    }
    for (int s = 0; s < kNumSurfaces; ++s) room.absorption[s] = a[s].get<double>();
  }
  room.materials = {};
  if (j.contains("materials") && j.at("materials").is_array()) {
    const auto& m = j.at("materials");
    for (std::size_t s = 0; s < m.size() && s < kNumSurfaces; ++s) {
      room.materials[s] = m[s].get<std::string>();
    }
  }
}

void to_json(json& j, const SourceReceiverPair& pair) {
  j = json{{"source", pair.source}, {"mic", pair.mic}, {"r", pair.r}};
}

void from_json(const json& j, SourceReceiverPair& pair) {
  pair = SourceReceiverPair::make(j.at("source").get<Vec3>(), j.at("mic").get<Vec3>());
  if (j.contains("r")) pair.r = j.at("r").get<double>();
}

void to_json(json& j, const SimConfig& cfg) {
  j = json{{"sample_rate", cfg.sample_rate},
           {"speed_of_sound", cfg.speed_of_sound},
           {"max_image_order", cfg.max_image_order},
           {"frac_delay_taps", cfg.frac_delay_taps},
           {"seed", cfg.seed}};
}

void from_json(const json& j, SimConfig& cfg) {
  cfg = SimConfig{};
  cfg.sample_rate = j.value("sample_rate", cfg.sample_rate);
  cfg.speed_of_sound = j.value("speed_of_sound", cfg.speed_of_sound);
  cfg.max_image_order = j.value("max_image_order", cfg.max_image_order);
  cfg.frac_delay_taps = j.value("frac_delay_taps", cfg.frac_delay_taps);
  cfg.seed = j.value("seed", cfg.seed);
}

void to_json(json& j, const Boundaries& b) {
  j = json{{"tau_d", b.tau_d}, {"t_d", b.t_d},     {"t_mix", b.t_mix},
           {"guard", b.guard}, {"fade", b.fade}};
}

void from_json(const json& j, Boundaries& b) {
  b.tau_d = j.at("tau_d").get<double>();
  b.t_d = j.at("t_d").get<double>();
  b.t_mix = j.at("t_mix").get<double>();
  b.guard = j.at("guard").get<double>();
  b.fade = j.at("fade").get<double>();
}

void to_json(json& j, const DecalibrationDraw& d) {
  j = json{{"delta", d.delta}, {"gain_db", d.gain_db}};
}

void from_json(const json& j, DecalibrationDraw& d) {
  d.delta = j.at("delta").get<long>();
  d.gain_db = j.at("gain_db").get<double>();
}

json decibels_json(const Decibels& d) { return d.unbounded ? json(nullptr) : json(d.db); }

Decibels decibels_from_json(const json& j) {
  if (j.is_null()) return Decibels::infinite();
  return {j.get<double>(), false};
}

json sidecar_json(const RirSidecar& s) {
  json j{{"tau_d", s.tau_d}, {"seed", s.seed}, {"config", s.config}};
  j["room"] = s.room ? json(*s.room) : json(nullptr);
  j["pair"] = s.pair ? json(*s.pair) : json(nullptr);
  return j;
}

RirSidecar sidecar_from_json(const json& j) {
  RirSidecar s;
  try {
    s.tau_d = j.at("tau_d").get<double>();
    s.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("config")) s.config = j.at("config").get<SimConfig>();
    if (j.contains("room") && !j.at("room").is_null()) s.room = j.at("room").get<RoomSpec>();
    if (j.contains("pair") && !j.at("pair").is_null()) {
      s.pair = j.at("pair").get<SourceReceiverPair>();
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kFormat, std::string("RIR sidecar: ") + e.what());
  }
  return s;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorCode::kIo, "short write to " + path);
}

}  // namespace rirlab
