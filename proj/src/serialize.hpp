#pragma once

// nlohmann::json adapters for the core value types.

#include <json.hpp>

#include "acoustics.hpp"
#include "rir_ops.hpp"
#include "room_sim.hpp"
#include "scenario.hpp"

namespace rirlab {

void to_json(nlohmann::json& j, const Vec3& v);
void from_json(const nlohmann::json& j, Vec3& v);
void to_json(nlohmann::json& j, const RoomSpec& room);
void from_json(const nlohmann::json& j, RoomSpec& room);
void to_json(nlohmann::json& j, const SourceReceiverPair& pair);
void from_json(const nlohmann::json& j, SourceReceiverPair& pair);
void to_json(nlohmann::json& j, const SimConfig& cfg);
void from_json(const nlohmann::json& j, SimConfig& cfg);
void to_json(nlohmann::json& j, const Boundaries& b);
void from_json(const nlohmann::json& j, Boundaries& b);
void to_json(nlohmann::json& j, const DecalibrationDraw& d);
void from_json(const nlohmann::json& j, DecalibrationDraw& d);

// Unbounded levels serialise as null.
nlohmann::json decibels_json(const Decibels& d);
Decibels decibels_from_json(const nlohmann::json& j);

// RIR sidecar: {room, pair, tau_d, seed, config}. Room and pair are
// optional when the RIR did not come from the simulator.
struct RirSidecar {
  std::optional<RoomSpec> room;
  std::optional<SourceReceiverPair> pair;
  double tau_d = 0.0;
  std::uint64_t seed = 0;
  SimConfig config;
};

nlohmann::json sidecar_json(const RirSidecar& s);
RirSidecar sidecar_from_json(const nlohmann::json& j);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace rirlab
