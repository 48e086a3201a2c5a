#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rir.hpp"
#include "rng.hpp"

namespace rirlab {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double distance(const Vec3& a, const Vec3& b);

// Surface order used for absorption and reflection bookkeeping.
enum Surface : int {
  kWallX0 = 0,  // x = 0
  kWallX1,      // x = width
  kWallY0,      // y = 0
  kWallY1,      // y = length
  kFloor,       // z = 0
  kCeiling,     // z = height
  kNumSurfaces
};

// Shoebox room with broadband absorption per surface.
struct RoomSpec {
  double width = 0.0;   // x extent, m
  double length = 0.0;  // y extent, m
  double height = 0.0;  // z extent, m
  std::array<double, kNumSurfaces> absorption{};
  std::array<std::string, kNumSurfaces> materials{};  // informational

  double volume() const { return width * length * height; }
  double surface_area(Surface s) const;
  double total_surface_area() const;
};

struct SourceReceiverPair {
  Vec3 source;
  Vec3 mic;
  double r = 0.0;  // cached |source - mic|

  static SourceReceiverPair make(const Vec3& source, const Vec3& mic);
};

// Table of sampling constraints for room and placement draws.
struct GeometryLimits {
  double min_width = 3.0, max_width = 15.0;  // also applies to length
  double min_height = 2.0, max_height = 7.0;
  double min_elevation = 1.5, max_elevation = 2.2;
  double surface_margin = 0.5;
  double min_distance = 1.0;
};

// Throws InvalidArgument naming the violated bound.
void validate_room(const RoomSpec& room, const GeometryLimits& limits = {});
// Placement checks only (heights, margins, distance); room dims are not checked.
void validate_pair(const RoomSpec& room, const SourceReceiverPair& pair,
                   const GeometryLimits& limits = {});

struct SimConfig {
  double sample_rate = 16000.0;
  double speed_of_sound = 343.0;
  int max_image_order = 0;
  int frac_delay_taps = 81;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Material {
  std::string name;
  double absorption = 0.0;
};

struct MaterialTable {
  int version = 1;
  std::vector<Material> wall;
  std::vector<Material> floor;
  std::vector<Material> ceiling;

  static const MaterialTable& builtin();
  static MaterialTable from_json_file(const std::string& path);
  static MaterialTable from_json_text(const std::string& text);
  std::string to_json_text() const;
};

// Rejection budget shared by every sample_configuration call.
inline constexpr int kRejectionAttempts = 10000;

// Draws a room and a placement with |r - target_distance| <= tol. Each
// attempt draws a fresh room, with an independent material per surface;
// GeometryInfeasible after kRejectionAttempts.
std::pair<RoomSpec, SourceReceiverPair> sample_configuration(
    Rng& rng, double target_distance, double tol,
    const MaterialTable& materials = MaterialTable::builtin(),
    const GeometryLimits& limits = {});

// One image source as rendered into the RIR.
struct ImageSource {
  Vec3 position;
  double delay = 0.0;      // seconds
  double amplitude = 0.0;  // (prod beta) / distance
  int order = 0;
};

// All image sources with total reflection order <= cfg.max_image_order.
std::vector<ImageSource> enumerate_images(const RoomSpec& room,
                                          const SourceReceiverPair& pair,
                                          const SimConfig& cfg);

Rir simulate_rir(const RoomSpec& room, const SourceReceiverPair& pair,
                 const SimConfig& cfg);

// Smallest order whose longest image path exceeds c * (T60 + 0.1 s),
// capped at kMaxDefaultOrder.
inline constexpr int kMaxDefaultOrder = 60;
int default_image_order(const RoomSpec& room, const SourceReceiverPair& pair,
                        double speed_of_sound);

double sabine_t60(const RoomSpec& room);
double mean_free_path(const RoomSpec& room);

// Hann-windowed sinc evaluated at offset x (samples) from the kernel center.
double windowed_sinc(double x, int taps);

}  // namespace rirlab
