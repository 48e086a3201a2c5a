#include "room_sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "error.hpp"

namespace rirlab {

namespace {

using nlohmann::json;

// Versioned broadband absorption table (13 wall, 7 floor, 8 ceiling
// materials). Mirrors data/materials.json.
constexpr const char* kBuiltinMaterials = R"json({
  "version": 1,
  "wall": [
    {"name": "painted_concrete", "absorption": 0.02},
    {"name": "glazed_brick", "absorption": 0.03},
    {"name": "smooth_plaster", "absorption": 0.05},
    {"name": "gypsum_board", "absorption": 0.08},
    {"name": "wood_panel", "absorption": 0.10},
    {"name": "glass_window", "absorption": 0.12},
    {"name": "plywood_paneling", "absorption": 0.15},
    {"name": "cinder_block", "absorption": 0.25},
    {"name": "light_curtain", "absorption": 0.35},
    {"name": "fabric_panel", "absorption": 0.45},
    {"name": "heavy_curtain", "absorption": 0.55},
    {"name": "thin_foam", "absorption": 0.70},
    {"name": "acoustic_panel", "absorption": 0.90}
  ],
  "floor": [
    {"name": "concrete", "absorption": 0.02},
    {"name": "linoleum", "absorption": 0.03},
    {"name": "hardwood", "absorption": 0.07},
    {"name": "parquet_on_concrete", "absorption": 0.10},
    {"name": "thin_carpet", "absorption": 0.20},
    {"name": "carpet_on_pad", "absorption": 0.35},
    {"name": "heavy_carpet", "absorption": 0.55}
  ],
  "ceiling": [
    {"name": "concrete", "absorption": 0.02},
    {"name": "plaster", "absorption": 0.03},
    {"name": "gypsum", "absorption": 0.06},
    {"name": "wood", "absorption": 0.10},
    {"name": "suspended_tile", "absorption": 0.30},
    {"name": "mineral_fiber", "absorption": 0.50},
    {"name": "perforated_panel", "absorption": 0.65},
    {"name": "acoustic_tile", "absorption": 0.80}
  ]
})json";

std::vector<Material> parse_materials(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array() || j.at(key).empty()) {
    fail(ErrorCode::kFormat, std::string("material table lacks '") + key + "'");
  }
  std::vector<Material> out;
  for (const auto& m : j.at(key)) {
    Material mat{m.at("name").get<std::string>(), m.at("absorption").get<double>()};
    if (!(mat.absorption > 0.0 && mat.absorption <= 1.0)) {
      fail(ErrorCode::kFormat, "absorption of '" + mat.name + "' outside (0, 1]");
    }
    out.push_back(std::move(mat));
  }
  return out;
}

// Images of a single axis with a given reflection count, relative to the
// receiver coordinate. One image for order 0, two otherwise.
struct AxisImage {
  double offset;  // image coordinate minus mic coordinate
  double gain;    // beta_lo^n_lo * beta_hi^n_hi
};

std::vector<std::vector<AxisImage>> axis_images(double extent, double src, double mic,
                                                double beta_lo, double beta_hi,
                                                int max_order) {
  std::vector<std::vector<AxisImage>> out(max_order + 1);
  out[0].push_back({src - mic, 1.0});
  // Unfold the two reflection chains, starting at either wall.
  double from_lo = src;
  double from_hi = src;
  for (int k = 1; k <= max_order; ++k) {
    if (k % 2 == 1) {
      from_lo = -from_lo;
      from_hi = 2.0 * extent - from_hi;
    } else {
      from_lo = 2.0 * extent - from_lo;
      from_hi = -from_hi;
    }
    const int major = (k + 1) / 2;
    const int minor = k / 2;
    const double g_lo_first = std::pow(beta_lo, major) * std::pow(beta_hi, minor);
    const double g_hi_first = std::pow(beta_hi, major) * std::pow(beta_lo, minor);
    out[k].push_back({from_lo - mic, g_lo_first});
    out[k].push_back({from_hi - mic, g_hi_first});
  }
  return out;
}

}  // namespace

double distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double RoomSpec::surface_area(Surface s) const {
  switch (s) {
    case kWallX0:
    case kWallX1:
      return length * height;
    case kWallY0:
    case kWallY1:
      return width * height;
    case kFloor:
    case kCeiling:
      return width * length;
    default:
      return 0.0;
  }
}

double RoomSpec::total_surface_area() const {
  return 2.0 * (width * length + width * height + length * height);
}

SourceReceiverPair SourceReceiverPair::make(const Vec3& source, const Vec3& mic) {
  return {source, mic, distance(source, mic)};
}

void validate_room(const RoomSpec& room, const GeometryLimits& limits) {
  auto in = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
  if (!in(room.width, limits.min_width, limits.max_width) ||
      !in(room.length, limits.min_width, limits.max_width)) {
    fail(ErrorCode::kInvalidArgument, "room width/length outside limits");
  }
  if (!in(room.height, limits.min_height, limits.max_height)) {
    fail(ErrorCode::kInvalidArgument, "room height outside limits");
  }
  for (double a : room.absorption) {
    if (!(a > 0.0 && a <= 1.0)) {
      fail(ErrorCode::kInvalidArgument, "absorption outside (0, 1]");
    }
  }
}

void validate_pair(const RoomSpec& room, const SourceReceiverPair& pair,
                   const GeometryLimits& limits) {
  const double m = limits.surface_margin;
  for (const Vec3* p : {&pair.source, &pair.mic}) {
    if (p->z < limits.min_elevation || p->z > limits.max_elevation) {
      fail(ErrorCode::kInvalidArgument, "source/mic height outside limits");
    }
    if (!(p->x > m && p->x < room.width - m && p->y > m && p->y < room.length - m &&
          p->z > m && p->z < room.height - m)) {
      fail(ErrorCode::kInvalidArgument, "source/mic too close to a surface");
    }
  }
  if (!(pair.r > limits.min_distance)) {
    fail(ErrorCode::kInvalidArgument, "source-receiver distance too small");
  }
  if (std::abs(pair.r - distance(pair.source, pair.mic)) > 1e-9) {
    fail(ErrorCode::kInvalidArgument, "cached distance is stale");
  }
}

void SimConfig::validate() const {
  if (!(sample_rate > 0.0)) fail(ErrorCode::kInvalidArgument, "sample_rate must be > 0");
  if (!(speed_of_sound > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "speed_of_sound must be > 0");
  }
  if (max_image_order < 0) fail(ErrorCode::kInvalidArgument, "max_image_order must be >= 0");
  if (frac_delay_taps < 3 || frac_delay_taps % 2 == 0) {
    fail(ErrorCode::kInvalidArgument, "frac_delay_taps must be odd and >= 3");
  }
}

const MaterialTable& MaterialTable::builtin() {
  static const MaterialTable table = from_json_text(kBuiltinMaterials);
  return table;
}

MaterialTable MaterialTable::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kFormat, std::string("material table: ") + e.what());
  }
  MaterialTable t;
  t.version = j.value("version", 1);
  t.wall = parse_materials(j, "wall");
  t.floor = parse_materials(j, "floor");
  t.ceiling = parse_materials(j, "ceiling");
  return t;
}

MaterialTable MaterialTable::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open material table " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string MaterialTable::to_json_text() const {
  auto dump = [](const std::vector<Material>& v) {
    json a = json::array();
    for (const auto& m : v) a.push_back({{"name", m.name}, {"absorption", m.absorption}});
    return a;
  };
  json j{{"version", version}, {"wall", dump(wall)}, {"floor", dump(floor)},
         {"ceiling", dump(ceiling)}};
  return j.dump(2);
}

std::pair<RoomSpec, SourceReceiverPair> sample_configuration(
    Rng& rng, double target_distance, double tol, const MaterialTable& materials,
    const GeometryLimits& limits) {
  if (!(target_distance >= limits.min_distance) || !(tol > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "target distance must be >= 1 m and tol > 0");
  }
  const double r_lo = std::max(target_distance - tol, limits.min_distance);
  const double r_hi = target_distance + tol;

  // Longest placement any admissible room can hold.
  const double span = limits.max_width - 2.0 * limits.surface_margin;
  const double rise = limits.max_elevation - limits.min_elevation;
  const double reach = std::sqrt(2.0 * span * span + rise * rise);
  if (r_lo >= reach) {
    fail(ErrorCode::kGeometryInfeasible,
         "target distance exceeds the largest admissible room diagonal");
  }

  auto pick = [&rng](const std::vector<Material>& v) -> const Material& {
    std::uniform_int_distribution<std::size_t> d(0, v.size() - 1);
    return v[d(rng)];
  };
  const double m = limits.surface_margin;

  for (int attempt = 0; attempt < kRejectionAttempts; ++attempt) {
    RoomSpec room;
    room.width = uniform(rng, limits.min_width, limits.max_width);
    room.length = uniform(rng, limits.min_width, limits.max_width);
    room.height = uniform(rng, limits.min_height, limits.max_height);
    for (int s = kWallX0; s <= kWallY1; ++s) {
      const Material& mat = pick(materials.wall);
      room.absorption[s] = mat.absorption;
      room.materials[s] = mat.name;
    }
    const Material& fl = pick(materials.floor);
    room.absorption[kFloor] = fl.absorption;
    room.materials[kFloor] = fl.name;
    const Material& ce = pick(materials.ceiling);
    room.absorption[kCeiling] = ce.absorption;
    room.materials[kCeiling] = ce.name;

    const double z_lo = std::max(limits.min_elevation, m);
    const double z_hi = std::min(limits.max_elevation, room.height - m);
    const double r = uniform(rng, r_lo, r_hi);
    Vec3 mic{uniform(rng, m, room.width - m), uniform(rng, m, room.length - m),
             uniform(rng, z_lo, z_hi)};
    const double zs = uniform(rng, z_lo, z_hi);
    const double theta = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    if (z_hi <= z_lo) continue;
    const double dz = zs - mic.z;
    if (std::abs(dz) >= r) continue;
    const double horiz = std::sqrt(r * r - dz * dz);
    Vec3 src{mic.x + horiz * std::cos(theta), mic.y + horiz * std::sin(theta), zs};
    auto pair = SourceReceiverPair::make(src, mic);
    if (pair.r < r_lo || pair.r > r_hi) continue;
    try {
      validate_pair(room, pair, limits);
    } catch (const Error&) {
      continue;
    }
    return {room, pair};
  }
  fail(ErrorCode::kGeometryInfeasible, "no admissible configuration after " +
                                           std::to_string(kRejectionAttempts) +
                                           " attempts");
}

double windowed_sinc(double x, int taps) {
  const double half = static_cast<double>(taps / 2) + 1.0;
  if (std::abs(x) >= half) return 0.0;
  const double w = 0.5 * (1.0 + std::cos(std::numbers::pi * x / half));
  if (x == 0.0) return w;
  const double px = std::numbers::pi * x;
  return w * std::sin(px) / px;
}

std::vector<ImageSource> enumerate_images(const RoomSpec& room,
                                          const SourceReceiverPair& pair,
                                          const SimConfig& cfg) {
  cfg.validate();
  const int n = cfg.max_image_order;
  std::array<double, kNumSurfaces> beta{};
  for (int s = 0; s < kNumSurfaces; ++s) beta[s] = std::sqrt(1.0 - room.absorption[s]);

  const auto ax = axis_images(room.width, pair.source.x, pair.mic.x, beta[kWallX0],
                              beta[kWallX1], n);
  const auto ay = axis_images(room.length, pair.source.y, pair.mic.y, beta[kWallY0],
                              beta[kWallY1], n);
  const auto az = axis_images(room.height, pair.source.z, pair.mic.z, beta[kFloor],
                              beta[kCeiling], n);

  std::vector<ImageSource> images;
  for (int kx = 0; kx <= n; ++kx) {
    for (int ky = 0; kx + ky <= n; ++ky) {
      for (int kz = 0; kx + ky + kz <= n; ++kz) {
        for (const auto& ix : ax[kx]) {
          for (const auto& iy : ay[ky]) {
            for (const auto& iz : az[kz]) {
              const double gain = ix.gain * iy.gain * iz.gain;
              if (gain == 0.0 && kx + ky + kz > 0) continue;
              const double d =
                  std::sqrt(ix.offset * ix.offset + iy.offset * iy.offset +
                            iz.offset * iz.offset);
              ImageSource img;
              img.position = {pair.mic.x + ix.offset, pair.mic.y + iy.offset,
                              pair.mic.z + iz.offset};
              img.delay = d / cfg.speed_of_sound;
              img.amplitude = gain / d;
              img.order = kx + ky + kz;
              images.push_back(img);
            }
          }
        }
      }
    }
  }
  return images;
}

Rir simulate_rir(const RoomSpec& room, const SourceReceiverPair& pair,
                 const SimConfig& cfg) {
  cfg.validate();
  const auto images = enumerate_images(room, pair, cfg);
  const int half = cfg.frac_delay_taps / 2;

  long long last = 0;
  for (const auto& img : images) {
    last = std::max(last, std::llround(img.delay * cfg.sample_rate) + half);
  }

  Rir rir;
  rir.sample_rate = cfg.sample_rate;
  rir.tau_d = pair.r / cfg.speed_of_sound;
  rir.samples.assign(static_cast<std::size_t>(last + 1), 0.0);

  const double window_half = static_cast<double>(half) + 1.0;
  const double dphi = std::numbers::pi / window_half;
  const double two_cos_dphi = 2.0 * std::cos(dphi);
  std::vector<double> kernel(static_cast<std::size_t>(2 * half + 1));
  for (const auto& img : images) {
    const double center = img.delay * cfg.sample_rate;
    const long long n0 = std::llround(center);
    const double frac = static_cast<double>(n0) - center;  // in [-0.5, 0.5]
    // sin(pi (frac + j)) = (-1)^j sin(pi frac); the Hann term follows a
    // Chebyshev recurrence in j.
    const double s0 = std::sin(std::numbers::pi * frac);
    double c_prev = std::cos(dphi * (frac - half - 1));
    double c_cur = std::cos(dphi * (frac - half));
    for (int j = -half; j <= half; ++j) {
      const double x = frac + j;
      const double w = 0.5 * (1.0 + c_cur);
      double v;
      if (x == 0.0) {
        v = 1.0;
      } else {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        v = sign * s0 / (std::numbers::pi * x);
      }
      kernel[static_cast<std::size_t>(j + half)] = w * v;
      const double c_next = two_cos_dphi * c_cur - c_prev;
      c_prev = c_cur;
      c_cur = c_next;
    }
    for (int j = -half; j <= half; ++j) {
      const long long idx = n0 + j;
      if (idx < 0) continue;
      rir.samples[static_cast<std::size_t>(idx)] +=
          img.amplitude * kernel[static_cast<std::size_t>(j + half)];
    }
  }
  return rir;
}

int default_image_order(const RoomSpec& room, const SourceReceiverPair& pair,
                        double speed_of_sound) {
  const double needed = speed_of_sound * (sabine_t60(room) + 0.1);
  const auto ax = axis_images(room.width, pair.source.x, pair.mic.x, 1.0, 1.0,
                              kMaxDefaultOrder);
  const auto ay = axis_images(room.length, pair.source.y, pair.mic.y, 1.0, 1.0,
                              kMaxDefaultOrder);
  const auto az = axis_images(room.height, pair.source.z, pair.mic.z, 1.0, 1.0,
                              kMaxDefaultOrder);
  auto reach = [](const std::vector<AxisImage>& v) {
    double r = 0.0;
    for (const auto& i : v) r = std::max(r, std::abs(i.offset));
    return r;
  };
  for (int n = 0; n <= kMaxDefaultOrder; ++n) {
    double longest = 0.0;
    for (int kx = 0; kx <= n; ++kx) {
      for (int ky = 0; kx + ky <= n; ++ky) {
        const int kz = n - kx - ky;
        const double dx = reach(ax[kx]);
        const double dy = reach(ay[ky]);
        const double dz = reach(az[kz]);
        longest = std::max(longest, std::sqrt(dx * dx + dy * dy + dz * dz));
      }
    }
    if (longest > needed) return n;
  }
  return kMaxDefaultOrder;
}

double sabine_t60(const RoomSpec& room) {
  double a = 0.0;
  for (int s = 0; s < kNumSurfaces; ++s) {
    a += room.surface_area(static_cast<Surface>(s)) * room.absorption[s];
  }
  if (!(a > 0.0)) fail(ErrorCode::kDegenerateRoom, "total absorption area is zero");
  return 0.161 * room.volume() / a;
}

double mean_free_path(const RoomSpec& room) {
  return 4.0 * room.volume() / room.total_surface_area();
}

}  // namespace rirlab
