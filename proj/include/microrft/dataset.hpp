#pragma once

// Dataset schemas and ingestion: the trajectory text codec, JSON-lines
// load/save with occupancy-grid sidecar files, reformatting of mixed
// rationale+answer annotations, and a deterministic synthetic scenario
// generator for desk-scale runs.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "microrft/types.hpp"
#include "microrft/util.hpp"

namespace microrft {

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Trajectory text codec
// ---------------------------------------------------------------------------

// Canonical form "[(x1,y1), (x2,y2), ..., (x6,y6)]" with fixed decimals.
inline std::string trajectory_to_text(const Trajectory& t, int decimals) {
  if (decimals < 1 || decimals > 4) throw std::invalid_argument("decimals must be in [1, 4]");
  std::string out = "[";
  char buf[64];
  for (int i = 0; i < kTrajectoryPoints; ++i) {
    std::snprintf(buf, sizeof(buf), "(%.*f,%.*f)", decimals, t.points[i].x, decimals,
                  t.points[i].y);
    if (i > 0) out += ", ";
    out += buf;
  }
  out += "]";
  return out;
}

namespace detail {

struct Cursor {
  std::string_view s;
  std::size_t pos{0};

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool parse_number(double& out) {
    skip_ws();
    const char* begin = s.data() + pos;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{} || ptr == begin) return false;
    pos += static_cast<std::size_t>(ptr - begin);
    return std::isfinite(out);
  }
};

} // namespace detail

// Tolerant-whitespace parser for the canonical trajectory form. A failure is
// data (zero trajectory reward), never a crash.
inline Result<Trajectory> text_to_trajectory(std::string_view text) {
  detail::Cursor c{text};
  auto fail = [&](const std::string& what) {
    return Result<Trajectory>::failure("trajectory parse error at offset " +
                                       std::to_string(c.pos) + ": " + what);
  };
  if (!c.eat('[')) return fail("expected '['");
  std::vector<Waypoint> pts;
  while (true) {
    if (!c.eat('(')) return fail("expected '('");
    Waypoint w;
    if (!c.parse_number(w.x)) return fail("expected finite x coordinate");
    if (!c.eat(',')) return fail("expected ',' inside pair");
    if (!c.parse_number(w.y)) return fail("expected finite y coordinate");
    if (!c.eat(')')) return fail("expected ')'");
    pts.push_back(w);
    if (c.eat(',')) continue;
    break;
  }
  if (!c.eat(']')) return fail("expected ']'");
  c.skip_ws();
  if (c.pos != text.size()) return fail("trailing characters after ']'");
  if (pts.size() != static_cast<std::size_t>(kTrajectoryPoints)) {
    return fail("expected " + std::to_string(kTrajectoryPoints) + " waypoints, got " +
                std::to_string(pts.size()));
  }
  return Result<Trajectory>::success(Trajectory::from_points(pts));
}

// ---------------------------------------------------------------------------
// Mixed-annotation reformatting
// ---------------------------------------------------------------------------

// Ordered split markers; the first marker found in the text wins.
struct SplitMarkerRules {
  std::vector<std::string> markers{"FINAL:", "Answer:", "ANSWER:"};
};

// Routes interleaved rationale+answer text into a think/answer pair. Already
// tag-encoded input decodes as-is, so the operation is idempotent. If no rule
// matches, the whole text becomes the answer and the result is flagged.
inline ReasonedResponse reformat_mixed_annotation(std::string_view raw,
                                                  const SplitMarkerRules& rules = {}) {
  ReasonedResponse decoded = tag_decode(raw);
  if (decoded.well_formed) return decoded;
  for (const auto& marker : rules.markers) {
    const auto pos = raw.find(marker);
    if (pos == std::string_view::npos) continue;
    ReasonedResponse out;
    out.think = std::string(trim(raw.substr(0, pos)));
    out.answer = std::string(trim(raw.substr(pos + marker.size())));
    out.well_formed = !out.answer.empty();
    return out;
  }
  ReasonedResponse out;
  out.answer = std::string(raw);
  out.well_formed = false;
  return out;
}

// ---------------------------------------------------------------------------
// Grid sidecar files
// ---------------------------------------------------------------------------

// Shortest round-trip decimal form, locale-independent.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

// Text sidecar: header line "microrft-grid 1", then resolution, origin and
// size lines, then ny rows of nx '0'/'1' characters (row iy = 0 first).
inline void save_grid(const std::filesystem::path& path, const OccupancyGrid& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write grid file: " + path.string());
  out << "microrft-grid 1\n";
  out << "res " << format_double(g.resolution) << "\n";
  out << "origin " << format_double(g.origin_x) << " " << format_double(g.origin_y) << "\n";
  out << "size " << g.nx << " " << g.ny << "\n";
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) out.put(g.at(ix, iy) ? '1' : '0');
    out.put('\n');
  }
  if (!out) throw DataError("failed writing grid file: " + path.string());
}

inline OccupancyGrid load_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open grid file: " + path.string());
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "microrft-grid" || version != 1) {
    throw DataError("bad grid header in " + path.string());
  }
  std::string key;
  double res = 0, ox = 0, oy = 0;
  int nx = 0, ny = 0;
  in >> key >> res;
  if (key != "res") throw DataError("bad grid 'res' line in " + path.string());
  in >> key >> ox >> oy;
  if (key != "origin") throw DataError("bad grid 'origin' line in " + path.string());
  in >> key >> nx >> ny;
  if (key != "size") throw DataError("bad grid 'size' line in " + path.string());
  if (!in || res <= 0 || nx <= 0 || ny <= 0) throw DataError("bad grid geometry in " + path.string());
  auto g = OccupancyGrid::make(res, ox, oy, nx, ny);
  std::string row;
  std::getline(in, row); // consume end of the size line
  for (int iy = 0; iy < ny; ++iy) {
    if (!std::getline(in, row) || row.size() < static_cast<std::size_t>(nx)) {
      throw DataError("truncated grid row " + std::to_string(iy) + " in " + path.string());
    }
    for (int ix = 0; ix < nx; ++ix) {
      const char c = row[ix];
      if (c != '0' && c != '1') throw DataError("bad grid cell character in " + path.string());
      g.at(ix, iy) = c == '1' ? 1 : 0;
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// JSON-lines dataset IO
// ---------------------------------------------------------------------------

namespace detail {

inline nlohmann::json trajectory_to_json(const Trajectory& t) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : t.points) arr.push_back({p.x, p.y});
  return arr;
}

inline Trajectory trajectory_from_json(const nlohmann::json& j, const std::string& ctx) {
  if (!j.is_array()) throw DataError(ctx + ": trajectory must be an array of [x,y] pairs");
  std::vector<Waypoint> pts;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw DataError(ctx + ": trajectory entries must be [x,y] number pairs");
    }
    pts.push_back({e[0].get<double>(), e[1].get<double>()});
  }
  if (pts.size() != static_cast<std::size_t>(kTrajectoryPoints)) {
    throw DataError(ctx + ": trajectory must have " + std::to_string(kTrajectoryPoints) +
                    " waypoints, got " + std::to_string(pts.size()));
  }
  return Trajectory::from_points(pts);
}

} // namespace detail

inline nlohmann::json sample_to_json(const Sample& s) {
  nlohmann::json j;
  j["id"] = s.id;
  j["task"] = std::string(to_string(s.task));
  j["question"] = s.question;
  j["reference_answer"] = s.reference_answer;
  j["features"] = s.features;
  if (s.gt_trajectory) j["gt_trajectory"] = detail::trajectory_to_json(*s.gt_trajectory);
  if (s.candidate_trajectory) {
    j["candidate_trajectory"] = detail::trajectory_to_json(*s.candidate_trajectory);
  }
  if (!s.grid_ref.empty()) j["grid_ref"] = s.grid_ref;
  return j;
}

inline Sample sample_from_json(const nlohmann::json& j, const std::string& ctx) {
  Sample s;
  auto need = [&](const char* field) -> const nlohmann::json& {
    auto it = j.find(field);
    if (it == j.end()) throw DataError(ctx + ": missing field '" + field + "'");
    return *it;
  };
  s.id = need("id").get<std::string>();
  const std::string with_id = ctx + " (id '" + s.id + "')";
  try {
    s.task = task_from_string(need("task").get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw DataError(with_id + ": " + e.what());
  }
  s.question = need("question").get<std::string>();
  s.reference_answer = need("reference_answer").get<std::string>();
  const auto& feats = need("features");
  if (!feats.is_array()) throw DataError(with_id + ": 'features' must be an array of numbers");
  for (const auto& f : feats) {
    if (!f.is_number()) throw DataError(with_id + ": 'features' must be an array of numbers");
    s.features.push_back(f.get<double>());
  }
  if (auto it = j.find("gt_trajectory"); it != j.end() && !it->is_null()) {
    s.gt_trajectory = detail::trajectory_from_json(*it, with_id + ", field 'gt_trajectory'");
  }
  if (auto it = j.find("candidate_trajectory"); it != j.end() && !it->is_null()) {
    s.candidate_trajectory =
        detail::trajectory_from_json(*it, with_id + ", field 'candidate_trajectory'");
  }
  if (auto it = j.find("grid_ref"); it != j.end() && !it->is_null()) {
    s.grid_ref = it->get<std::string>();
  }
  if (s.task == TaskKind::trajectory && !s.gt_trajectory) {
    throw DataError(with_id + ": trajectory task requires 'gt_trajectory'");
  }
  if (s.task == TaskKind::counterfactual && !s.candidate_trajectory) {
    throw DataError(with_id + ": counterfactual task requires 'candidate_trajectory'");
  }
  return s;
}

// Loads a JSON-lines dataset; grid sidecars referenced by grid_ref are read
// relative to the dataset file's directory. Parse errors carry the line
// number and offending field; duplicate ids are an error.
inline std::vector<Sample> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset file: " + path.string());
  std::vector<Sample> samples;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const std::string ctx = path.string() + ":" + std::to_string(lineno);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(ctx + ": invalid JSON: " + e.what());
    }
    Sample s = sample_from_json(j, ctx);
    if (!seen_ids.insert(s.id).second) {
      throw DataError(ctx + ": duplicate id '" + s.id + "'");
    }
    if (!s.grid_ref.empty()) {
      s.grid = load_grid(path.parent_path() / s.grid_ref);
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

// Writes a JSON-lines dataset plus grid sidecars under <dir>/grids/. Samples
// carrying a grid but no grid_ref get one assigned from their id.
inline void save_dataset(const std::filesystem::path& path, std::vector<Sample> samples) {
  const auto dir = path.parent_path();
  if (!dir.empty()) std::filesystem::create_directories(dir);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write dataset file: " + path.string());
  for (auto& s : samples) {
    if (s.grid && s.grid_ref.empty()) s.grid_ref = "grids/" + s.id + ".grid";
    if (s.grid) {
      const auto grid_path = dir / s.grid_ref;
      std::filesystem::create_directories(grid_path.parent_path());
      save_grid(grid_path, *s.grid);
    }
    out << sample_to_json(s).dump() << "\n";
  }
  if (!out) throw DataError("failed writing dataset file: " + path.string());
}

// ---------------------------------------------------------------------------
// Synthetic scenario generator
// ---------------------------------------------------------------------------

struct GeneratorConfig {
  std::uint64_t seed{42};
  int n_trajectory{200};
  int n_open_qa{200};
  int n_counterfactual{200};
  double speed_min{1.0}; // m/s
  double speed_max{9.0};
  double curv_min{-0.015}; // 1/m, positive turns left
  double curv_max{0.015};
  double obstacle_density{0.02}; // fraction of candidate cells occupied
  double grid_resolution{0.5};   // m per cell
  double grid_x0{-2.0}, grid_x1{32.0};
  double grid_y0{-10.0}, grid_y1{10.0};
  double flag_probability{0.35}; // Bernoulli rate of obstacle flags in open_qa scenes
  double turn_threshold{0.003};  // |curvature| above which the scene counts as turning
  double cf_offset_max{3.0};     // counterfactual lateral perturbation range, m
  double cf_lateral_bound{2.0};  // offsets beyond this are unreasonable, m
  double clearance{2.8};         // obstacle-free radius around ground-truth waypoints, m

  void validate() const {
    if (n_trajectory < 0 || n_open_qa < 0 || n_counterfactual < 0) {
      throw DataError("sample counts must be >= 0");
    }
    if (!(speed_max > speed_min)) throw DataError("speed range is degenerate");
    if (!(curv_max > curv_min)) throw DataError("curvature range is degenerate");
    if (!(obstacle_density >= 0.0 && obstacle_density < 1.0)) {
      throw DataError("obstacle_density must be in [0, 1)");
    }
    if (!(grid_resolution > 0.0)) throw DataError("grid_resolution must be > 0");
    if (!(grid_x1 > grid_x0 && grid_y1 > grid_y0)) throw DataError("grid extent is degenerate");
    if (!(cf_offset_max > 0.0)) throw DataError("cf_offset_max must be > 0");
    if (!(cf_lateral_bound > 0.0)) throw DataError("cf_lateral_bound must be > 0");
  }
};

// Constant-speed, constant-curvature rollout sampled at 2 Hz for 3 s.
// Closed form: x(t) = sin(k*v*t)/k, y(t) = (1 - cos(k*v*t))/k for k != 0.
inline Trajectory kinematic_rollout(double speed, double curvature) {
  std::vector<Waypoint> pts;
  for (int i = 0; i < kTrajectoryPoints; ++i) {
    const double t = Trajectory::time_of(i);
    const double arc = speed * t;
    if (std::abs(curvature) < 1e-12) {
      pts.push_back({arc, 0.0});
    } else {
      pts.push_back({std::sin(curvature * arc) / curvature,
                     (1.0 - std::cos(curvature * arc)) / curvature});
    }
  }
  return Trajectory::from_points(pts);
}

// Documented feature layout, fixed length 8:
//   [0] speed m/s            [1] curvature 1/m       [2] goal lateral offset m
//   [3] obstacle ahead flag  [4] obstacle left flag  [5] obstacle right flag
//   [6] |candidate lateral offset| m (counterfactual only, else 0)
//   [7] candidate-hits-obstacle flag (counterfactual only, else 0)
inline constexpr int kFeatureDim = 8;

struct ObstacleFlags {
  bool ahead{false};
  bool left{false};
  bool right{false};
};

// Scene flags derived from the grid: occupied cell centers within 15 m ahead,
// bucketed by lateral band (|y| <= 2 ahead, 2 < y <= 6 left, -6 <= y < -2 right).
inline ObstacleFlags derive_obstacle_flags(const OccupancyGrid& g) {
  ObstacleFlags f;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      if (!g.at(ix, iy)) continue;
      const double cx = g.origin_x + (ix + 0.5) * g.resolution;
      const double cy = g.origin_y + (iy + 0.5) * g.resolution;
      if (cx <= 0.0 || cx > 15.0) continue;
      if (std::abs(cy) <= 2.0) f.ahead = true;
      else if (cy > 2.0 && cy <= 6.0) f.left = true;
      else if (cy < -2.0 && cy >= -6.0) f.right = true;
    }
  }
  return f;
}

// Deterministic open-QA rule table. The reference answer is a pure function
// of the scene features, which is what makes the knowledge-reward path
// verifiable offline.
struct QaRule {
  std::string question;
  std::string answer;
};

inline QaRule openqa_rule(double curvature, bool obstacle_ahead, double turn_threshold) {
  if (obstacle_ahead) {
    return {"Why are you decelerating?",
            "I am decelerating because there is an obstacle ahead."};
  }
  if (curvature > turn_threshold) {
    return {"Which way are you turning?", "I am turning left along the road curve."};
  }
  if (curvature < -turn_threshold) {
    return {"Which way are you turning?", "I am turning right along the road curve."};
  }
  return {"Why are you maintaining speed?",
          "I am maintaining speed because the road ahead is clear."};
}

inline constexpr std::string_view kCfYesAnswer =
    "Yes, the candidate trajectory is reasonable because it stays collision free near the lane.";
inline constexpr std::string_view kCfCollisionAnswer =
    "No, the candidate trajectory is not reasonable because it passes through an obstacle.";
inline constexpr std::string_view kCfDriftAnswer =
    "No, the candidate trajectory is not reasonable because it drifts too far from the lane.";

// Counterfactual label rule: unreasonable iff the perturbed path intersects an
// occupied cell (point-in-cell) or |offset| exceeds the lateral bound.
inline std::string_view counterfactual_answer(const Trajectory& candidate,
                                              const OccupancyGrid& grid, double offset,
                                              double lateral_bound) {
  for (const auto& p : candidate.points) {
    if (grid.occupied_at(p.x, p.y)) return kCfCollisionAnswer;
  }
  if (std::abs(offset) > lateral_bound) return kCfDriftAnswer;
  return kCfYesAnswer;
}

struct SyntheticDataset {
  std::vector<Sample> trajectory;
  std::vector<Sample> open_qa;
  std::vector<Sample> counterfactual;
};

namespace detail {

inline bool candidate_hits_grid(const Trajectory& t, const OccupancyGrid& g) {
  for (const auto& p : t.points) {
    if (g.occupied_at(p.x, p.y)) return true;
  }
  return false;
}

// Random obstacles everywhere except a clearance radius around the rollout
// waypoints (and the ego origin), so the ground truth itself stays free.
inline OccupancyGrid make_scene_grid(std::mt19937_64& rng, const GeneratorConfig& cfg,
                                     const Trajectory& gt) {
  const int nx = static_cast<int>(std::lround((cfg.grid_x1 - cfg.grid_x0) / cfg.grid_resolution));
  const int ny = static_cast<int>(std::lround((cfg.grid_y1 - cfg.grid_y0) / cfg.grid_resolution));
  auto g = OccupancyGrid::make(cfg.grid_resolution, cfg.grid_x0, cfg.grid_y0, nx, ny);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const bool occupied = uniform_double(rng) < cfg.obstacle_density;
      if (!occupied) continue;
      const double cx = g.origin_x + (ix + 0.5) * g.resolution;
      const double cy = g.origin_y + (iy + 0.5) * g.resolution;
      bool clear = std::hypot(cx, cy) < cfg.clearance;
      for (const auto& p : gt.points) {
        if (std::hypot(cx - p.x, cy - p.y) < cfg.clearance) {
          clear = true;
          break;
        }
      }
      if (!clear) g.at(ix, iy) = 1;
    }
  }
  return g;
}

inline std::string sample_id(std::string_view prefix, int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s-%06d", std::string(prefix).c_str(), i);
  return buf;
}

} // namespace detail

inline SyntheticDataset generate_synthetic(const GeneratorConfig& cfg) {
  cfg.validate();
  SyntheticDataset out;

  const auto traj_stream = stream_seed(cfg.seed, "trajectory");
  for (int i = 0; i < cfg.n_trajectory; ++i) {
    std::mt19937_64 rng(substream_seed(traj_stream, static_cast<std::uint64_t>(i)));
    Sample s;
    s.id = detail::sample_id("traj", i);
    s.task = TaskKind::trajectory;
    const double speed = uniform_range(rng, cfg.speed_min, cfg.speed_max);
    const double curv = uniform_range(rng, cfg.curv_min, cfg.curv_max);
    const Trajectory gt = kinematic_rollout(speed, curv);
    const OccupancyGrid grid = detail::make_scene_grid(rng, cfg, gt);
    const ObstacleFlags flags = derive_obstacle_flags(grid);
    s.question = "What is the planned trajectory for the next three seconds?";
    s.reference_answer = trajectory_to_text(gt, 2);
    s.features = {speed,
                  curv,
                  gt.points[kTrajectoryPoints - 1].y,
                  flags.ahead ? 1.0 : 0.0,
                  flags.left ? 1.0 : 0.0,
                  flags.right ? 1.0 : 0.0,
                  0.0,
                  0.0};
    s.gt_trajectory = gt;
    s.grid = grid;
    s.grid_ref = "grids/" + s.id + ".grid";
    out.trajectory.push_back(std::move(s));
  }

  const auto qa_stream = stream_seed(cfg.seed, "open_qa");
  for (int i = 0; i < cfg.n_open_qa; ++i) {
    std::mt19937_64 rng(substream_seed(qa_stream, static_cast<std::uint64_t>(i)));
    Sample s;
    s.id = detail::sample_id("qa", i);
    s.task = TaskKind::open_qa;
    const double speed = uniform_range(rng, cfg.speed_min, cfg.speed_max);
    const double curv = uniform_range(rng, cfg.curv_min, cfg.curv_max);
    const double goal_offset = uniform_range(rng, -3.0, 3.0);
    const bool ahead = uniform_double(rng) < cfg.flag_probability;
    const bool left = uniform_double(rng) < cfg.flag_probability;
    const bool right = uniform_double(rng) < cfg.flag_probability;
    const QaRule rule = openqa_rule(curv, ahead, cfg.turn_threshold);
    s.question = rule.question;
    s.reference_answer = rule.answer;
    s.features = {speed, curv, goal_offset, ahead ? 1.0 : 0.0,
                  left ? 1.0 : 0.0, right ? 1.0 : 0.0, 0.0, 0.0};
    out.open_qa.push_back(std::move(s));
  }

  const auto cf_stream = stream_seed(cfg.seed, "counterfactual");
  for (int i = 0; i < cfg.n_counterfactual; ++i) {
    std::mt19937_64 rng(substream_seed(cf_stream, static_cast<std::uint64_t>(i)));
    Sample s;
    s.id = detail::sample_id("cf", i);
    s.task = TaskKind::counterfactual;
    const double speed = uniform_range(rng, cfg.speed_min, cfg.speed_max);
    const double curv = uniform_range(rng, cfg.curv_min, cfg.curv_max);
    const Trajectory gt = kinematic_rollout(speed, curv);
    const OccupancyGrid grid = detail::make_scene_grid(rng, cfg, gt);
    const double offset = uniform_range(rng, -cfg.cf_offset_max, cfg.cf_offset_max);
    std::vector<Waypoint> shifted;
    for (const auto& p : gt.points) shifted.push_back({p.x, p.y + offset});
    const Trajectory candidate = Trajectory::from_points(shifted);
    const bool hits = detail::candidate_hits_grid(candidate, grid);
    const ObstacleFlags flags = derive_obstacle_flags(grid);
    s.question = "A candidate trajectory is given: " + trajectory_to_text(candidate, 2) +
                 " Is this trajectory reasonable?";
    s.reference_answer =
        std::string(counterfactual_answer(candidate, grid, offset, cfg.cf_lateral_bound));
    s.features = {speed,
                  curv,
                  gt.points[kTrajectoryPoints - 1].y,
                  flags.ahead ? 1.0 : 0.0,
                  flags.left ? 1.0 : 0.0,
                  flags.right ? 1.0 : 0.0,
                  std::abs(offset),
                  hits ? 1.0 : 0.0};
    s.gt_trajectory = gt;
    s.candidate_trajectory = candidate;
    s.grid = grid;
    s.grid_ref = "grids/" + s.id + ".grid";
    out.counterfactual.push_back(std::move(s));
  }
  return out;
}

// Writes trajectory.jsonl / open_qa.jsonl / counterfactual.jsonl (plus grid
// sidecars) under dir; byte-identical for a fixed config.
inline void write_synthetic(const std::filesystem::path& dir, const SyntheticDataset& ds) {
  std::filesystem::create_directories(dir);
  save_dataset(dir / "trajectory.jsonl", ds.trajectory);
  save_dataset(dir / "open_qa.jsonl", ds.open_qa);
  save_dataset(dir / "counterfactual.jsonl", ds.counterfactual);
}

} // namespace microrft
