#pragma once

// Core domain types shared by every module. No I/O, no policy logic.
// All types are immutable-style value records; safe to copy across threads.

#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace microrft {

inline constexpr int kTrajectoryPoints = 6;  // 2 Hz over 3 s
inline constexpr double kTrajectoryDt = 0.5; // seconds between waypoints

// Ego frame: x forward, y left, origin at the ego vehicle at t = 0.
struct Waypoint {
  double x{0.0}; // meters
  double y{0.0}; // meters

  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
  bool operator==(const Waypoint&) const = default;
};

// Six waypoints at t = 0.5 s .. 3.0 s. The planning answer payload.
struct Trajectory {
  std::array<Waypoint, kTrajectoryPoints> points{};

  static Trajectory from_points(const std::vector<Waypoint>& pts) {
    if (pts.size() != static_cast<std::size_t>(kTrajectoryPoints)) {
      throw std::invalid_argument("Trajectory requires exactly " +
                                  std::to_string(kTrajectoryPoints) + " waypoints, got " +
                                  std::to_string(pts.size()));
    }
    Trajectory t;
    for (int i = 0; i < kTrajectoryPoints; ++i) {
      if (!pts[i].finite()) throw std::invalid_argument("Trajectory waypoint must be finite");
      t.points[i] = pts[i];
    }
    return t;
  }

  // Timestamp of waypoint i, e.g. time_of(0) == 0.5 s.
  static double time_of(int i) { return kTrajectoryDt * (i + 1); }

  bool operator==(const Trajectory&) const = default;
};

// A think-block plus answer-block text pair, the unit sampled and rewarded.
struct ReasonedResponse {
  std::string think;
  std::string answer;
  bool well_formed{false};

  bool operator==(const ReasonedResponse&) const = default;
};

namespace tags {
inline constexpr std::string_view open_think = "<think>";
inline constexpr std::string_view close_think = "</think>";
inline constexpr std::string_view open_answer = "<answer>";
inline constexpr std::string_view close_answer = "</answer>";
} // namespace tags

inline std::string tag_encode(std::string_view think, std::string_view answer) {
  std::string out;
  out.reserve(think.size() + answer.size() + 33);
  out.append(tags::open_think).append(think).append(tags::close_think);
  out.append(tags::open_answer).append(answer).append(tags::close_answer);
  return out;
}

namespace detail {

inline std::size_t count_token(std::string_view text, std::string_view token) {
  std::size_t n = 0;
  for (auto pos = text.find(token); pos != std::string_view::npos;
       pos = text.find(token, pos + token.size())) {
    ++n;
  }
  return n;
}

inline bool whitespace_only(std::string_view s) {
  for (unsigned char c : s) {
    if (!std::isspace(c)) return false;
  }
  return true;
}

} // namespace detail

// Never throws; malformedness is data, not an error. well_formed is true iff
// the text is exactly one think block followed by one answer block with at
// most whitespace before, between and after. Nested or repeated tags are
// malformed. Tag matching is case-sensitive and exact.
inline ReasonedResponse tag_decode(std::string_view text) {
  using namespace tags;
  ReasonedResponse out;

  const auto ot = text.find(open_think);
  const auto ct = (ot == std::string_view::npos)
                      ? std::string_view::npos
                      : text.find(close_think, ot + open_think.size());
  if (ot != std::string_view::npos && ct != std::string_view::npos) {
    out.think = std::string(text.substr(ot + open_think.size(), ct - ot - open_think.size()));
  }
  const auto oa = text.find(open_answer);
  const auto ca = (oa == std::string_view::npos)
                      ? std::string_view::npos
                      : text.find(close_answer, oa + open_answer.size());
  if (oa != std::string_view::npos && ca != std::string_view::npos) {
    out.answer = std::string(text.substr(oa + open_answer.size(), ca - oa - open_answer.size()));
  }

  const bool one_of_each = detail::count_token(text, open_think) == 1 &&
                           detail::count_token(text, close_think) == 1 &&
                           detail::count_token(text, open_answer) == 1 &&
                           detail::count_token(text, close_answer) == 1;
  if (one_of_each && ot < ct && ct < oa && oa < ca) {
    const bool clean_outside =
        detail::whitespace_only(text.substr(0, ot)) &&
        detail::whitespace_only(text.substr(ct + close_think.size(),
                                            oa - ct - close_think.size())) &&
        detail::whitespace_only(text.substr(ca + close_answer.size()));
    out.well_formed = clean_outside;
  }
  return out;
}

enum class TaskKind { open_qa, trajectory, counterfactual };

inline std::string_view to_string(TaskKind t) {
  switch (t) {
    case TaskKind::open_qa: return "open_qa";
    case TaskKind::trajectory: return "trajectory";
    case TaskKind::counterfactual: return "counterfactual";
  }
  return "?";
}

inline TaskKind task_from_string(std::string_view s) {
  if (s == "open_qa") return TaskKind::open_qa;
  if (s == "trajectory") return TaskKind::trajectory;
  if (s == "counterfactual") return TaskKind::counterfactual;
  throw std::invalid_argument("unknown task kind: " + std::string(s));
}

// Rectangular boolean occupancy, bird's-eye view. Cell (ix, iy) covers
// x in [origin_x + ix*res, origin_x + (ix+1)*res) and likewise for y.
struct OccupancyGrid {
  double resolution{1.0}; // meters per cell
  double origin_x{0.0};   // world x of cell (0, 0) lower corner
  double origin_y{0.0};
  int nx{0};
  int ny{0};
  std::vector<std::uint8_t> cells; // row-major, index = iy*nx + ix

  static OccupancyGrid make(double resolution, double origin_x, double origin_y,
                            int nx, int ny) {
    if (resolution <= 0.0) throw std::invalid_argument("grid resolution must be > 0");
    if (nx <= 0 || ny <= 0) throw std::invalid_argument("grid dimensions must be positive");
    OccupancyGrid g;
    g.resolution = resolution;
    g.origin_x = origin_x;
    g.origin_y = origin_y;
    g.nx = nx;
    g.ny = ny;
    g.cells.assign(static_cast<std::size_t>(nx) * ny, 0);
    return g;
  }

  bool in_bounds(int ix, int iy) const { return ix >= 0 && ix < nx && iy >= 0 && iy < ny; }

  std::uint8_t& at(int ix, int iy) { return cells[static_cast<std::size_t>(iy) * nx + ix]; }
  std::uint8_t at(int ix, int iy) const { return cells[static_cast<std::size_t>(iy) * nx + ix]; }

  int cell_ix(double x) const { return static_cast<int>(std::floor((x - origin_x) / resolution)); }
  int cell_iy(double y) const { return static_cast<int>(std::floor((y - origin_y) / resolution)); }

  // Point-in-cell occupancy test; points outside the grid count as free.
  bool occupied_at(double x, double y) const {
    const int ix = cell_ix(x), iy = cell_iy(y);
    return in_bounds(ix, iy) && at(ix, iy) != 0;
  }

  bool operator==(const OccupancyGrid&) const = default;
};

// Per-response reward record. Components not applicable to the task stay 0.
// total is always r_know + r_traj + r_format, computed once at construction.
struct RewardBreakdown {
  double r_qwen3{0.0};    // {0, 1}
  double r_semantic{0.0}; // [0, 1]
  double r_know{0.0};
  double r_traj{0.0};
  double r_format{0.0}; // {0, 1} scaled by the configured format weight
  double total{0.0};

  static RewardBreakdown make(double r_qwen3, double r_semantic, double r_know,
                              double r_traj, double r_format) {
    RewardBreakdown b;
    b.r_qwen3 = r_qwen3;
    b.r_semantic = r_semantic;
    b.r_know = r_know;
    b.r_traj = r_traj;
    b.r_format = r_format;
    b.total = r_know + r_traj + r_format;
    return b;
  }

  bool operator==(const RewardBreakdown&) const = default;
};

// One dataset row. Task-specific fields are optional:
//   trajectory      => gt_trajectory present
//   counterfactual  => candidate_trajectory present
struct Sample {
  std::string id;
  TaskKind task{TaskKind::open_qa};
  std::string question;
  std::string reference_answer;
  std::vector<double> features;
  std::optional<Trajectory> gt_trajectory;
  std::optional<Trajectory> candidate_trajectory;
  std::optional<OccupancyGrid> grid;
  std::string grid_ref; // sidecar path as stored in the dataset file, empty if none
};

// G sampled responses for one query with their log-probabilities, rewards and
// advantages. Sequence-level log-probs are the sums of the per-token lists.
struct RolloutGroup {
  std::string query_id;
  std::vector<ReasonedResponse> responses;
  std::vector<double> logprob_new;
  std::vector<double> logprob_old;
  std::vector<double> logprob_ref;
  std::vector<std::vector<double>> token_logp_new;
  std::vector<std::vector<double>> token_logp_old;
  std::vector<std::vector<double>> token_logp_ref;
  std::vector<RewardBreakdown> rewards;
  std::vector<double> advantages;
  // Sampled token sequences, kept so log-probs can be refreshed against the
  // current policy during inner epochs.
  std::vector<std::vector<int>> tokens;

  std::size_t size() const { return responses.size(); }
};

// Minimal value-or-error carrier for data-plane parsing (training must never
// crash on a malformed model output; failures map to zero reward instead).
template <typename T>
struct Result {
  std::optional<T> value;
  std::string error;

  bool ok() const { return value.has_value(); }
  const T& operator*() const { return *value; }

  static Result success(T v) { return Result{std::move(v), {}}; }
  static Result failure(std::string msg) { return Result{std::nullopt, std::move(msg)}; }
};

} // namespace microrft
