#pragma once

// Configuration ingestion and the text formats shared by the CLI:
// point clouds, polylines, CSV tables.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wildknot/covers.hpp"
#include "wildknot/fibration.hpp"
#include "wildknot/necklace.hpp"

namespace wildknot {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class BeadMode { Explicit, Auto, Orthogonal };

struct NecklaceConfig {
  std::size_t ambient_dim = 3;
  int k = 3;
  bool unit_circle = true;
  std::vector<Vec> thread_points;  // when !unit_circle; empty means combinatorial mode
  std::size_t thread_samples = 96;
  BeadMode bead_mode = BeadMode::Explicit;
  std::vector<Ball> beads;           // Explicit
  std::vector<double> bead_params;   // Auto; default j/k
  double bead_radius = 0.5;          // Orthogonal
  double tolerance = kDefaultTolerance;
  int depth = 2;
  std::optional<double> thread_reach;
  std::uint64_t seed = 1;
};

inline constexpr int kDepthCap = 12;

NecklaceConfig parse_config(const std::string& json_text);
NecklaceConfig load_config(const std::string& path);

ThreadSample build_thread(const NecklaceConfig& cfg);
/// Stage-0 necklace described by the configuration.
Necklace build_necklace(const NecklaceConfig& cfg);
/// Trivial model; requires beads = "orthogonal".
TrivialModel build_model(const NecklaceConfig& cfg);

// Point cloud: one point per line, whitespace separated, optional radius and
// address columns; a '#' header names the columns.
void write_point_cloud(std::ostream& os, const std::vector<LimitPoint>& pts);
void write_point_cloud(std::ostream& os, const std::vector<Vec>& pts);

struct Polyline {
  std::vector<Vec> points;
  bool closed = false;
};

void write_polyline(std::ostream& os, const Polyline& p);
Polyline read_polyline(std::istream& is);
Polyline read_polyline_file(const std::string& path);

void write_stage_csv(std::ostream& os, const std::vector<StageStats>& rows);
void write_lift_csv(std::ostream& os, const LiftedPath& lift);

std::string format_real(double v);

}  // namespace wildknot
