#include "wildknot/io.hpp"

#include <cstdio>
#include <fstream>
#include "json.hpp"
#include <sstream>

namespace wildknot {

using nlohmann::json;

namespace {

Vec read_vec(const json& j, std::size_t dim, const char* what) {
  if (!j.is_array() || j.size() != dim) throw ConfigError(std::string(what) + " must be an array of " + std::to_string(dim) + " reals");
  Vec v;
  for (const auto& x : j) {
    if (!x.is_number()) throw ConfigError(std::string(what) + " has a non-numeric entry");
    v.push_back(x.get<double>());
  }
  return v;
}

}  // namespace

NecklaceConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  NecklaceConfig c;
  try {
    c.ambient_dim = j.value("ambient_dim", std::size_t{3});
    c.k = j.value("k", 3);
    c.tolerance = j.value("tolerance", kDefaultTolerance);
    c.depth = j.value("depth", 2);
    c.thread_samples = j.value("thread_samples", std::size_t{96});
    c.seed = j.value("seed", std::uint64_t{1});
    if (j.contains("thread_reach")) c.thread_reach = j.at("thread_reach").get<double>();

    if (c.ambient_dim < 3) throw ConfigError("ambient_dim must be >= 3");
    if (c.k < 3) throw ConfigError("k must be >= 3");
    if (c.depth < 0 || c.depth > kDepthCap) throw ConfigError("depth must lie in 0.." + std::to_string(kDepthCap));
    if (!(c.tolerance > 0.0)) throw ConfigError("tolerance must be positive");

    const json thread = j.value("thread", json("unit_circle"));
    if (thread.is_string()) {
      if (thread.get<std::string>() == "unit_circle") {
        c.unit_circle = c.ambient_dim == 3;
      } else if (thread.get<std::string>() == "none") {
        c.unit_circle = false;
      } else {
        throw ConfigError("thread must be \"unit_circle\", \"none\" or a list of points");
      }
    } else if (thread.is_array()) {
      c.unit_circle = false;
      for (const auto& p : thread) c.thread_points.push_back(read_vec(p, c.ambient_dim, "thread point"));
    } else {
      throw ConfigError("thread must be a string or a list of points");
    }

    const json beads = j.value("beads", json("auto"));
    if (beads.is_string()) {
      const auto mode = beads.get<std::string>();
      if (mode == "auto") {
        c.bead_mode = BeadMode::Auto;
        c.bead_params = j.value("bead_params", std::vector<double>{});
        if (c.bead_params.empty())
          for (int i = 0; i < c.k; ++i) c.bead_params.push_back(static_cast<double>(i) / c.k);
        if (static_cast<int>(c.bead_params.size()) != c.k) throw ConfigError("bead_params must have k entries");
      } else if (mode == "orthogonal") {
        c.bead_mode = BeadMode::Orthogonal;
        c.bead_radius = j.value("bead_radius", 0.5);
      } else {
        throw ConfigError("beads must be \"auto\", \"orthogonal\" or a list");
      }
    } else if (beads.is_array()) {
      c.bead_mode = BeadMode::Explicit;
      for (const auto& b : beads) {
        if (!b.is_object() || !b.contains("center") || !b.contains("radius"))
          throw ConfigError("each bead needs center and radius");
        c.beads.emplace_back(read_vec(b.at("center"), c.ambient_dim, "bead center"), b.at("radius").get<double>());
      }
      if (static_cast<int>(c.beads.size()) != c.k) throw ConfigError("bead list length differs from k");
    } else {
      throw ConfigError("beads must be a string or a list");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field has the wrong type: ") + e.what());
  } catch (const GeometryError& e) {
    throw ConfigError(e.what());
  }
  return c;
}

NecklaceConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

ThreadSample build_thread(const NecklaceConfig& cfg) {
  if (cfg.unit_circle) return ThreadSample::unit_circle(cfg.thread_samples);
  if (cfg.thread_points.empty()) return ThreadSample{};
  return ThreadSample(cfg.ambient_dim, cfg.thread_points);
}

TrivialModel build_model(const NecklaceConfig& cfg) {
  if (cfg.bead_mode != BeadMode::Orthogonal) throw ConfigError("this command needs beads = \"orthogonal\" (trivial model)");
  return TrivialModel::symmetric(cfg.ambient_dim, cfg.k, cfg.bead_radius);
}

Necklace build_necklace(const NecklaceConfig& cfg) {
  ThreadSample thread = build_thread(cfg);
  std::vector<Ball> balls;
  switch (cfg.bead_mode) {
    case BeadMode::Explicit:
      balls = cfg.beads;
      break;
    case BeadMode::Auto:
      if (thread.empty()) throw ConfigError("beads = \"auto\" needs a thread");
      balls = place_beads(thread, cfg.bead_params, cfg.tolerance);
      break;
    case BeadMode::Orthogonal:
      for (const auto& g : build_model(cfg).generators) balls.push_back(g.ball());
      break;
  }
  if (thread.empty()) return make_necklace(balls);
  return make_necklace(std::move(thread), balls);
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void write_header(std::ostream& os, std::size_t dim, bool with_radius) {
  os << "#";
  for (std::size_t i = 0; i < dim; ++i) os << " x" << (i + 1);
  if (with_radius) os << " radius address";
  os << '\n';
}

}  // namespace

void write_point_cloud(std::ostream& os, const std::vector<LimitPoint>& pts) {
  write_header(os, pts.empty() ? 3 : pts.front().center.size(), true);
  for (const auto& p : pts) {
    for (double c : p.center) os << format_real(c) << ' ';
    os << format_real(p.radius) << ' ' << p.address.str() << '\n';
  }
}

void write_point_cloud(std::ostream& os, const std::vector<Vec>& pts) {
  write_header(os, pts.empty() ? 3 : pts.front().size(), false);
  for (const auto& p : pts) {
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? " " : "") << format_real(p[i]);
    os << '\n';
  }
}

void write_polyline(std::ostream& os, const Polyline& p) {
  const std::size_t dim = p.points.empty() ? 3 : p.points.front().size();
  os << "# polyline closed=" << (p.closed ? 1 : 0) << " dim=" << dim << " vertices=" << p.points.size() << '\n';
  for (const auto& v : p.points) {
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << format_real(v[i]);
    os << '\n';
  }
}

Polyline read_polyline(std::istream& is) {
  Polyline p;
  std::string line;
  std::size_t dim = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.find("closed=1") != std::string::npos) p.closed = true;
      continue;
    }
    std::istringstream ss(line);
    Vec v;
    for (double x; ss >> x;) v.push_back(x);
    if (!ss.eof()) throw ConfigError("bad polyline vertex line: " + line);
    if (dim == 0) dim = v.size();
    if (v.size() != dim || dim < 3) throw ConfigError("polyline vertices must share a dimension >= 3");
    p.points.push_back(std::move(v));
  }
  if (p.points.empty()) throw ConfigError("polyline has no vertices");
  return p;
}

Polyline read_polyline_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read polyline " + path);
  return read_polyline(in);
}

void write_stage_csv(std::ostream& os, const std::vector<StageStats>& rows) {
  os << "stage,count,max_radius,min_gap\n";
  for (const auto& r : rows)
    os << r.stage << ',' << r.count << ',' << format_real(r.max_radius) << ',' << format_real(r.min_gap) << '\n';
}

void write_lift_csv(std::ostream& os, const LiftedPath& lift) {
  const std::size_t dim = lift.vertices.front().base.dim();
  for (std::size_t i = 0; i < dim; ++i) os << 'x' << (i + 1) << ',';
  os << "sheet\n";
  for (const auto& v : lift.vertices) {
    for (double c : v.base.coords()) os << format_real(c) << ',';
    os << v.sheet << '\n';
  }
}

}  // namespace wildknot
