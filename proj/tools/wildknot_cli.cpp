#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "wildknot/covers.hpp"
#include "wildknot/io.hpp"
#include "wildknot/knot_algebra.hpp"
#include "wildknot/knot_approx.hpp"

namespace fs = std::filesystem;
using namespace wildknot;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInvalid = 3;
constexpr int kExitNumeric = 4;

struct RunOptions {
  std::string config;
  std::string out_dir = ".";
  std::optional<int> depth;
  std::optional<int> q;
  std::optional<double> theta0;
  std::optional<double> tolerance;
  std::optional<std::size_t> resolution;
  unsigned lanes = 0;
};

class ValidationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

unsigned resolve_lanes(unsigned flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("WILDKNOT_LANES")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string("WILDKNOT_LANES must be a positive integer, got '") + env + "'");
  }
  return 1;
}

NecklaceConfig config_of(const RunOptions& o) {
  NecklaceConfig c = o.config.empty() ? parse_config("{}") : load_config(o.config);
  if (o.depth) {
    if (*o.depth < 0 || *o.depth > kDepthCap) throw ConfigError("depth must lie in 0.." + std::to_string(kDepthCap));
    c.depth = *o.depth;
  }
  if (o.tolerance) {
    if (!(*o.tolerance > 0)) throw ConfigError("tolerance must be positive");
    c.tolerance = *o.tolerance;
  }
  return c;
}

std::ofstream open_out(const RunOptions& o, const std::string& name, std::string& path) {
  std::error_code ec;
  fs::create_directories(o.out_dir, ec);
  path = (fs::path(o.out_dir) / name).string();
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  return f;
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void summary(const std::string& cmd, const std::string& body, const Timer& t, const std::string& path = {}) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(3);
  s << cmd << ": " << body << " time=" << t.seconds() << "s";
  if (!path.empty()) s << " -> " << path;
  std::cout << s.str() << '\n';
}

Necklace checked_necklace(const NecklaceConfig& c) {
  Necklace n = build_necklace(c);
  const auto rep = validate(n, c.tolerance, c.thread_reach);
  if (!rep.disjoint) throw ValidationFailed("beads are not pairwise disjoint");
  return n;
}

int cmd_validate(const RunOptions& o) {
  Timer t;
  const auto c = config_of(o);
  const Necklace n = build_necklace(c);
  const auto rep = validate(n, c.tolerance, c.thread_reach);
  std::cout << "disjoint: " << (rep.disjoint ? "pass" : "FAIL") << " (min gap " << format_real(rep.min_gap) << ")\n";
  std::cout << "centers_on_thread: " << (n.combinatorial() ? "skipped" : rep.centers_on_thread ? "pass" : "FAIL") << '\n';
  std::cout << "crossings: " << (n.combinatorial() ? "skipped" : rep.crossings ? "pass" : "FAIL") << '\n';
  std::cout << "radius_bound: " << (c.thread_reach ? (rep.radius_bound ? "pass" : "FAIL") : "skipped") << '\n';
  for (const auto& f : rep.failures) std::cout << "  " << f << '\n';
  summary("validate", "k=" + std::to_string(n.k()) + " ok=" + (rep.ok() ? "1" : "0"), t);
  return rep.ok() ? 0 : kExitInvalid;
}

int cmd_stage(const RunOptions& o) {
  Timer t;
  const auto c = config_of(o);
  const Necklace n = checked_necklace(c);
  const auto rows = stage_statistics(n, c.depth);
  std::string path;
  auto f = open_out(o, "stages.csv", path);
  write_stage_csv(f, rows);
  std::size_t total = 0;
  for (const auto& r : rows) total += r.count;
  summary("stage", "k=" + std::to_string(n.k()) + " depth=" + std::to_string(c.depth) + " rows=" +
                       std::to_string(rows.size()) + " beads=" + std::to_string(total),
          t, path);
  return 0;
}

int cmd_limit_set(const RunOptions& o) {
  Timer t;
  const auto c = config_of(o);
  const Necklace n = checked_necklace(c);
  const auto pts = limit_points(n, c.depth, resolve_lanes(o.lanes));
  std::string path;
  auto f = open_out(o, "limit_set.xyz", path);
  write_point_cloud(f, pts);
  double rmax = 0.0;
  for (const auto& p : pts) rmax = std::max(rmax, p.radius);
  summary("limit-set", "depth=" + std::to_string(c.depth) + " points=" + std::to_string(pts.size()) +
                           " max_radius=" + format_real(rmax),
          t, path);
  return 0;
}

int cmd_knot_mesh(const RunOptions& o) {
  Timer t;
  const auto c = config_of(o);
  const Necklace n = checked_necklace(c);
  const auto k = knot_approx(n, c.depth);
  const auto pts = k.points();
  const auto simple = check_simple(pts);
  std::string path;
  auto f = open_out(o, "knot_" + std::to_string(c.depth) + ".poly", path);
  write_polyline(f, {pts, true});
  summary("knot-mesh", "depth=" + std::to_string(c.depth) + " vertices=" + std::to_string(pts.size()) +
                           " stitches=" + std::to_string(k.stitch_count) + " simple=" + (simple.simple ? "1" : "0"),
          t, path);
  return 0;
}

int cmd_dimension(const RunOptions& o) {
  Timer t;
  const auto c = config_of(o);
  const Necklace n = checked_necklace(c);
  std::vector<int> depths;
  for (int m = 1; m <= std::max(c.depth, 2); ++m) depths.push_back(m);
  const auto est = dimension_estimate(n, depths);
  std::string path;
  auto f = open_out(o, "dimension.csv", path);
  f << "depth,s\n";
  for (const auto& [m, s] : est.per_depth) f << m << ',' << format_real(s) << '\n';
  summary("dimension", "s_hat=" + format_real(est.s_hat) + " converged=" + (est.converged ? "1" : "0"), t, path);
  return 0;
}

struct PresentationOptions {
  std::string knot = "trefoil";
  std::string file;
  int copies = 1;
};

int cmd_presentation(const RunOptions& o, const PresentationOptions& p) {
  Timer t;
  std::optional<Presentation> g;
  if (!p.file.empty()) {
    std::ifstream in(p.file);
    if (!in) throw ConfigError("cannot read presentation " + p.file);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      g = Presentation::parse(ss.str());
    } catch (const PresentationError& e) {
      throw ConfigError(e.what());
    }
  } else if (p.knot == "trefoil") {
    g = Presentation::trefoil();
  } else if (p.knot == "figure-eight") {
    g = Presentation::figure_eight();
  } else {
    throw ConfigError("unknown knot '" + p.knot + "' (trefoil, figure-eight)");
  }
  if (p.copies < 1) throw ConfigError("--copies must be >= 1");
  const auto sum = amalgamated_sum(*g, p.copies);
  const auto ab = abelianization(sum);
  std::string path;
  auto f = open_out(o, "presentation.txt", path);
  f << "# copies=" << p.copies << " abelianization " << ab.str() << '\n' << sum.format();
  summary("presentation", "copies=" + std::to_string(p.copies) + " generators=" +
                              std::to_string(sum.generators().size()) + " relators=" +
                              std::to_string(sum.relators().size()) + " H1=" + ab.str(),
          t, path);
  return 0;
}

int cmd_census(const RunOptions& o, int k_flag) {
  Timer t;
  const auto c = config_of(o);
  const int k = k_flag > 0 ? k_flag : c.k;
  std::string path;
  auto f = open_out(o, "census.csv", path);
  f << "stage,bead_count,summand_total,oriented,mirrored,closed_form_candidate\n";
  StageCensus last;
  for (int m = 0; m <= c.depth; ++m) {
    last = summand_census(k, m);
    f << m << ',' << last.bead_count << ',' << last.summand_total << ',' << last.oriented << ',' << last.mirrored
      << ',';
    if (last.closed_form_candidate) f << *last.closed_form_candidate;
    f << '\n';
  }
  summary("census", "k=" + std::to_string(k) + " depth=" + std::to_string(c.depth) + " summands=" +
                        std::to_string(last.summand_total),
          t, path);
  return 0;
}

GridSpec grid_of(const RunOptions& o, std::size_t dim, double half_width) {
  return GridSpec::cube(dim, half_width, o.resolution.value_or(41));
}

int cmd_fiber(const RunOptions& o, double half_width) {
  Timer t;
  const auto c = config_of(o);
  const auto model = build_model(c);
  FiberSampleOptions opt;
  opt.lanes = resolve_lanes(o.lanes);
  const double theta0 = o.theta0.value_or(0.5);
  const auto pts = fiber_sample(model, theta0, c.depth, grid_of(o, model.dim, half_width), opt);
  std::string path;
  auto f = open_out(o, "fiber.xyz", path);
  write_point_cloud(f, pts);
  summary("fiber", "theta0=" + format_real(theta0) + " depth=" + std::to_string(c.depth) + " points=" +
                       std::to_string(pts.size()),
          t, path);
  return 0;
}

CoverConfig cover_of(const RunOptions& o, const NecklaceConfig& c) {
  const int q = o.q.value_or(2);
  if (q < 1) throw ConfigError("q must be >= 1");
  return CoverConfig(q, build_model(c), c.depth, 0.0, c.thread_samples);
}

int cmd_lift(const RunOptions& o, const std::string& path_file, int start_sheet) {
  Timer t;
  const auto c = config_of(o);
  const auto cfg = cover_of(o, c);
  const auto poly = read_polyline_file(path_file);
  auto pts = poly.points;
  if (poly.closed) pts.push_back(pts.front());
  const auto lift = lift_path(cfg, pts, start_sheet);
  std::string path;
  auto f = open_out(o, "lift.csv", path);
  write_lift_csv(f, lift);
  summary("lift", "q=" + std::to_string(cfg.q) + " vertices=" + std::to_string(lift.vertices.size()) +
                      " crossings=" + std::to_string(lift.crossings.size()) + " start=" +
                      std::to_string(mod_q(start_sheet, cfg.q)) + " end=" + std::to_string(lift.end_sheet()),
          t, path);
  return 0;
}

int cmd_branch(const RunOptions& o, std::size_t stride) {
  Timer t;
  const auto c = config_of(o);
  const auto cfg = cover_of(o, c);
  const auto knot = knot_approx(cfg.model.necklace(c.thread_samples), c.depth);
  std::string path;
  auto f = open_out(o, "branch.csv", path);
  f << "vertex,copy,rho,attempts,winding,closes_after,ok\n";
  std::size_t checked = 0, good = 0;
  for (std::size_t i = 0; i < knot.vertices.size(); i += std::max<std::size_t>(stride, 1)) {
    if (knot.vertices[i].kind != VertexKind::Tame) continue;
    const auto r = verify_branch(cfg, knot, i);
    f << i << ',' << r.copy.str() << ',' << format_real(r.rho) << ',' << r.attempts << ',' << r.winding << ','
      << r.closes_after << ',' << (r.ok ? 1 : 0) << '\n';
    ++checked;
    good += r.ok ? 1 : 0;
  }
  summary("branch-check", "q=" + std::to_string(cfg.q) + " depth=" + std::to_string(c.depth) + " checked=" +
                              std::to_string(checked) + " ok=" + std::to_string(good),
          t, path);
  return good == checked ? 0 : kExitInvalid;
}

int cmd_ends(const RunOptions& o) {
  Timer t;
  const auto c = config_of(o);
  const auto cfg = cover_of(o, c);
  const auto census = ends_census(cfg, c.depth, o.resolution.value_or(11), 12, resolve_lanes(o.lanes));
  std::string path;
  auto f = open_out(o, "ends.csv", path);
  f << "address,components,decided\n";
  std::size_t undecided = 0;
  for (const auto& r : census.rows) {
    f << r.address.str() << ',' << r.components << ',' << (r.decided ? 1 : 0) << '\n';
    undecided += r.decided ? 0 : 1;
  }
  std::string gpath;
  auto g = open_out(o, "ends_growth.csv", gpath);
  g << "stage,beads,decided,components\n";
  for (const auto& [m, beads, decided, comps] : census.growth)
    g << m << ',' << beads << ',' << decided << ',' << comps << '\n';
  summary("ends", "q=" + std::to_string(cfg.q) + " depth=" + std::to_string(c.depth) + " rows=" +
                      std::to_string(census.rows.size()) + " undecided=" + std::to_string(undecided),
          t, path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wild knots from Schottky groups of sphere inversions"};
  app.require_subcommand(1);
  RunOptions o;
  app.add_option("-c,--config", o.config, "JSON configuration file");
  app.add_option("-o,--out", o.out_dir, "output directory");
  app.add_option("--lanes", o.lanes, "worker threads (env WILDKNOT_LANES)");
  app.add_option("--depth", o.depth, "stage depth (cap 12)");
  app.add_option("--tolerance", o.tolerance, "geometric tolerance");

  auto* validate_cmd = app.add_subcommand("validate", "check a stage-0 necklace");
  auto* stage_cmd = app.add_subcommand("stage", "per-stage bead statistics (CSV)");
  auto* limit_cmd = app.add_subcommand("limit-set", "depth-L bead centers and radii");
  auto* mesh_cmd = app.add_subcommand("knot-mesh", "stage-m knot polyline");
  auto* dim_cmd = app.add_subcommand("dimension", "partition-function dimension estimate");

  PresentationOptions popt;
  auto* pres_cmd = app.add_subcommand("presentation", "amalgamated sum of knot-group copies");
  pres_cmd->add_option("--knot", popt.knot, "trefoil or figure-eight");
  pres_cmd->add_option("--from", popt.file, "presentation text file");
  pres_cmd->add_option("--copies", popt.copies, "number of summands");

  int census_k = 0;
  auto* census_cmd = app.add_subcommand("census", "summand census per stage");
  census_cmd->add_option("--k", census_k, "number of beads (default: config)");

  double half_width = 2.0;
  auto* fiber_cmd = app.add_subcommand("fiber", "sample the page theta0 of the trivial model");
  fiber_cmd->add_option("--theta0", o.theta0, "page angle");
  fiber_cmd->add_option("--resolution", o.resolution, "grid points per axis");
  fiber_cmd->add_option("--half-width", half_width, "half width of the sampling cube");

  std::string path_file;
  int start_sheet = 0;
  auto* lift_cmd = app.add_subcommand("lift", "lift a polyline path to the q-fold cover");
  lift_cmd->add_option("--path", path_file, "polyline file")->required();
  lift_cmd->add_option("--q", o.q, "number of sheets");
  lift_cmd->add_option("--start-sheet", start_sheet, "initial sheet");

  std::size_t stride = 16;
  auto* branch_cmd = app.add_subcommand("branch-check", "branch index at tame knot vertices");
  branch_cmd->add_option("--q", o.q, "number of sheets");
  branch_cmd->add_option("--stride", stride, "check every n-th vertex");

  auto* ends_cmd = app.add_subcommand("ends", "components over each stage-m bead");
  ends_cmd->add_option("--q", o.q, "number of sheets");
  ends_cmd->add_option("--resolution", o.resolution, "samples per axis inside each bead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*validate_cmd) return cmd_validate(o);
    if (*stage_cmd) return cmd_stage(o);
    if (*limit_cmd) return cmd_limit_set(o);
    if (*mesh_cmd) return cmd_knot_mesh(o);
    if (*dim_cmd) return cmd_dimension(o);
    if (*pres_cmd) return cmd_presentation(o, popt);
    if (*census_cmd) return cmd_census(o, census_k);
    if (*fiber_cmd) return cmd_fiber(o, half_width);
    if (*lift_cmd) return cmd_lift(o, path_file, start_sheet);
    if (*branch_cmd) return cmd_branch(o, stride);
    if (*ends_cmd) return cmd_ends(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ValidationFailed& e) {
    std::cerr << "validation failed: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const HypothesisViolation& e) {
    std::cerr << "hypothesis violated: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "numeric fault: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
