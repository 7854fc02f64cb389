#include "wildknot/covers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <thread>

namespace wildknot {

CoverConfig::CoverConfig(int q_, TrivialModel model_, int depth_, double theta_cut_, std::size_t knot_samples)
    : q(q_), model(std::move(model_)), depth(depth_), theta_cut(theta_cut_) {
  if (q < 1) throw GeometryError("cover degree q must be >= 1");
  if (depth < 0) throw GeometryError("negative depth");
  if (model.dim == 3 && model.k() >= 3) knot = model_knot(model, depth, knot_samples);
}

int mod_q(long long s, int q) {
  long long r = s % q;
  if (r < 0) r += q;
  return static_cast<int>(r);
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double knot_clearance(const CoverConfig& cfg, std::span<const double> a, std::span<const double> b) {
  if (cfg.knot.empty()) return std::min(cfg.model.thread_distance(a), cfg.model.thread_distance(b));
  double best = std::numeric_limits<double>::infinity();
  const auto& k = cfg.knot;
  for (std::size_t i = 0; i < k.size(); ++i)
    best = std::min(best, segment_segment_distance(a, b, k[i], k[(i + 1) % k.size()]));
  return best;
}

double theta_at(const CoverConfig& cfg, const Vec& x) {
  try {
    return fiber_value(cfg.model, x, cfg.max_iter).theta;
  } catch (const LimitProximity& e) {
    throw PathRejected(std::string("path vertex near the limit set: ") + e.what());
  } catch (const OnThread&) {
    throw PathRejected("path vertex lies on the knot");
  }
}

std::vector<double> thetas(const CoverConfig& cfg, const std::vector<Vec>& path) {
  std::vector<double> th;
  th.reserve(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) {
    const auto& b = i + 1 < path.size() ? path[i + 1] : path[i];
    if (knot_clearance(cfg, path[i], b) <= cfg.knot_eps)
      throw PathRejected("path enters the knot neighborhood at segment " + std::to_string(i));
    th.push_back(theta_at(cfg, path[i]));
  }
  return th;
}

}  // namespace

LiftedPath lift_path(const CoverConfig& cfg, const std::vector<Vec>& path, int start_sheet) {
  if (path.empty()) throw PathRejected("empty path");
  const auto th = thetas(cfg, path);
  LiftedPath out;
  long long sheet = mod_q(start_sheet, cfg.q);
  double total = 0.0;
  out.vertices.push_back({ExtPoint(path[0]), static_cast<int>(sheet)});
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const double delta = wrap_angle(th[i + 1] - th[i]);
    if (std::abs(delta) > cfg.max_step)
      throw RefinementRequired("theta jumps by " + std::to_string(delta) + " on segment " + std::to_string(i) +
                               "; refine the path");
    double rel = std::fmod(th[i] - cfg.theta_cut, kTwoPi);
    if (rel < 0.0) rel += kTwoPi;
    const int sign = static_cast<int>(std::floor((rel + delta) / kTwoPi));
    if (sign != 0) {
      out.crossings.emplace_back(i, sign);
      sheet = mod_q(sheet + sign, cfg.q);
    }
    total += delta;
    out.vertices.push_back({ExtPoint(path[i + 1]), static_cast<int>(sheet)});
  }
  out.winding = total / kTwoPi;
  return out;
}

SheetPoint deck(const SheetPoint& p, int g, int q) { return {p.base, mod_q(static_cast<long long>(p.sheet) + g, q)}; }

double theta_winding(const CoverConfig& cfg, const std::vector<Vec>& path) {
  const auto th = thetas(cfg, path);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < th.size(); ++i) total += wrap_angle(th[i + 1] - th[i]);
  return total / kTwoPi;
}

std::vector<Vec> meridian_loop(std::span<const double> point, std::span<const double> tangent, double rho,
                               std::size_t samples) {
  const std::size_t d = point.size();
  Vec t = scale(tangent, 1.0 / norm(tangent));
  // Gram-Schmidt two coordinate axes against the tangent
  std::vector<Vec> basis;
  for (std::size_t a = 0; a < d && basis.size() < 2; ++a) {
    Vec e(d, 0.0);
    e[a] = 1.0;
    e = axpy(-dot(e, t), t, e);
    for (const auto& b : basis) e = axpy(-dot(e, b), b, e);
    const double n = norm(e);
    if (n > 1e-3) basis.push_back(scale(e, 1.0 / n));
  }
  std::vector<Vec> loop;
  for (std::size_t i = 0; i <= samples; ++i) {
    const double a = kTwoPi * static_cast<double>(i % samples) / static_cast<double>(samples);
    Vec p(point.begin(), point.end());
    p = axpy(rho * std::cos(a), basis[0], p);
    p = axpy(rho * std::sin(a), basis[1], p);
    loop.push_back(std::move(p));
  }
  return loop;
}

BranchReport verify_branch(const CoverConfig& cfg, const KnotApprox& knot, std::size_t vertex,
                           std::size_t loop_samples) {
  const auto& vs = knot.vertices;
  if (vertex >= vs.size()) throw GeometryError("knot vertex out of range");
  if (vs[vertex].kind != VertexKind::Tame) throw GeometryError("branch check needs a vertex on the tame part");
  BranchReport rep;
  rep.point = vs[vertex].point;
  rep.copy = vs[vertex].copy;
  const std::size_t n = vs.size();
  const Vec tangent = sub(vs[(vertex + 1) % n].point, vs[(vertex + n - 1) % n].point);

  std::vector<Ball> balls;
  for (const auto& g : cfg.model.generators) balls.push_back(g.ball());
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& b : stage_beads(make_necklace(balls), knot.stage))
    gap = std::min(gap, dist(rep.point, b.ball.center) - b.ball.radius);
  rep.rho = 0.5 * gap;

  for (rep.attempts = 1; rep.attempts <= 7; ++rep.attempts, rep.rho *= 0.5) {
    const auto loop = meridian_loop(rep.point, tangent, rep.rho, loop_samples);
    try {
      rep.winding = static_cast<int>(std::lround(theta_winding(cfg, loop)));
    } catch (const std::runtime_error& e) {
      rep.note = e.what();
      continue;
    }
    if (std::abs(rep.winding) != 1) {
      rep.note = "meridian winding " + std::to_string(rep.winding) + "; shrinking";
      continue;
    }
    std::vector<Vec> path;
    for (int j = 1; j <= cfg.q; ++j) {
      path.insert(path.end(), loop.begin() + (path.empty() ? 0 : 1), loop.end());
      if (lift_path(cfg, path, 0).end_sheet() == 0) {
        rep.closes_after = j;
        break;
      }
    }
    rep.ok = rep.closes_after == cfg.q;
    rep.note.clear();
    return rep;
  }
  rep.attempts = 7;
  return rep;
}

namespace {

int sheet_components(int q, bool winds) {
  std::vector<int> parent(static_cast<std::size_t>(q));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  if (winds)
    for (int s = 0; s < q; ++s) parent[static_cast<std::size_t>(find(s))] = find((s + 1) % q);
  int count = 0;
  for (int s = 0; s < q; ++s) count += find(s) == s ? 1 : 0;
  return count;
}

EndsRow census_row(const CoverConfig& cfg, const Bead& bead, std::size_t per_axis, std::size_t bins) {
  const std::size_t d = cfg.model.dim;
  const Ball& b = bead.ball;
  std::vector<bool> hit(bins, false);
  std::size_t valid = 0;
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= per_axis;
  for (std::size_t f = 0; f < total; ++f) {
    Vec x(d);
    std::size_t g = f;
    for (std::size_t a = 0; a < d; ++a, g /= per_axis) {
      const double u = -1.0 + 2.0 * (static_cast<double>(g % per_axis) + 0.5) / static_cast<double>(per_axis);
      x[a] = b.center[a] + b.radius * u;
    }
    if (!inside_open(b, x)) continue;
    if (cfg.model.thread_distance(x) <= cfg.knot_eps) continue;
    double th;
    try {
      th = fiber_value(cfg.model, x, cfg.max_iter).theta;
    } catch (const std::runtime_error&) {
      continue;
    }
    ++valid;
    double rel = std::fmod(th - cfg.theta_cut, kTwoPi);
    if (rel < 0.0) rel += kTwoPi;
    hit[std::min(bins - 1, static_cast<std::size_t>(rel / kTwoPi * static_cast<double>(bins)))] = true;
  }
  EndsRow row{bead.address, 0, valid > 0};
  if (!row.decided) return row;
  // samples covering every page imply a loop in the bead winding once around the thread
  const bool winds = std::all_of(hit.begin(), hit.end(), [](bool h) { return h; });
  row.components = sheet_components(cfg.q, winds);
  return row;
}

}  // namespace

EndsCensus ends_census(const CoverConfig& cfg, int depth, std::size_t per_axis, std::size_t bins, unsigned lanes) {
  std::vector<Ball> balls;
  for (const auto& g : cfg.model.generators) balls.push_back(g.ball());
  if (balls.size() < 3) throw GeometryError("ends census needs a model with k >= 3 beads");
  const Necklace neck = make_necklace(balls);
  EndsCensus out;
  lanes = std::max(1u, lanes);
  for (int m = 0; m <= depth; ++m) {
    const auto beads = stage_beads(neck, m);
    std::vector<EndsRow> rows(beads.size());
    auto run = [&](unsigned l) {
      for (std::size_t i = l; i < beads.size(); i += lanes) rows[i] = census_row(cfg, beads[i], per_axis, bins);
    };
    if (lanes == 1) {
      run(0);
    } else {
      std::vector<std::jthread> pool;
      for (unsigned l = 0; l < lanes; ++l) pool.emplace_back(run, l);
    }
    std::size_t decided = 0;
    long long comps = 0;
    for (const auto& r : rows) {
      decided += r.decided ? 1 : 0;
      comps += r.components;
    }
    out.growth.emplace_back(m, rows.size(), decided, comps);
    if (m == depth) out.rows = std::move(rows);
  }
  return out;
}

}  // namespace wildknot
