#include "wildknot/necklace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <thread>

#include "wildknot/knot_approx.hpp"

namespace wildknot {

ThreadSample::ThreadSample(std::size_t dim, std::vector<Vec> points, std::vector<double> params)
    : dim_(dim), points_(std::move(points)), params_(std::move(params)) {
  if (dim_ < 3) throw GeometryError("ambient dimension must be at least 3");
  const std::size_t n = points_.size();
  if (n < 3) throw GeometryError("a closed thread needs at least 3 points");
  for (const auto& p : points_)
    if (p.size() != dim_) throw GeometryError("thread point has the wrong dimension");
  if (params_.empty()) {
    params_.resize(n);
    for (std::size_t i = 0; i < n; ++i) params_[i] = static_cast<double>(i) / static_cast<double>(n);
  }
  if (params_.size() != n) throw GeometryError("thread params and points differ in length");
  for (std::size_t i = 0; i < n; ++i) {
    if (params_[i] < 0.0 || params_[i] >= 1.0) throw GeometryError("thread param outside [0,1)");
    if (i > 0 && !(params_[i] > params_[i - 1])) throw GeometryError("thread params not strictly increasing");
    const double len = dist(points_[i], points_[(i + 1) % n]);
    if (len == 0.0) throw GeometryError("consecutive thread points coincide");
    max_segment_ = std::max(max_segment_, len);
  }
}

ThreadSample ThreadSample::unit_circle(std::size_t samples) {
  std::vector<Vec> pts;
  pts.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(samples);
    pts.push_back({std::cos(a), std::sin(a), 0.0});
  }
  return ThreadSample(3, std::move(pts));
}

ThreadSample::Projection ThreadSample::project(std::span<const double> x) const {
  Projection best;
  best.distance = std::numeric_limits<double>::infinity();
  const std::size_t n = points_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& a = points_[i];
    const Vec& b = points_[(i + 1) % n];
    Vec u = sub(b, a);
    const double uu = norm2(u);
    double t = dot(sub(x, a), u) / uu;
    t = std::clamp(t, 0.0, 1.0);
    Vec p = axpy(t, u, a);
    const double d = dist(p, x);
    if (d < best.distance) {
      const double p0 = params_[i];
      const double p1 = (i + 1 < n) ? params_[i + 1] : 1.0;
      best = {std::move(p), p0 + t * (p1 - p0), d, i};
    }
  }
  if (best.param >= 1.0) best.param -= 1.0;
  return best;
}

namespace {

std::vector<Sphere> spheres_of(const std::vector<Ball>& balls) {
  std::vector<Sphere> s;
  s.reserve(balls.size());
  for (const auto& b : balls) s.emplace_back(b.center, b.radius);
  return s;
}

Necklace make_stage0(ThreadSample thread, const std::vector<Ball>& balls) {
  if (balls.size() < 3) throw GeometryError("a beaded necklace needs k >= 3 beads");
  const std::size_t d = balls.front().dim();
  for (const auto& b : balls)
    if (b.dim() != d) throw GeometryError("beads of mixed dimension");
  if (!thread.empty() && thread.dim() != d) throw GeometryError("thread and beads differ in dimension");
  Necklace n;
  n.generators = spheres_of(balls);
  for (std::size_t j = 0; j < balls.size(); ++j)
    n.beads.push_back({balls[j], Word({static_cast<int>(j + 1)}), std::nullopt});
  if (!thread.empty()) n.base_thread = std::make_shared<const ThreadSample>(thread);
  n.thread = std::move(thread);
  return n;
}

}  // namespace

Necklace make_necklace(ThreadSample thread, const std::vector<Ball>& balls) {
  return make_stage0(std::move(thread), balls);
}

Necklace make_necklace(const std::vector<Ball>& balls) { return make_stage0(ThreadSample{}, balls); }

Necklace symmetric_necklace(int k, double radius, std::size_t samples) {
  if (samples % static_cast<std::size_t>(k) != 0) samples += static_cast<std::size_t>(k) - samples % static_cast<std::size_t>(k);
  std::vector<Ball> balls;
  for (int j = 0; j < k; ++j) {
    const double a = 2.0 * std::numbers::pi * j / k;
    balls.emplace_back(Vec{std::cos(a), std::sin(a), 0.0}, radius);
  }
  return make_necklace(ThreadSample::unit_circle(samples), balls);
}

std::vector<std::vector<ThreadCrossing>> thread_crossings(const ThreadSample& thread,
                                                          const std::vector<Ball>& balls) {
  std::vector<std::vector<ThreadCrossing>> out(balls.size());
  const std::size_t n = thread.size();
  for (std::size_t j = 0; j < balls.size(); ++j) {
    const Ball& b = balls[j];
    const double r2 = b.radius * b.radius;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec& p = thread.point(i);
      const Vec& q = thread.point(i + 1);
      const Vec u = sub(q, p);
      const Vec w = sub(p, b.center);
      // |w + t u|^2 = r^2
      const double A = norm2(u);
      const double B = 2.0 * dot(w, u);
      const double C = norm2(w) - r2;
      const bool out0 = C >= 0.0;
      const bool out1 = dist2(q, b.center) >= r2;
      const double disc = B * B - 4.0 * A * C;
      if (disc <= 0.0) continue;
      const double sq = std::sqrt(disc);
      // numerically stable pair of roots
      const double qq = -0.5 * (B + std::copysign(sq, B));
      double t1 = qq / A;
      double t2 = (qq != 0.0) ? C / qq : -t1;
      if (t1 > t2) std::swap(t1, t2);
      auto push = [&](double t, bool entering) {
        out[j].push_back({j, i, t, axpy(t, u, p), entering});
      };
      if (out0 && !out1) {
        push(std::clamp(t1, 0.0, 1.0), true);
      } else if (!out0 && out1) {
        push(std::clamp(t2, 0.0, 1.0), false);
      } else if (out0 && out1 && t1 > 0.0 && t2 < 1.0) {
        push(t1, true);
        push(t2, false);
      }
    }
  }
  return out;
}

ValidationReport validate(const Necklace& neck, double tol, std::optional<double> thread_reach) {
  ValidationReport rep;
  if (neck.stage != 0) throw GeometryError("validate expects a stage-0 necklace");
  std::vector<Ball> balls;
  for (const auto& b : neck.beads) balls.push_back(b.ball);
  rep.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < balls.size(); ++i)
    for (std::size_t j = i + 1; j < balls.size(); ++j) {
      const double g = ball_gap(balls[i], balls[j]) - tol;
      rep.min_gap = std::min(rep.min_gap, g);
      if (g <= 0.0) {
        rep.disjoint = false;
        rep.failures.push_back("beads " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                               " are not disjoint with margin tol");
      }
    }
  if (thread_reach) {
    for (std::size_t j = 0; j < balls.size(); ++j)
      if (!(balls[j].radius < *thread_reach / 2.0)) {
        rep.radius_bound = false;
        rep.failures.push_back("bead " + std::to_string(j + 1) + " radius exceeds half the thread reach");
      }
  }
  if (neck.combinatorial()) return rep;

  for (std::size_t j = 0; j < balls.size(); ++j) {
    const double off = neck.thread.project(balls[j].center).distance;
    rep.center_offsets.push_back(off);
    if (off > tol) {
      rep.centers_on_thread = false;
      rep.failures.push_back("bead " + std::to_string(j + 1) + " center is off the thread");
    }
  }
  const auto crossings = thread_crossings(neck.thread, balls);
  for (std::size_t j = 0; j < balls.size(); ++j) {
    rep.crossing_counts.push_back(crossings[j].size());
    if (crossings[j].size() != 2) {
      rep.crossings = false;
      rep.failures.push_back("thread crosses bead " + std::to_string(j + 1) + " boundary " +
                             std::to_string(crossings[j].size()) + " times");
    }
  }
  return rep;
}

Necklace build_stage(const Necklace& neck, double tol) {
  const int k = neck.k();
  std::map<Word, std::size_t> index;
  for (std::size_t i = 0; i < neck.beads.size(); ++i) index.emplace(neck.beads[i].address, i);

  Necklace next;
  next.generators = neck.generators;
  next.stage = neck.stage + 1;
  next.base_thread = neck.base_thread;
  next.beads.reserve(neck.beads.size() * static_cast<std::size_t>(k - 1));

  for (int j = 1; j <= k; ++j) {
    const Sphere& s = neck.generators[static_cast<std::size_t>(j - 1)];
    for (const Bead& b : neck.beads) {
      if (b.address.front() == j) continue;
      std::vector<int> letters{j};
      letters.insert(letters.end(), b.address.letters().begin(), b.address.letters().end());
      Word addr(std::move(letters));
      Word parent = addr.prefix(addr.size() - 1);
      Ball ball = invert_ball(s, b.ball);
      const Ball& pb = neck.beads.at(index.at(parent)).ball;
      if (containment_margin(pb, ball) < -tol * pb.radius)
        throw ConstructionFault("bead " + addr.str() + " escapes its parent " + parent.str());
      next.beads.push_back({std::move(ball), std::move(addr), std::move(parent)});
    }
  }
  std::sort(next.beads.begin(), next.beads.end(),
            [](const Bead& a, const Bead& b) { return a.address < b.address; });

  if (neck.base_thread) {
    std::vector<Ball> balls;
    for (const auto& g : neck.generators) balls.push_back(g.ball());
    const Necklace neck0 = make_necklace(*neck.base_thread, balls);
    next.thread = knot_approx(neck0, next.stage).as_thread();
  }
  return next;
}

namespace {

void visit_subtree(const Necklace& neck0, const Word& w, int depth,
                   const std::function<void(const Bead&)>& visit) {
  const std::span<const Sphere> gens(neck0.generators);
  const Word body = w.prefix(w.size() - 1);
  Ball ball = apply_word(body, gens, gens[static_cast<std::size_t>(w.back() - 1)].ball());
  std::optional<Word> parent;
  if (w.size() > 1) parent = body;
  visit(Bead{std::move(ball), w, std::move(parent)});
  if (static_cast<int>(w.size()) > depth) return;
  for (int i = 1; i <= neck0.k(); ++i)
    if (i != w.back()) visit_subtree(neck0, w.extended(i), depth, visit);
}

}  // namespace

void for_each_bead(const Necklace& neck0, int depth, const std::function<void(const Bead&)>& visit) {
  if (neck0.stage != 0) throw GeometryError("bead enumeration starts from a stage-0 necklace");
  if (depth < 0) return;
  for (int j = 1; j <= neck0.k(); ++j) visit_subtree(neck0, Word({j}), depth, visit);
}

std::vector<Bead> enumerate_beads(const Necklace& neck0, int depth) {
  std::vector<Bead> out;
  for_each_bead(neck0, depth, [&](const Bead& b) { out.push_back(b); });
  return out;
}

std::vector<Bead> stage_beads(const Necklace& neck0, int depth) {
  std::vector<Bead> out;
  for_each_bead(neck0, depth, [&](const Bead& b) {
    if (static_cast<int>(b.stage()) == depth) out.push_back(b);
  });
  return out;
}

std::vector<LimitPoint> limit_points(const Necklace& neck0, int depth, unsigned lanes) {
  const int k = neck0.k();
  // one task per length-2 prefix (or per letter at depth 0)
  std::vector<Word> roots;
  for (int j = 1; j <= k; ++j) {
    if (depth == 0) {
      roots.push_back(Word({j}));
      continue;
    }
    for (int i = 1; i <= k; ++i)
      if (i != j) roots.push_back(Word({j, i}));
  }
  std::vector<std::vector<LimitPoint>> parts(roots.size());
  auto work = [&](std::size_t r) {
    const Word& root = roots[r];
    std::function<void(const Bead&)> keep = [&](const Bead& b) {
      if (static_cast<int>(b.stage()) == depth) parts[r].push_back({b.ball.center, b.ball.radius, b.address});
    };
    visit_subtree(neck0, root, depth, keep);
  };
  lanes = std::max(1u, lanes);
  if (lanes == 1) {
    for (std::size_t r = 0; r < roots.size(); ++r) work(r);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned l = 0; l < lanes; ++l)
      pool.emplace_back([&, l] {
        for (std::size_t r = l; r < roots.size(); r += lanes) work(r);
      });
  }
  std::vector<LimitPoint> out;
  for (auto& p : parts) std::move(p.begin(), p.end(), std::back_inserter(out));
  return out;
}

double min_pairwise_gap(const std::vector<Ball>& balls) {
  std::vector<std::size_t> order(balls.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto lo = [&](std::size_t i) { return balls[i].center[0] - balls[i].radius; };
  auto hi = [&](std::size_t i) { return balls[i].center[0] + balls[i].radius; };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lo(a) < lo(b); });
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < order.size(); ++a)
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      if (lo(order[b]) - hi(order[a]) >= best) break;
      best = std::min(best, ball_gap(balls[order[a]], balls[order[b]]));
    }
  return best;
}

std::vector<StageStats> stage_statistics(const Necklace& neck0, int depth) {
  std::vector<std::vector<Ball>> per_stage(static_cast<std::size_t>(depth + 1));
  for_each_bead(neck0, depth, [&](const Bead& b) { per_stage[b.stage()].push_back(b.ball); });
  std::vector<StageStats> rows;
  for (int m = 0; m <= depth; ++m) {
    const auto& balls = per_stage[static_cast<std::size_t>(m)];
    StageStats s;
    s.stage = m;
    s.count = balls.size();
    for (const auto& b : balls) s.max_radius = std::max(s.max_radius, b.radius);
    s.min_gap = min_pairwise_gap(balls);
    rows.push_back(s);
  }
  return rows;
}

namespace {

Vec point_at_param(const ThreadSample& thread, double param) {
  const auto& ps = thread.params();
  const std::size_t n = thread.size();
  param -= std::floor(param);
  auto it = std::upper_bound(ps.begin(), ps.end(), param);
  std::size_t i = (it == ps.begin()) ? n - 1 : static_cast<std::size_t>(it - ps.begin()) - 1;
  const double p0 = ps[i];
  double p1 = (i + 1 < n) ? ps[i + 1] : 1.0;
  double t = (param - p0) / (p1 - p0);
  if (param < p0) t = (param + 1.0 - p0) / (p1 - p0);
  return axpy(t, sub(thread.point(i + 1), thread.point(i)), thread.point(i));
}

bool two_crossings_each(const ThreadSample& thread, const std::vector<Ball>& balls) {
  for (const auto& c : thread_crossings(thread, balls))
    if (c.size() != 2) return false;
  return true;
}

}  // namespace

std::vector<Ball> place_beads(const ThreadSample& thread, const std::vector<double>& params, double tol,
                              double safety) {
  if (params.size() < 3) throw GeometryError("a beaded necklace needs k >= 3 beads");
  std::vector<Vec> centers;
  for (double p : params) centers.push_back(point_at_param(thread, p));
  double min_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (std::size_t j = i + 1; j < centers.size(); ++j) min_d = std::min(min_d, dist(centers[i], centers[j]));
  double r = 0.5 * min_d - 2.0 * tol;
  auto make = [&](double rad) {
    std::vector<Ball> balls;
    for (const auto& c : centers) balls.emplace_back(c, rad);
    return balls;
  };
  for (int it = 0; it < 2000 && r > kMinRadius; ++it, r *= 0.98) {
    if (!two_crossings_each(thread, make(r))) continue;
    auto shrunk = make(r * safety);
    if (two_crossings_each(thread, shrunk)) return shrunk;
  }
  throw GeometryError("no bead radius passes validation at these parameters");
}

Word EquivalenceCertificate::relabel(const Word& w) const {
  std::vector<int> out;
  for (int l : w.letters()) out.push_back(sigma.at(static_cast<std::size_t>(l - 1)));
  return Word(std::move(out));
}

namespace {

// Bead indices (0-based) in the order their centers appear along the thread.
std::vector<int> thread_order(const Necklace& n) {
  std::vector<std::pair<double, int>> keyed;
  for (std::size_t j = 0; j < n.beads.size(); ++j)
    keyed.emplace_back(n.thread.project(n.beads[j].ball.center).param, static_cast<int>(j));
  std::sort(keyed.begin(), keyed.end());
  std::vector<int> out;
  for (auto& [p, j] : keyed) out.push_back(j);
  return out;
}

}  // namespace

EquivalenceCertificate transport_equivalence(const Necklace& a, const Necklace& b, const std::vector<int>& bijection,
                                             int depth, double tol) {
  EquivalenceCertificate cert;
  if (a.stage != 0 || b.stage != 0) throw GeometryError("equivalence transport expects stage-0 necklaces");
  const int k = a.k();
  if (b.k() != k) throw GeometryError("necklaces have different bead counts");
  if (static_cast<int>(bijection.size()) != k) throw GeometryError("bijection has the wrong size");
  std::vector<bool> hit(static_cast<std::size_t>(k), false);
  for (int v : bijection) {
    if (v < 1 || v > k || hit[static_cast<std::size_t>(v - 1)]) throw GeometryError("bead map is not a bijection");
    hit[static_cast<std::size_t>(v - 1)] = true;
  }
  cert.sigma = bijection;

  if (!a.combinatorial() && !b.combinatorial()) {
    const auto oa = thread_order(a);
    const auto ob = thread_order(b);
    std::vector<int> pos_b(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) pos_b[static_cast<std::size_t>(ob[static_cast<std::size_t>(i)])] = i;
    // the image of A's order must be a rotation of B's order
    const int shift = pos_b[static_cast<std::size_t>(bijection[static_cast<std::size_t>(oa[0])] - 1)];
    for (int i = 0; i < k; ++i) {
      const int img = bijection[static_cast<std::size_t>(oa[static_cast<std::size_t>(i)])] - 1;
      if (pos_b[static_cast<std::size_t>(img)] != (shift + i) % k) {
        cert.first_failure = Word({oa[static_cast<std::size_t>(i)] + 1});
        cert.reason = "bead order along the thread is not preserved";
        return cert;
      }
    }
  }

  std::map<Word, Ball> bmap;
  for_each_bead(b, depth, [&](const Bead& bead) { bmap.emplace(bead.address, bead.ball); });
  std::map<Word, Ball> amap;
  bool failed = false;
  for_each_bead(a, depth, [&](const Bead& bead) {
    if (failed) return;
    amap.emplace(bead.address, bead.ball);
    const Word image = cert.relabel(bead.address);
    auto it = bmap.find(image);
    bool ok = it != bmap.end();
    if (ok && bead.parent) {
      const Ball& pa = amap.at(*bead.parent);
      const Ball& pb = bmap.at(cert.relabel(*bead.parent));
      ok = containment_margin(pa, bead.ball) > -tol * pa.radius &&
           containment_margin(pb, it->second) > -tol * pb.radius;
    }
    if (!ok) {
      failed = true;
      cert.first_failure = bead.address;
      cert.reason = "nesting trees differ at this address";
      return;
    }
    ++cert.addresses_checked;
  });
  if (failed) return cert;
  cert.depth_checked = depth;
  cert.accepted = true;
  return cert;
}

}  // namespace wildknot
