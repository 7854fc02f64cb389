#include "wildknot/knot_approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wildknot {

std::vector<Vec> KnotApprox::points() const {
  std::vector<Vec> out;
  out.reserve(vertices.size());
  for (const auto& v : vertices) out.push_back(v.point);
  return out;
}

ThreadSample KnotApprox::as_thread() const { return ThreadSample(vertices.front().point.size(), points()); }

namespace {

enum class NodeKind { Outside, Inside, Entry, Exit };

struct Node {
  Vec point;
  NodeKind kind = NodeKind::Outside;
  int bead = -1;  // for Inside / Entry / Exit
};

class Stitcher {
 public:
  Stitcher(const Necklace& neck0) : gens_(neck0.generators) {
    const ThreadSample& th = neck0.thread;
    std::vector<Ball> balls;
    for (const auto& g : gens_) balls.push_back(g.ball());
    const auto crossings = thread_crossings(th, balls);

    std::vector<std::vector<const ThreadCrossing*>> per_segment(th.size());
    for (std::size_t j = 0; j < crossings.size(); ++j) {
      if (crossings[j].size() != 2)
        throw RefinementRequired("thread crosses bead " + std::to_string(j + 1) + " boundary " +
                                 std::to_string(crossings[j].size()) + " times");
      if (crossings[j][0].segment == crossings[j][1].segment)
        throw RefinementRequired("both crossings of bead " + std::to_string(j + 1) +
                                 " fall in one thread segment; refine the thread");
      for (const auto& c : crossings[j]) per_segment[c.segment].push_back(&c);
    }

    for (std::size_t i = 0; i < th.size(); ++i) {
      const Vec& p = th.point(i);
      Node n{p, NodeKind::Outside, -1};
      for (std::size_t j = 0; j < balls.size(); ++j)
        if (dist2(p, balls[j].center) < balls[j].radius * balls[j].radius) n = {p, NodeKind::Inside, static_cast<int>(j)};
      nodes_.push_back(std::move(n));
      auto& segs = per_segment[i];
      std::sort(segs.begin(), segs.end(), [](auto* a, auto* b) { return a->t < b->t; });
      for (const auto* c : segs) {
        // a crossing exactly at a vertex duplicates it; keep the boundary node only
        if (dist2(c->point, nodes_.back().point) == 0.0) nodes_.pop_back();
        nodes_.push_back({c->point, c->entering ? NodeKind::Entry : NodeKind::Exit, static_cast<int>(c->bead)});
      }
    }
    if (dist2(nodes_.back().point, nodes_.front().point) == 0.0) nodes_.pop_back();

    entry_.assign(balls.size(), 0);
    exit_.assign(balls.size(), 0);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].kind == NodeKind::Entry) entry_[static_cast<std::size_t>(nodes_[i].bead)] = i;
      if (nodes_[i].kind == NodeKind::Exit) exit_[static_cast<std::size_t>(nodes_[i].bead)] = i;
    }
    start_ = nodes_.size();
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (nodes_[i].kind == NodeKind::Outside) {
        start_ = i;
        break;
      }
    if (start_ == nodes_.size())
      throw RefinementRequired("no thread vertex lies outside every bead; refine the thread");
  }

  KnotApprox build(int m) {
    KnotApprox out;
    out.stage = m;
    const std::size_t M = nodes_.size();
    traverse(Word{}, start_, (start_ + M - 1) % M, +1, m, out);
    for (const auto& v : out.vertices) out.stitch_count += v.stitch ? 1 : 0;
    return out;
  }

 private:
  std::size_t step(std::size_t i, int dir) const {
    const std::size_t M = nodes_.size();
    return dir > 0 ? (i + 1) % M : (i + M - 1) % M;
  }
  std::size_t entry_of(int bead, int dir) const {
    return dir > 0 ? entry_[static_cast<std::size_t>(bead)] : exit_[static_cast<std::size_t>(bead)];
  }
  std::size_t exit_of(int bead, int dir) const {
    return dir > 0 ? exit_[static_cast<std::size_t>(bead)] : entry_[static_cast<std::size_t>(bead)];
  }

  void push(const Word& w, const Node& n, VertexKind kind, KnotApprox& out) {
    out.vertices.push_back({apply_word(w, gens_, n.point), w, kind, false});
  }

  // Emits w(path from `from` to `to` inclusive, stepping dir). Bead arcs met
  // on the way are replaced by w.i(K minus arc i) while depth allows.
  void traverse(const Word& w, std::size_t from, std::size_t to, int dir, int depth, KnotApprox& out) {
    std::size_t i = from;
    for (;;) {
      const Node& n = nodes_[i];
      const bool is_entry = n.bead >= 0 && i == entry_of(n.bead, dir) && i != from && i != to;
      if (is_entry) {
        const std::size_t ex = exit_of(n.bead, dir);
        if (depth > 0) {
          const std::size_t first = out.vertices.size();
          traverse(w.extended(n.bead + 1), i, ex, -dir, depth - 1, out);
          out.vertices[first].stitch = true;
          out.vertices.back().stitch = true;
        } else {
          for (std::size_t a = i;; a = step(a, dir)) {
            push(w, nodes_[a], (a == i || a == ex) ? VertexKind::Boundary : VertexKind::BeadArc, out);
            if (a == ex) break;
          }
        }
        if (ex == to) return;
        i = step(ex, dir);
        continue;
      }
      VertexKind kind = VertexKind::Tame;
      if (n.kind == NodeKind::Entry || n.kind == NodeKind::Exit) kind = VertexKind::Boundary;
      if (n.kind == NodeKind::Inside) kind = VertexKind::BeadArc;
      push(w, n, kind, out);
      if (i == to) return;
      i = step(i, dir);
    }
  }

  std::vector<Sphere> gens_;
  std::vector<Node> nodes_;
  std::vector<std::size_t> entry_, exit_;
  std::size_t start_ = 0;
};

}  // namespace

KnotApprox knot_approx(const Necklace& neck0, int m) {
  if (neck0.stage != 0) throw GeometryError("knot approximation starts from a stage-0 necklace");
  if (neck0.combinatorial() || neck0.dim() != 3)
    throw GeometryError("geometric knot approximation is available for 1-knots in R^3 only");
  if (m < 0) throw GeometryError("negative stage");
  Stitcher s(neck0);
  return s.build(m);
}

double segment_segment_distance(std::span<const double> p1, std::span<const double> q1, std::span<const double> p2,
                        std::span<const double> q2) {
  const Vec d1 = sub(q1, p1);
  const Vec d2 = sub(q2, p2);
  const Vec r = sub(p1, p2);
  const double a = dot(d1, d1);
  const double e = dot(d2, d2);
  const double f = dot(d2, r);
  double s = 0.0, t = 0.0;
  const double c = dot(d1, r);
  const double b = dot(d1, d2);
  const double denom = a * e - b * b;
  if (denom > 0.0) s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
  t = (b * s + f) / e;
  if (t < 0.0) {
    t = 0.0;
    s = std::clamp(-c / a, 0.0, 1.0);
  } else if (t > 1.0) {
    t = 1.0;
    s = std::clamp((b - c) / a, 0.0, 1.0);
  }
  const Vec c1 = axpy(s, d1, p1);
  const Vec c2 = axpy(t, d2, p2);
  return dist(c1, c2);
}

double segment_distance(std::span<const double> p, std::span<const double> a, std::span<const double> b) {
  const Vec u = sub(b, a);
  const double uu = norm2(u);
  double t = uu > 0.0 ? dot(sub(p, a), u) / uu : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return dist(axpy(t, u, a), p);
}

double distance_to_polyline(std::span<const double> x, const std::vector<Vec>& poly) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i)
    best = std::min(best, segment_distance(x, poly[i], poly[(i + 1) % poly.size()]));
  return best;
}

SimplicityReport check_simple(const std::vector<Vec>& poly, double eps) {
  SimplicityReport rep;
  const std::size_t M = poly.size();
  rep.min_edge = std::numeric_limits<double>::infinity();
  rep.min_nonadjacent = std::numeric_limits<double>::infinity();
  if (M < 3) return rep;
  rep.closed = true;
  for (std::size_t i = 0; i < M; ++i) {
    const double len = dist(poly[i], poly[(i + 1) % M]);
    rep.min_edge = std::min(rep.min_edge, len);
    if (!(len > 0.0)) {
      rep.closed = false;
      rep.first_bad_edge = i;
    }
  }
  // sweep edges by their x-extent
  struct Edge {
    double lo, hi;
    std::size_t i;
  };
  std::vector<Edge> edges;
  edges.reserve(M);
  for (std::size_t i = 0; i < M; ++i) {
    const double a = poly[i][0], b = poly[(i + 1) % M][0];
    edges.push_back({std::min(a, b), std::max(a, b), i});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.lo < b.lo; });
  rep.simple = true;
  // only pairs closer than this bound matter for the report
  const double window = 1e-3;
  for (std::size_t x = 0; x < M; ++x)
    for (std::size_t y = x + 1; y < M; ++y) {
      if (edges[y].lo - edges[x].hi > window) break;
      const std::size_t i = edges[x].i, j = edges[y].i;
      const std::size_t gap = i > j ? i - j : j - i;
      if (gap <= 1 || gap == M - 1) continue;
      const double d = segment_segment_distance(poly[i], poly[(i + 1) % M], poly[j], poly[(j + 1) % M]);
      if (d < rep.min_nonadjacent) rep.min_nonadjacent = d;
      if (!(d > eps) && rep.simple) {
        rep.simple = false;
        rep.first_bad_edge = std::min(i, j);
      }
    }
  return rep;
}

double hausdorff_distance(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  auto directed = [](const std::vector<Vec>& from, const std::vector<Vec>& to) {
    double h = 0.0;
    for (const auto& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to) {
        const double d = dist2(p, q);
        if (d < best) {
          best = d;
          if (best <= h) break;  // cannot raise the running maximum
        }
      }
      h = std::max(h, best);
    }
    return std::sqrt(h);
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace wildknot
