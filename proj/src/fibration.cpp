#include "wildknot/fibration.hpp"

#include <cmath>
#include <numbers>
#include <thread>

#include "wildknot/knot_approx.hpp"

namespace wildknot {

TrivialModel::TrivialModel(std::size_t d, std::vector<Sphere> gens, double tol) : dim(d), generators(std::move(gens)) {
  if (dim < 3) throw GeometryError("ambient dimension must be at least 3");
  for (std::size_t j = 0; j < generators.size(); ++j) {
    const Sphere& s = generators[j];
    if (s.dim() != dim) throw GeometryError("generator dimension mismatch");
    const double orth = norm2(s.center) - 1.0 - s.radius * s.radius;
    if (std::abs(orth) > tol * std::max(1.0, norm2(s.center)) || std::abs(s.center[dim - 1]) > tol)
      throw GeometryError("generator " + std::to_string(j + 1) + " is not orthogonal to the thread sphere");
  }
  for (std::size_t i = 0; i < generators.size(); ++i)
    for (std::size_t j = i + 1; j < generators.size(); ++j)
      if (ball_gap(generators[i].ball(), generators[j].ball()) <= tol)
        throw GeometryError("generator balls are not disjoint");
}

TrivialModel TrivialModel::symmetric(std::size_t d, int k, double radius) {
  std::vector<Sphere> gens;
  const double rho = std::sqrt(1.0 + radius * radius);
  for (int j = 0; j < k; ++j) {
    const double a = 2.0 * std::numbers::pi * j / k;
    Vec c(d, 0.0);
    c[0] = rho * std::cos(a);
    c[1] = rho * std::sin(a);
    gens.emplace_back(std::move(c), radius);
  }
  return TrivialModel(d, std::move(gens));
}

Necklace TrivialModel::necklace(std::size_t samples) const {
  if (dim != 3) throw GeometryError("the sampled thread exists for d = 3 only");
  std::vector<Ball> balls;
  for (const auto& g : generators) balls.push_back(g.ball());
  return make_necklace(ThreadSample::unit_circle(samples), balls);
}

double TrivialModel::thread_distance(std::span<const double> x) const {
  double r2 = 0.0;
  for (std::size_t i = 0; i + 1 < dim; ++i) r2 += x[i] * x[i];
  const double radial = std::sqrt(r2) - 1.0;
  return std::hypot(radial, x[dim - 1]);
}

double theta_trivial(std::span<const double> p, double tol) {
  const double q = norm2(p) - 1.0;
  const double pd = p[p.size() - 1];
  if (std::abs(q) <= tol && std::abs(pd) <= tol) throw OnThread("point lies on the thread sphere");
  double th = std::atan2(2.0 * pd, q);
  if (th < 0.0) th += 2.0 * std::numbers::pi;
  if (th >= 2.0 * std::numbers::pi) th = 0.0;
  return th;
}

double theta_trivial(const ExtPoint& p, double tol) {
  if (p.at_infinity()) return 0.0;
  return theta_trivial(std::span<const double>(p.coords()), tol);
}

FiberEval fiber_value(const TrivialModel& model, const ExtPoint& x, std::size_t max_iter, double tol) {
  auto red = reduce_to_domain(model.generators, x, max_iter, tol);
  return {theta_trivial(red.point, tol), std::move(red.word)};
}

FiberEval fiber_value(const TrivialModel& model, std::span<const double> x, std::size_t max_iter, double tol) {
  return fiber_value(model, ExtPoint(Vec(x.begin(), x.end())), max_iter, tol);
}

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * std::numbers::pi);
  if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

GridSpec GridSpec::cube(std::size_t dim, double half_width, std::size_t per_axis) {
  return {Vec(dim, -half_width), Vec(dim, half_width), per_axis};
}

std::vector<Vec> model_knot(const TrivialModel& model, int depth, std::size_t samples) {
  return knot_approx(model.necklace(samples), depth).points();
}

std::vector<Vec> fiber_sample(const TrivialModel& model, double theta0, int depth, const GridSpec& grid,
                              const FiberSampleOptions& opt) {
  const std::size_t d = model.dim;
  if (grid.lo.size() != d || grid.hi.size() != d || grid.per_axis < 2) throw GeometryError("bad grid");
  std::vector<Vec> knot;
  if (d == 3 && model.k() >= 3) knot = model_knot(model, depth);

  const std::size_t n = grid.per_axis;
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= n;
  auto coord = [&](std::size_t axis, std::size_t i) {
    return grid.lo[axis] + (grid.hi[axis] - grid.lo[axis]) * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  auto point_of = [&](std::size_t flat) {
    Vec x(d);
    for (std::size_t a = d; a-- > 0;) {
      x[a] = coord(a, flat % n);
      flat /= n;
    }
    return x;
  };
  auto keep = [&](const Vec& x) {
    if (model.thread_distance(x) <= opt.knot_eps) return false;
    FiberEval fv;
    try {
      fv = fiber_value(model, x, opt.max_iter);
    } catch (const LimitProximity&) {
      return false;
    } catch (const OnThread&) {
      return false;
    }
    if (static_cast<int>(fv.word.size()) > depth) return false;  // inside a stage-m bead
    if (std::abs(wrap_angle(fv.theta - theta0)) >= opt.delta) return false;
    if (!knot.empty() && distance_to_polyline(x, knot) <= opt.knot_eps) return false;
    return true;
  };

  const unsigned lanes = std::max(1u, opt.lanes);
  std::vector<std::vector<Vec>> parts(lanes);
  // contiguous tiles keep the union in grid order
  const std::size_t tile = (total + lanes - 1) / lanes;
  auto run = [&](unsigned l) {
    const std::size_t b = l * tile, e = std::min(total, b + tile);
    for (std::size_t f = b; f < e; ++f) {
      Vec x = point_of(f);
      if (keep(x)) parts[l].push_back(std::move(x));
    }
  };
  if (lanes == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned l = 0; l < lanes; ++l) pool.emplace_back(run, l);
  }
  std::vector<Vec> out;
  for (auto& p : parts) std::move(p.begin(), p.end(), std::back_inserter(out));
  return out;
}

MonodromyDescriptor monodromy_descriptor(const AbelianDescriptor& fiber, int k) {
  MonodromyDescriptor m;
  m.fiber = fiber;
  m.k = k;
  m.statements.push_back("fiber homology at stage m is the (k(k-1)^m + 1)-fold direct sum of " +
                         (fiber.str().empty() ? std::string("0") : fiber.str()) + " (k = " + std::to_string(k) + ")");
  std::map<int, int> dims;
  for (const auto& [d, b] : fiber.betti) dims[d];
  for (const auto& [d, t] : fiber.torsion) dims[d];
  for (const auto& [d, _] : dims) {
    const bool nonzero = (fiber.betti.count(d) && fiber.betti.at(d) > 0) ||
                         (fiber.torsion.count(d) && !fiber.torsion.at(d).empty());
    m.infinitely_generated[d] = nonzero;
    m.statements.push_back("infinitely generated in dimension " + std::to_string(d) + ": " + (nonzero ? "yes" : "no"));
  }
  if (dims.empty()) m.statements.push_back("infinitely generated: no");
  m.statements.push_back("return map: not computed");
  return m;
}

}  // namespace wildknot
