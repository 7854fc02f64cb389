#include "doctest.h"
#include "oracles.hpp"
#include "wildknot/fibration.hpp"
#include "wildknot/knot_approx.hpp"

using namespace wildknot;

namespace {

double min_distance(const std::vector<Vec>& cloud, const std::vector<Vec>& knot) {
  double best = INFINITY;
  for (const auto& p : cloud) best = std::min(best, distance_to_polyline(p, knot));
  return best;
}

}  // namespace

TEST_CASE("pencil angle examples") {
  CHECK(theta_trivial(Vec{2, 0, 0}) == 0.0);
  CHECK(theta_trivial(Vec{0, 0, 1}) == doctest::Approx(oracle::kPi / 2));
  CHECK(theta_trivial(Vec{0, 0, 0}) == doctest::Approx(oracle::kPi));
  CHECK(theta_trivial(ExtPoint::infinity(3)) == 0.0);
  CHECK_THROWS_AS(theta_trivial(Vec{1, 0, 0}), OnThread);
  CHECK_THROWS_AS(theta_trivial(Vec{0, 0.6, 0.8, 0}), OnThread);
  CHECK_NOTHROW(theta_trivial(Vec{0, 0.6, 0.8, 0.1}));
}

TEST_CASE("pencil spheres are level sets") {
  std::mt19937_64 rng(2);
  for (double theta0 : {0.3, 1.2, 2.5}) {
    // |p|^2 - 1 = 2 cot(theta0) p_d: center (0, 0, cot), radius 1 / sin
    const double cot = std::cos(theta0) / std::sin(theta0);
    const Vec c{0, 0, cot};
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& p : oracle::sphere_samples(c, 1.0 / std::sin(theta0), 1000, rng)) {
      if (p[2] <= 1e-6) continue;  // the other arc belongs to the page theta0 + pi
      const double t = theta_trivial(p);
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    CHECK(hi - lo < 1e-9);
    CHECK(lo == doctest::Approx(theta0).epsilon(1e-9));
  }
}

TEST_CASE("pencil angle winds once around the thread") {
  for (double rho : {0.05, 0.3, 0.9}) {
    double total = 0.0, prev = theta_trivial(Vec{1 + rho, 0, 0});
    bool monotone = true;
    for (int i = 1; i <= 720; ++i) {
      const double phi = 2 * oracle::kPi * i / 720;
      const double t = theta_trivial(Vec{1 + rho * std::cos(phi), 0, rho * std::sin(phi)});
      const double step = wrap_angle(t - prev);
      monotone = monotone && step > 0.0;
      total += step;
      prev = t;
    }
    CHECK(monotone);
    CHECK(total == doctest::Approx(2 * oracle::kPi).epsilon(1e-12));
  }
}

TEST_CASE("wrap angle") {
  CHECK(wrap_angle(oracle::kPi) == doctest::Approx(oracle::kPi));
  CHECK(wrap_angle(-oracle::kPi) == doctest::Approx(oracle::kPi));
  CHECK(wrap_angle(3 * oracle::kPi / 2) == doctest::Approx(-oracle::kPi / 2));
  CHECK(wrap_angle(0.1 + 4 * oracle::kPi) == doctest::Approx(0.1));
}

TEST_CASE("trivial model construction") {
  const auto m = TrivialModel::symmetric(3, 3, 0.5);
  CHECK(m.k() == 3);
  for (const auto& g : m.generators) CHECK(norm2(g.center) == doctest::Approx(1.25));
  CHECK_THROWS_AS(TrivialModel(3, {Sphere(Vec{1.0, 0, 0}, 0.5)}), GeometryError);
  CHECK_THROWS_AS(TrivialModel(3, {Sphere(Vec{1.0, 0, 0.5}, std::sqrt(0.25))}), GeometryError);
  CHECK_THROWS_AS(TrivialModel::symmetric(3, 3, 2.0), GeometryError);
  CHECK(m.thread_distance(Vec{1, 0, 0}) == 0.0);
  CHECK(m.thread_distance(Vec{0, 0, 0}) == doctest::Approx(1.0));
  const auto n = m.necklace();
  CHECK(n.k() == 3);
  // orthogonal generators preserve the thread circle
  for (const auto& g : m.generators)
    for (const auto& p : n.thread.points())
      if (dist(p, g.center) > 1e-6) CHECK(m.thread_distance(invert_point(g, p)) < 1e-12);
}

TEST_CASE("fiber value on the fundamental domain and its images") {
  const auto m = TrivialModel::symmetric(3, 3, 0.5);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-2, 2);
  int n = 0;
  while (n < 500) {
    const Vec y{u(rng), u(rng), u(rng)};
    if (containing_generator(m.generators, y) != 0 || m.thread_distance(y) < 1e-3) continue;
    ++n;
    const auto fv = fiber_value(m, y);
    CHECK(fv.word.empty());
    CHECK(fv.theta == theta_trivial(y));
    for (std::size_t j = 0; j < 3; ++j) {
      const Vec x = invert_point(m.generators[j], y);
      const auto img = fiber_value(m, x);
      CHECK(img.word == Word({static_cast<int>(j) + 1}));
      CHECK(std::abs(wrap_angle(img.theta - fv.theta)) < 1e-9);
    }
  }
  CHECK_THROWS_AS(fiber_value(m, Vec{1, 0, 0}), OnThread);
  const auto lp = limit_points(m.necklace(), 12);
  CHECK_THROWS_AS(fiber_value(m, lp[5].center, 6), LimitProximity);
}

TEST_CASE("fiber value is continuous across generator spheres") {
  const auto m = TrivialModel::symmetric(3, 3, 0.5);
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g;
  int tested = 0;
  double worst = 0.0;
  while (tested < 300) {
    const auto& s = m.generators[static_cast<std::size_t>(tested % 3)];
    Vec dir{g(rng), g(rng), g(rng)};
    dir = scale(dir, 1.0 / norm(dir));
    const Vec on = axpy(s.radius, dir, s.center);
    if (m.thread_distance(on) < 0.05) continue;
    ++tested;
    const double h = 1e-9;
    const auto in = fiber_value(m, axpy(-h, dir, on));
    const auto out = fiber_value(m, axpy(h, dir, on));
    CHECK(in.word.size() == 1);
    CHECK(out.word.empty());
    worst = std::max(worst, std::abs(wrap_angle(in.theta - out.theta)));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("fiber sample, pencil only") {
  const TrivialModel pencil(3, {});
  const auto pts = fiber_sample(pencil, 0.0, 0, GridSpec::cube(3, 2.0, 41));
  CHECK_FALSE(pts.empty());
  for (const auto& p : pts) {
    CHECK(norm(p) > 1.0);
    CHECK(std::abs(p[2]) < 1e-12);
  }
}

TEST_CASE("fiber sample across stages") {
  const auto m = TrivialModel::symmetric(3, 3, 0.5);
  const auto grid = GridSpec::cube(3, 1.6, 33);
  std::vector<std::vector<Vec>> clouds;
  for (int depth = 0; depth <= 2; ++depth) clouds.push_back(fiber_sample(m, 0.5, depth, grid));
  // the stage-1 cloud keeps every stage-0 point
  std::set<Vec> one(clouds[1].begin(), clouds[1].end());
  for (const auto& p : clouds[0]) CHECK(one.count(p) == 1);
  CHECK(clouds[1].size() >= clouds[0].size());

  std::vector<double> dists;
  for (int depth = 0; depth <= 2; ++depth)
    dists.push_back(min_distance(clouds[static_cast<std::size_t>(depth)], model_knot(m, depth)));
  for (std::size_t i = 1; i < dists.size(); ++i) CHECK(dists[i] <= dists[i - 1]);

  FiberSampleOptions opt;
  opt.lanes = 3;
  CHECK(fiber_sample(m, 0.5, 1, grid, opt) == clouds[1]);
}

TEST_CASE("fiber sample in dimension four") {
  const auto m = TrivialModel::symmetric(4, 3, 0.4);
  const auto pts = fiber_sample(m, 1.0, 1, GridSpec::cube(4, 1.5, 13), {0.05});
  CHECK_FALSE(pts.empty());
  for (const auto& p : pts) CHECK(std::abs(wrap_angle(fiber_value(m, p).theta - 1.0)) < 0.05);
}
