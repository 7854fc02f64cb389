#include "doctest.h"
#include "oracles.hpp"
#include "wildknot/covers.hpp"

using namespace wildknot;

namespace {

const TrivialModel& model() {
  static const TrivialModel m = TrivialModel::symmetric(3, 3, 0.5);
  return m;
}

// A tame point of the thread between beads 1 and 2 and its tangent.
const Vec kTame{0.5, 0.8660254037844386, 0.0};
const Vec kTangent{-0.8660254037844386, 0.5, 0.0};

std::vector<Vec> repeat(const std::vector<Vec>& loop, int times) {
  std::vector<Vec> out;
  for (int j = 0; j < times; ++j) out.insert(out.end(), loop.begin() + (out.empty() ? 0 : 1), loop.end());
  return out;
}

// Random walk with short steps, clear of the thread sphere and of the beads.
std::vector<Vec> random_path(std::mt19937_64& rng, const Vec& start, std::size_t steps) {
  std::normal_distribution<double> g(0.0, 0.04);
  std::vector<Vec> p{start};
  while (p.size() < steps) {
    Vec next{p.back()[0] + g(rng), p.back()[1] + g(rng), p.back()[2] + g(rng)};
    if (model().thread_distance(next) < 0.15 || containing_generator(model().generators, next) != 0) continue;
    if (norm(next) > 2.5) continue;
    p.push_back(std::move(next));
  }
  return p;
}

}  // namespace

TEST_CASE("sheet arithmetic and deck transformations") {
  CHECK(mod_q(-1, 5) == 4);
  CHECK(mod_q(12, 5) == 2);
  const SheetPoint p{ExtPoint(Vec{0, 0, 2}), 3};
  CHECK(deck(p, 0, 5).sheet == 3);
  CHECK(deck(p, 5, 5).sheet == 3);
  CHECK(deck(p, -7, 5).sheet == 1);
  CHECK(deck(p, 2, 5).base == p.base);
  SheetPoint cur = p;
  for (int i = 1; i <= 5; ++i) {
    cur = deck(cur, 1, 5);
    CHECK((cur.sheet == p.sheet) == (i == 5));
  }
  CHECK_THROWS_AS(CoverConfig(0, model(), 0), GeometryError);
}

TEST_CASE("meridian lifts") {
  const auto loop = meridian_loop(kTame, kTangent, 0.1, 64);
  REQUIRE(loop.size() == 65);
  CHECK(loop.front() == loop.back());
  CHECK(std::abs(oracle::unit_circle_linking(loop)) == 1);
  for (int q : {1, 2, 3, 5}) {
    const CoverConfig cfg(q, model(), 0);
    CHECK(std::lround(theta_winding(cfg, loop)) == oracle::unit_circle_linking(loop));
    for (int j = 1; j <= q; ++j) {
      const auto lift = lift_path(cfg, repeat(loop, j), 0);
      CHECK((lift.end_sheet() == 0) == (j == q));
    }
    const auto once = lift_path(cfg, loop, 2);
    CHECK(once.end_sheet() == mod_q(2 + oracle::unit_circle_linking(loop), q));
  }
}

TEST_CASE("zero-winding loops keep their sheet") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-2, 2), ur(0.05, 0.4);
  for (int q : {1, 3, 5}) {
    const CoverConfig cfg(q, model(), 1);
    int done = 0;
    while (done < 40) {
      const Vec c{u(rng), u(rng), u(rng)};
      const Vec t{u(rng), u(rng), u(rng)};
      const auto loop = meridian_loop(c, t, ur(rng), 48);
      if (oracle::unit_circle_linking(loop) != 0) continue;
      try {
        const auto lift = lift_path(cfg, loop, 1);
        CHECK(lift.end_sheet() == mod_q(1, q));
        ++done;
      } catch (const PathRejected&) {
      } catch (const RefinementRequired&) {
      }
    }
  }
}

TEST_CASE("lift path errors") {
  const CoverConfig cfg(3, model(), 1);
  CHECK_THROWS_AS(lift_path(cfg, {}, 0), PathRejected);
  // straight through the thread
  CHECK_THROWS_AS(lift_path(cfg, {{0.5, 0.8660254037844386, -0.2}, {0.5, 0.8660254037844386, 0.2}}, 0), PathRejected);
  // one long step around the thread
  CHECK_THROWS_AS(lift_path(cfg, {{0.5, 0.866, 0.01}, {0.5, 0.866, -0.01}}, 0), RefinementRequired);
}

TEST_CASE("lift laws on random paths") {
  std::mt19937_64 rng(41);
  const CoverConfig cfg(5, model(), 1);
  int pairs = 0;
  while (pairs < 30) {
    const auto p = random_path(rng, {0.0, 0.0, 0.8}, 40);
    const auto q = random_path(rng, p.back(), 40);
    std::vector<Vec> pq = p;
    pq.insert(pq.end(), q.begin() + 1, q.end());
    try {
      const int start = static_cast<int>(rng() % 5);
      const auto lp = lift_path(cfg, p, start);
      const auto lq = lift_path(cfg, q, lp.end_sheet());
      const auto lpq = lift_path(cfg, pq, start);
      CHECK(lpq.end_sheet() == lq.end_sheet());
      // deck commutes with lifting
      const auto shifted = lift_path(cfg, pq, start + 2);
      for (std::size_t i = 0; i < lpq.vertices.size(); ++i)
        CHECK(shifted.vertices[i].sheet == deck(lpq.vertices[i], 2, 5).sheet);
      // sheets change exactly by the recorded crossings
      long long s = start;
      std::size_t c = 0;
      for (std::size_t i = 0; i + 1 < lpq.vertices.size(); ++i) {
        if (c < lpq.crossings.size() && lpq.crossings[c].first == i) s += lpq.crossings[c++].second;
        CHECK(lpq.vertices[i + 1].sheet == mod_q(s, 5));
      }
      ++pairs;
    } catch (const RefinementRequired&) {
    }
  }
}

TEST_CASE("paths with equal endpoints and winding end on the same sheet") {
  const CoverConfig cfg(4, model(), 0);
  // two routes from (0, 0, 0.8) to (0, 0, -0.8) through the disk bounded by the thread
  std::vector<Vec> p1, p2;
  for (int i = 0; i <= 40; ++i) {
    const double t = static_cast<double>(i) / 40;
    p1.push_back({0.2 * std::sin(oracle::kPi * t), 0.0, 0.8 - 1.6 * t});
    p2.push_back({0.0, -0.3 * std::sin(oracle::kPi * t), 0.8 - 1.6 * t});
  }
  CHECK(theta_winding(cfg, p1) == doctest::Approx(theta_winding(cfg, p2)));
  CHECK(lift_path(cfg, p1, 0).end_sheet() == lift_path(cfg, p2, 0).end_sheet());
}

TEST_CASE("branch index along the tame knot") {
  for (int depth : {0, 1}) {
    const auto knot = knot_approx(model().necklace(), depth);
    for (int q : {1, 2, 4}) {
      const CoverConfig cfg(q, model(), depth);
      std::set<std::string> copies;
      for (std::size_t i = 0; i < knot.vertices.size(); i += 11) {
        if (knot.vertices[i].kind != VertexKind::Tame) continue;
        const auto rep = verify_branch(cfg, knot, i);
        CHECK(rep.ok);
        CHECK(rep.closes_after == q);
        CHECK(std::abs(rep.winding) == 1);
        copies.insert(rep.copy.str());
      }
      if (depth == 1) CHECK(copies.size() > 1);
    }
  }
  const auto knot = knot_approx(model().necklace(), 1);
  std::size_t bead_vertex = 0;
  while (knot.vertices[bead_vertex].kind == VertexKind::Tame) ++bead_vertex;
  CHECK_THROWS_AS(verify_branch(CoverConfig(2, model(), 1), knot, bead_vertex), GeometryError);
}

TEST_CASE("ends census") {
  for (int depth : {0, 1, 2}) {
    const auto one = ends_census(CoverConfig(1, model(), depth), depth);
    CHECK(one.rows.size() == bead_count(3, depth));
    for (const auto& r : one.rows) CHECK(r.components == 1);
    const auto three = ends_census(CoverConfig(3, model(), depth), depth);
    for (const auto& r : three.rows) {
      CHECK(r.decided);
      CHECK(r.components == 1);
    }
    CHECK(three.growth.size() == static_cast<std::size_t>(depth) + 1);
    const auto par = ends_census(CoverConfig(3, model(), depth), depth, 11, 12, 3);
    REQUIRE(par.rows.size() == three.rows.size());
    for (std::size_t i = 0; i < par.rows.size(); ++i) CHECK(par.rows[i].components == three.rows[i].components);
  }
}
