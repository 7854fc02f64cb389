#include "wildknot/knot_algebra.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace wildknot {

IntMatrix relation_matrix(const Presentation& p) {
  const std::size_t n = p.generators().size();
  IntMatrix m;
  for (const auto& r : p.relators()) {
    std::vector<Integer> row(n, 0);
    for (int l : r) row[static_cast<std::size_t>(std::abs(l) - 1)] += (l > 0 ? 1 : -1);
    m.push_back(std::move(row));
  }
  return m;
}

bool AbelianDescriptor::is_integers() const {
  auto b = betti.find(1);
  auto t = torsion.find(1);
  const bool free_rank_one = b != betti.end() && b->second == 1;
  const bool torsion_free = t == torsion.end() || t->second.empty();
  return free_rank_one && torsion_free;
}

std::string AbelianDescriptor::str() const {
  std::ostringstream s;
  bool first = true;
  std::map<int, int> dims;
  for (const auto& [d, b] : betti) dims[d];
  for (const auto& [d, t] : torsion) dims[d];
  for (const auto& [d, _] : dims) {
    if (!first) s << "; ";
    first = false;
    s << "H" << d << ": ";
    const auto b = betti.count(d) ? betti.at(d) : 0;
    bool any = false;
    if (b > 0) {
      s << "Z";
      if (b > 1) s << "^" << b;
      any = true;
    }
    if (torsion.count(d))
      for (auto f : torsion.at(d)) {
        s << (any ? " + " : "") << "Z/" << f;
        any = true;
      }
    if (!any) s << "0";
  }
  return s.str();
}

AbelianDescriptor abelianization(const Presentation& p) {
  const auto snf = smith_normal_form(relation_matrix(p));
  AbelianDescriptor out;
  out.betti[1] = static_cast<std::int64_t>(p.generators().size() - snf.rank);
  std::vector<std::int64_t> tors;
  for (const auto& f : snf.invariant_factors)
    if (f > 1) {
      if (f > std::numeric_limits<std::int64_t>::max()) throw PresentationError("torsion coefficient overflows int64");
      tors.push_back(static_cast<std::int64_t>(f));
    }
  out.torsion[1] = std::move(tors);
  return out;
}

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (b != 0 && a > std::numeric_limits<std::uint64_t>::max() / b) throw std::overflow_error("count overflows 64 bits");
  return a * b;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (a > std::numeric_limits<std::uint64_t>::max() - b) throw std::overflow_error("count overflows 64 bits");
  return a + b;
}

}  // namespace

std::uint64_t bead_count(int k, int m) {
  if (k < 3) throw HypothesisViolation("a beaded necklace needs k >= 3");
  if (m < 0) throw HypothesisViolation("negative stage");
  std::uint64_t l = static_cast<std::uint64_t>(k);
  for (int i = 0; i < m; ++i) l = checked_mul(l, static_cast<std::uint64_t>(k - 1));
  return l;
}

StageCensus summand_census(int k, int m) {
  StageCensus c;
  c.k = k;
  c.stage = m;
  c.bead_count = bead_count(k, m);
  // K itself, then one summand per reduced word of each length 1..m;
  // words of odd length reverse orientation.
  c.summand_total = 1;
  c.oriented = 1;
  for (int len = 1; len <= m; ++len) {
    const std::uint64_t added = bead_count(k, len - 1);
    c.summand_total = checked_add(c.summand_total, added);
    (len % 2 ? c.mirrored : c.oriented) += added;
  }
  if (m >= 1) {
    std::uint64_t p = 1;
    for (int i = 0; i < m - 1; ++i) p = checked_mul(p, static_cast<std::uint64_t>(k));
    const std::uint64_t alt = checked_add(p, 1);
    if (alt != c.summand_total) c.closed_form_candidate = alt;
  }
  return c;
}

AbelianDescriptor fiber_betti(const AbelianDescriptor& fiber, int k, int m) {
  const std::uint64_t copies = checked_add(bead_count(k, m), 1);
  AbelianDescriptor out;
  for (const auto& [d, b] : fiber.betti)
    out.betti[d] = static_cast<std::int64_t>(checked_mul(static_cast<std::uint64_t>(b), copies));
  for (const auto& [d, t] : fiber.torsion) {
    auto& dst = out.torsion[d];
    for (std::uint64_t c = 0; c < copies; ++c) dst.insert(dst.end(), t.begin(), t.end());
    std::sort(dst.begin(), dst.end());
  }
  return out;
}

LocalGroupReport wild_local_group(const Presentation& g, const StageCensus& census) {
  if (g.generators().size() < 2)
    throw HypothesisViolation("the knot group must be presented on at least two generators (bigger than Z)");
  const std::uint64_t copies = census.oriented + census.mirrored;
  if (copies > static_cast<std::uint64_t>(std::numeric_limits<int>::max()))
    throw std::overflow_error("too many summands to write out the presentation");
  LocalGroupReport rep{amalgamated_sum(g, static_cast<int>(copies)), copies, {}};
  for (int s = 0; s <= census.stage; ++s) rep.growth.push_back(summand_census(census.k, s).summand_total);
  return rep;
}

}  // namespace wildknot
