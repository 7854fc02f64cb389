#pragma once

// Knot-group presentations and the bookkeeping of the inverting process:
// connected sums as amalgamated products over the meridian, abelianization,
// summand census per stage and fiber homology growth.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wildknot/smith.hpp"

namespace wildknot {

class PresentationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class HypothesisViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Words over generators use signed 1-based indices: -j is the inverse of j.
using GroupWord = std::vector<int>;

GroupWord free_reduce(const GroupWord& w);
GroupWord cyclic_reduce(const GroupWord& w);
GroupWord inverse(const GroupWord& w);

class Presentation {
 public:
  Presentation(std::vector<std::string> generators, std::vector<GroupWord> relators, GroupWord meridian);

  const std::vector<std::string>& generators() const { return generators_; }
  const std::vector<GroupWord>& relators() const { return relators_; }
  const GroupWord& meridian() const { return meridian_; }

  // Text form:
  //   generators: a b
  //   relator: a b a b^-1 a^-1 b^-1
  //   meridian: a
  // Blank lines and lines starting with '#' are ignored.
  static Presentation parse(const std::string& text);
  std::string format() const;
  std::string format_word(const GroupWord& w) const;

  static Presentation trefoil();
  static Presentation figure_eight();
  static Presentation infinite_cyclic();

 private:
  std::vector<std::string> generators_;
  std::vector<GroupWord> relators_;  // cyclically reduced, nonempty
  GroupWord meridian_;
};

/// r renamed copies of G with the meridians identified in a chain.
Presentation amalgamated_sum(const Presentation& g, int copies);

/// Exponent-sum matrix: one row per relator, one column per generator.
IntMatrix relation_matrix(const Presentation& p);

struct AbelianDescriptor {
  std::map<int, std::int64_t> betti;                   // dimension -> rank
  std::map<int, std::vector<std::int64_t>> torsion;    // dimension -> invariant factors

  bool operator==(const AbelianDescriptor&) const = default;
  bool is_integers() const;  // H_1 = Z
  std::string str() const;
};

/// H_1 of the presented group.
AbelianDescriptor abelianization(const Presentation& p);

struct StageCensus {
  int k = 0;
  int stage = 0;
  std::uint64_t bead_count = 0;     // k (k-1)^m
  std::uint64_t summand_total = 0;  // prime summands of K_m
  std::uint64_t oriented = 0;       // copies of K
  std::uint64_t mirrored = 0;       // copies of the mirror image
  // k^(m-1) + 1: an alternative closed form for the summand count that does
  // not match the recursion; reported for comparison when it differs.
  std::optional<std::uint64_t> closed_form_candidate;
};

/// l_m = k (k-1)^m, with overflow checking.
std::uint64_t bead_count(int k, int m);

StageCensus summand_census(int k, int m);

/// Each betti number and torsion multiset repeated l_m + 1 times.
AbelianDescriptor fiber_betti(const AbelianDescriptor& fiber, int k, int m);

struct LocalGroupReport {
  Presentation group;
  std::uint64_t generator_lower_bound = 0;
  std::vector<std::uint64_t> growth;  // bound at stages 0..m
};

LocalGroupReport wild_local_group(const Presentation& g, const StageCensus& census);

}  // namespace wildknot
