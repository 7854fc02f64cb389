#pragma once

// Conformal geometry of extended Euclidean space R^d u {inf}: sphere
// inversions acting on points and round balls, reduced words in the
// involutive generators, and reduction to the fundamental domain.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace wildknot {

using Vec = std::vector<double>;

inline constexpr double kDefaultTolerance = 1e-9;
inline constexpr double kMinRadius = 1e-12;

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// vector helpers
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm(std::span<const double> a);
double dist(std::span<const double> a, std::span<const double> b);
double dist2(std::span<const double> a, std::span<const double> b);
Vec sub(std::span<const double> a, std::span<const double> b);
Vec add(std::span<const double> a, std::span<const double> b);
Vec scale(std::span<const double> a, double s);
Vec axpy(double s, std::span<const double> x, std::span<const double> y);  // s*x + y

/// A point of R^d u {inf}. Either `coords` is valid (size d) or the point is
/// at infinity; an infinite point still remembers its ambient dimension.
class ExtPoint {
 public:
  explicit ExtPoint(Vec coords);
  static ExtPoint infinity(std::size_t dim);

  bool at_infinity() const { return at_infinity_; }
  std::size_t dim() const { return dim_; }
  const Vec& coords() const;

  bool operator==(const ExtPoint&) const = default;

 private:
  ExtPoint(std::size_t dim, bool inf) : dim_(dim), at_infinity_(inf) {}
  Vec coords_;
  std::size_t dim_ = 0;
  bool at_infinity_ = false;
};

struct Ball {
  Vec center;
  double radius = 0.0;

  Ball() = default;
  Ball(Vec c, double r);
  std::size_t dim() const { return center.size(); }
};

/// Boundary sphere of a bead; the mirror of one generating inversion.
struct Sphere {
  Vec center;
  double radius = 0.0;

  Sphere() = default;
  Sphere(Vec c, double r);
  explicit Sphere(const Ball& b) : Sphere(b.center, b.radius) {}
  std::size_t dim() const { return center.size(); }
  Ball ball() const { return Ball(center, radius); }
};

/// Reduced word over generators 1..k (no two adjacent letters equal).
/// Letters are 1-based to match bead addresses.
class Word {
 public:
  Word() = default;
  // Throws if `letters` is not reduced or has a letter < 1.
  explicit Word(std::vector<int> letters);

  const std::vector<int>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  int front() const { return letters_.front(); }
  int back() const { return letters_.back(); }
  int operator[](std::size_t i) const { return letters_[i]; }

  // Appending a letter equal to back() is a precondition violation.
  Word extended(int letter) const;
  Word prefix(std::size_t len) const;
  bool is_prefix_of(const Word& other) const;

  // "1.2.3"; the empty word is "e".
  std::string str() const;
  static Word parse(const std::string& s);

  auto operator<=>(const Word&) const = default;

 private:
  std::vector<int> letters_;
};

/// Free reduction in the free product of k copies of Z/2.
Word reduce_word(std::span<const int> raw, int k);

ExtPoint invert_point(const Sphere& s, const ExtPoint& x);
// Finite-point overload; the caller guarantees x != s.center.
Vec invert_point(const Sphere& s, std::span<const double> x);

/// Image of a ball; requires the inversion center strictly outside `b`.
Ball invert_ball(const Sphere& s, const Ball& b);

// The word w = (j1, ..., jm) acts as the composite I_j1 o I_j2 o ... o I_jm:
// the last letter is applied first. With this convention the bead with
// address (j1, ..., jm, i) is apply_word((j1..jm), gens, B_i) and lies inside
// the bead with address (j1, ..., jm).
ExtPoint apply_word(const Word& w, std::span<const Sphere> gens, const ExtPoint& x);
Vec apply_word(const Word& w, std::span<const Sphere> gens, std::span<const double> x);
Ball apply_word(const Word& w, std::span<const Sphere> gens, const Ball& b);

// Predicates relative to the ball radius: strictly inside means
// |x - c| < r (1 - tol).
bool inside_open(const Ball& b, std::span<const double> x, double tol = kDefaultTolerance);
bool inside_open(const Sphere& s, std::span<const double> x, double tol = kDefaultTolerance);
/// `inner` contained in `outer` with margin; returns the margin (negative if not).
double containment_margin(const Ball& outer, const Ball& inner);
/// Euclidean gap between two balls (negative when they overlap).
double ball_gap(const Ball& a, const Ball& b);

struct DomainReduction {
  Word word;      // x = apply_word(word, gens, point)
  ExtPoint point; // lies in the fundamental domain
};

/// Raised when the reduction does not reach the fundamental domain within
/// max_iter inversions: the point is within numerical reach of the limit set.
class LimitProximity : public std::runtime_error {
 public:
  LimitProximity(Word partial, ExtPoint last);
  const Word& partial_word() const { return partial_; }
  const ExtPoint& last_point() const { return last_; }

 private:
  Word partial_;
  ExtPoint last_;
};

/// Repeatedly inverts in the generator whose open ball contains the point.
/// The letters are returned in application order, which is also the address
/// of the innermost bead containing x.
DomainReduction reduce_to_domain(std::span<const Sphere> gens, const ExtPoint& x,
                                 std::size_t max_iter, double tol = kDefaultTolerance);

/// Returns the 1-based index of the generator ball containing x, or 0.
int containing_generator(std::span<const Sphere> gens, std::span<const double> x,
                         double tol = kDefaultTolerance);

}  // namespace wildknot
