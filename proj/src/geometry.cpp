#include "wildknot/geometry.hpp"

#include <cmath>
#include <sstream>

namespace wildknot {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return dot(a, a); }
double norm(std::span<const double> a) { return std::sqrt(norm2(a)); }

double dist2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

double dist(std::span<const double> a, std::span<const double> b) { return std::sqrt(dist2(a, b)); }

Vec sub(std::span<const double> a, std::span<const double> b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec add(std::span<const double> a, std::span<const double> b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec scale(std::span<const double> a, double s) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

Vec axpy(double s, std::span<const double> x, std::span<const double> y) {
  Vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = s * x[i] + y[i];
  return r;
}

ExtPoint::ExtPoint(Vec coords) : coords_(std::move(coords)), dim_(coords_.size()) {
  if (dim_ < 3) throw GeometryError("ambient dimension must be at least 3");
  for (double c : coords_)
    if (!std::isfinite(c)) throw GeometryError("non-finite coordinate");
}

ExtPoint ExtPoint::infinity(std::size_t dim) {
  if (dim < 3) throw GeometryError("ambient dimension must be at least 3");
  return ExtPoint(dim, true);
}

const Vec& ExtPoint::coords() const {
  if (at_infinity_) throw GeometryError("point at infinity has no finite coordinates");
  return coords_;
}

namespace {

void check_center_radius(const Vec& c, double r, double min_radius) {
  if (c.size() < 3) throw GeometryError("ambient dimension must be at least 3");
  if (!std::isfinite(r) || !(r > 0.0)) throw GeometryError("radius must be positive and finite");
  if (r < min_radius) throw GeometryError("degenerate sphere: radius below 1e-12");
  for (double x : c)
    if (!std::isfinite(x)) throw GeometryError("non-finite center");
}

}  // namespace

Ball::Ball(Vec c, double r) : center(std::move(c)), radius(r) { check_center_radius(center, radius, 0.0); }

Sphere::Sphere(Vec c, double r) : center(std::move(c)), radius(r) { check_center_radius(center, radius, kMinRadius); }

Word::Word(std::vector<int> letters) : letters_(std::move(letters)) {
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (letters_[i] < 1) throw GeometryError("word letter must be >= 1");
    if (i > 0 && letters_[i] == letters_[i - 1]) throw GeometryError("word is not reduced");
  }
}

Word Word::extended(int letter) const {
  if (letter < 1) throw GeometryError("word letter must be >= 1");
  if (!letters_.empty() && letters_.back() == letter)
    throw GeometryError("extension would not be reduced");
  Word w = *this;
  w.letters_.push_back(letter);
  return w;
}

Word Word::prefix(std::size_t len) const {
  Word w;
  w.letters_.assign(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(std::min(len, size())));
  return w;
}

bool Word::is_prefix_of(const Word& other) const {
  if (size() > other.size()) return false;
  for (std::size_t i = 0; i < size(); ++i)
    if (letters_[i] != other.letters_[i]) return false;
  return true;
}

std::string Word::str() const {
  if (letters_.empty()) return "e";
  std::string s;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(letters_[i]);
  }
  return s;
}

Word Word::parse(const std::string& s) {
  if (s == "e" || s.empty()) return Word{};
  std::vector<int> letters;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, '.')) {
    try {
      letters.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw GeometryError("bad address token '" + tok + "'");
    }
  }
  return Word(std::move(letters));
}

Word reduce_word(std::span<const int> raw, int k) {
  std::vector<int> stack;
  stack.reserve(raw.size());
  for (int l : raw) {
    if (l < 1 || l > k) throw GeometryError("letter " + std::to_string(l) + " out of range 1.." + std::to_string(k));
    if (!stack.empty() && stack.back() == l)
      stack.pop_back();
    else
      stack.push_back(l);
  }
  return Word(std::move(stack));
}

Vec invert_point(const Sphere& s, std::span<const double> x) {
  Vec v = sub(x, s.center);
  const double d2 = norm2(v);
  if (d2 == 0.0) throw GeometryError("finite inversion of the sphere center");
  return axpy(s.radius * s.radius / d2, v, s.center);
}

ExtPoint invert_point(const Sphere& s, const ExtPoint& x) {
  if (x.dim() != s.dim()) throw GeometryError("dimension mismatch");
  if (x.at_infinity()) return ExtPoint(s.center);
  const Vec& c = x.coords();
  if (dist2(c, s.center) == 0.0) return ExtPoint::infinity(s.dim());
  return ExtPoint(invert_point(s, std::span<const double>(c)));
}

Ball invert_ball(const Sphere& s, const Ball& b) {
  if (b.dim() != s.dim()) throw GeometryError("dimension mismatch");
  Vec v = sub(b.center, s.center);
  const double delta = norm2(v) - b.radius * b.radius;
  // delta <= 0 puts the inversion center inside or on b: the image is unbounded.
  if (!(delta > 0.0)) throw GeometryError("inversion center lies in the ball; image is unbounded");
  const double r2 = s.radius * s.radius;
  return Ball(axpy(r2 / delta, v, s.center), r2 * b.radius / delta);
}

namespace {

const Sphere& generator(std::span<const Sphere> gens, int letter) {
  if (letter < 1 || static_cast<std::size_t>(letter) > gens.size())
    throw GeometryError("letter " + std::to_string(letter) + " has no generator");
  return gens[static_cast<std::size_t>(letter - 1)];
}

}  // namespace

ExtPoint apply_word(const Word& w, std::span<const Sphere> gens, const ExtPoint& x) {
  ExtPoint p = x;
  for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) p = invert_point(generator(gens, *it), p);
  return p;
}

Vec apply_word(const Word& w, std::span<const Sphere> gens, std::span<const double> x) {
  Vec p(x.begin(), x.end());
  for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) p = invert_point(generator(gens, *it), p);
  return p;
}

Ball apply_word(const Word& w, std::span<const Sphere> gens, const Ball& b) {
  Ball out = b;
  for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) out = invert_ball(generator(gens, *it), out);
  return out;
}

bool inside_open(const Ball& b, std::span<const double> x, double tol) {
  const double lim = b.radius * (1.0 - tol);
  return dist2(x, b.center) < lim * lim;
}

bool inside_open(const Sphere& s, std::span<const double> x, double tol) {
  const double lim = s.radius * (1.0 - tol);
  return dist2(x, s.center) < lim * lim;
}

double containment_margin(const Ball& outer, const Ball& inner) {
  return outer.radius - (dist(outer.center, inner.center) + inner.radius);
}

double ball_gap(const Ball& a, const Ball& b) { return dist(a.center, b.center) - a.radius - b.radius; }

LimitProximity::LimitProximity(Word partial, ExtPoint last)
    : std::runtime_error("point within numerical reach of the limit set (address prefix " + partial.str() + ")"),
      partial_(std::move(partial)),
      last_(std::move(last)) {}

int containing_generator(std::span<const Sphere> gens, std::span<const double> x, double tol) {
  for (std::size_t j = 0; j < gens.size(); ++j)
    if (inside_open(gens[j], x, tol)) return static_cast<int>(j + 1);
  return 0;
}

DomainReduction reduce_to_domain(std::span<const Sphere> gens, const ExtPoint& x, std::size_t max_iter,
                                 double tol) {
  std::vector<int> letters;
  if (x.at_infinity()) return {Word{}, x};
  Vec p = x.coords();
  for (;;) {
    const int j = containing_generator(gens, p, tol);
    if (j == 0) break;
    if (letters.size() == max_iter) throw LimitProximity(Word(std::move(letters)), ExtPoint(std::move(p)));
    // The center of ball j maps to infinity, which lies in the fundamental domain.
    if (dist2(p, gens[static_cast<std::size_t>(j - 1)].center) == 0.0) {
      letters.push_back(j);
      return {Word(std::move(letters)), ExtPoint::infinity(x.dim())};
    }
    p = invert_point(gens[static_cast<std::size_t>(j - 1)], p);
    letters.push_back(j);
  }
  return {Word(std::move(letters)), ExtPoint(std::move(p))};
}

}  // namespace wildknot
