#pragma once

// Fibration of the knot complement over the circle for the trivial model:
// the thread is the unit (d-2)-sphere {|x| = 1, x_d = 0} and the generators
// are spheres orthogonal to the unit sphere with centers in x_d = 0, so every
// inversion preserves the thread and the pencil of spheres through it.
// The stage-m maps extend the pencil angle by reducing points into the
// fundamental domain first.

#include <string>
#include <vector>

#include "wildknot/knot_algebra.hpp"
#include "wildknot/necklace.hpp"

namespace wildknot {

class OnThread : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrivialModel {
  std::size_t dim = 3;
  std::vector<Sphere> generators;  // may be empty: pencil only

  TrivialModel(std::size_t d, std::vector<Sphere> gens, double tol = kDefaultTolerance);

  /// k spheres of radius r centered at sqrt(1 + r^2) (cos a, sin a, 0, ...),
  /// a = 2 pi j / k.
  static TrivialModel symmetric(std::size_t d, int k, double radius);

  int k() const { return static_cast<int>(generators.size()); }
  /// Stage-0 necklace on the sampled unit circle (d = 3 only).
  Necklace necklace(std::size_t samples = 96) const;
  /// Distance from x to the thread sphere.
  double thread_distance(std::span<const double> x) const;
};

/// Pencil angle atan2(2 x_d, |x|^2 - 1) in [0, 2 pi); infinity maps to 0.
double theta_trivial(const ExtPoint& p, double tol = kDefaultTolerance);
double theta_trivial(std::span<const double> p, double tol = kDefaultTolerance);

struct FiberEval {
  double theta = 0.0;
  Word word;  // reduction word; its length is the first stage whose complement contains x
};

/// theta_trivial of the point's representative in the fundamental domain.
/// Throws LimitProximity or OnThread.
FiberEval fiber_value(const TrivialModel& model, const ExtPoint& x, std::size_t max_iter = 64,
                      double tol = kDefaultTolerance);
FiberEval fiber_value(const TrivialModel& model, std::span<const double> x, std::size_t max_iter = 64,
                      double tol = kDefaultTolerance);

/// Signed angle difference wrapped to (-pi, pi].
double wrap_angle(double a);

struct GridSpec {
  Vec lo, hi;
  std::size_t per_axis = 41;

  static GridSpec cube(std::size_t dim, double half_width, std::size_t per_axis);
};

struct FiberSampleOptions {
  double delta = 1e-2;     // |fiber_value - theta0| < delta
  double knot_eps = 1e-6;  // excluded neighborhood of the stage-m knot
  std::size_t max_iter = 64;
  unsigned lanes = 1;
};

/// Grid points of the stage-m complement lying on the page theta0.
std::vector<Vec> fiber_sample(const TrivialModel& model, double theta0, int depth, const GridSpec& grid,
                              const FiberSampleOptions& opt = {});

/// Closed polyline of the stage-m knot for the model (d = 3).
std::vector<Vec> model_knot(const TrivialModel& model, int depth, std::size_t samples = 96);

struct MonodromyDescriptor {
  AbelianDescriptor fiber;
  int k = 0;
  std::map<int, bool> infinitely_generated;  // per dimension
  std::vector<std::string> statements;
};

MonodromyDescriptor monodromy_descriptor(const AbelianDescriptor& fiber, int k);

}  // namespace wildknot
