#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace scrid {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double dist2(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

double distance(Point a, Point b);

/// Ordered trap (sensor) locations. Coordinates are also kept as separate x/y
/// arrays so the hazard kernels can stream them.
class TrapArray {
 public:
  TrapArray() = default;
  explicit TrapArray(std::vector<Point> coords);

  std::size_t size() const { return coords_.size(); }
  Point operator[](std::size_t j) const { return coords_[j]; }
  std::span<const Point> coords() const { return coords_; }
  std::span<const double> xs() const { return xs_; }
  std::span<const double> ys() const { return ys_; }

  /// True if two traps share identical coordinates (allowed, but worth a warning).
  bool has_duplicates() const { return has_duplicates_; }

  /// Square grid of side*side traps with the given spacing; trap 1 at
  /// (origin, origin), numbered row by row.
  static TrapArray square_grid(std::size_t side, double spacing = 1.0, double origin = 1.0);

 private:
  std::vector<Point> coords_;
  std::vector<double> xs_;
  std::vector<double> ys_;
  bool has_duplicates_ = false;
};

/// Rectangular support of the activity centers.
struct StateSpace {
  double xmin = 0.0;
  double xmax = 1.0;
  double ymin = 0.0;
  double ymax = 1.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double area() const { return width() * height(); }
  double diagonal() const;
  bool contains(Point p) const { return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax; }

  /// Throws unless bounds are ordered and every trap is strictly inside.
  void validate(const TrapArray& traps) const;

  /// Bounding box of the traps expanded by `buffer` on every side.
  static StateSpace buffered(const TrapArray& traps, double buffer);

  friend bool operator==(const StateSpace&, const StateSpace&) = default;
};

/// Population density implied by an abundance over the state space.
inline double density(double n, const StateSpace& space) { return n / space.area(); }

}  // namespace scrid
