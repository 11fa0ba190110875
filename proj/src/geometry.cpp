#include "scrid/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scrid/error.hpp"

namespace scrid {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Io: return "io";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

double distance(Point a, Point b) { return std::sqrt(dist2(a, b)); }

TrapArray::TrapArray(std::vector<Point> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw Error(ErrorKind::InvalidArgument, "no traps");
  xs_.reserve(coords_.size());
  ys_.reserve(coords_.size());
  for (const Point& p : coords_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw Error(ErrorKind::InvalidArgument, "trap coordinates must be finite");
    xs_.push_back(p.x);
    ys_.push_back(p.y);
  }
  auto sorted = coords_;
  std::sort(sorted.begin(), sorted.end(),
            [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  has_duplicates_ = std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

TrapArray TrapArray::square_grid(std::size_t side, double spacing, double origin) {
  std::vector<Point> coords;
  coords.reserve(side * side);
  for (std::size_t r = 0; r < side; ++r)
    for (std::size_t c = 0; c < side; ++c)
      coords.push_back({origin + spacing * double(c), origin + spacing * double(r)});
  return TrapArray(std::move(coords));
}

double StateSpace::diagonal() const { return std::hypot(width(), height()); }

void StateSpace::validate(const TrapArray& traps) const {
  if (!(std::isfinite(xmin) && std::isfinite(xmax) && std::isfinite(ymin) && std::isfinite(ymax)))
    throw Error(ErrorKind::InvalidArgument, "state space bounds must be finite");
  if (!(xmin < xmax) || !(ymin < ymax))
    throw Error(ErrorKind::InvalidArgument, "state space bounds must satisfy min < max");
  for (std::size_t j = 0; j < traps.size(); ++j) {
    const Point p = traps[j];
    if (!(p.x > xmin && p.x < xmax && p.y > ymin && p.y < ymax))
      throw Error(ErrorKind::InvalidArgument,
                  "trap " + std::to_string(j + 1) + " is not strictly inside the state space");
  }
}

StateSpace StateSpace::buffered(const TrapArray& traps, double buffer) {
  if (!(buffer > 0.0)) throw Error(ErrorKind::InvalidArgument, "buffer must be positive");
  const auto xs = traps.xs();
  const auto ys = traps.ys();
  const auto [xlo, xhi] = std::minmax_element(xs.begin(), xs.end());
  const auto [ylo, yhi] = std::minmax_element(ys.begin(), ys.end());
  return {*xlo - buffer, *xhi + buffer, *ylo - buffer, *yhi + buffer};
}

}  // namespace scrid
