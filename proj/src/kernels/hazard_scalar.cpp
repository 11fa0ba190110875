#include <cmath>

#include "scrid/kernels.hpp"

namespace scrid::kernels {

double hazard_row_scalar(const double* xs, const double* ys, std::size_t n, double sx, double sy,
                         double lambda0, double neg_inv_two_sigma_sq, double* h_out) {
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double dx = sx - xs[j];
    const double dy = sy - ys[j];
    const double h = lambda0 * std::exp(neg_inv_two_sigma_sq * (dx * dx + dy * dy));
    h_out[j] = h;
    sum += h;
  }
  return sum;
}

}  // namespace scrid::kernels
