#pragma once

// Hazard kernels: the per-row inner loop over traps.
//
// Every variant computes, for j in [0, n),
//
//   h[j] = lambda0 * exp(neg_inv_two_sigma_sq * ((sx - xs[j])^2 + (sy - ys[j])^2))
//
// writes h[j] to `h_out` and returns the sum of h[j]. The scalar variant is the
// reference; vector variants must agree with it to a few ulps per element.

#include <cstddef>
#include <string_view>

namespace scrid::kernels {

using HazardRowFn = double (*)(const double* xs, const double* ys, std::size_t n, double sx,
                               double sy, double lambda0, double neg_inv_two_sigma_sq,
                               double* h_out);

enum class KernelChoice { Auto, Scalar, Avx2 };

double hazard_row_scalar(const double* xs, const double* ys, std::size_t n, double sx, double sy,
                         double lambda0, double neg_inv_two_sigma_sq, double* h_out);

// Requires AVX2+FMA at runtime; only call after avx2_available().
double hazard_row_avx2(const double* xs, const double* ys, std::size_t n, double sx, double sy,
                       double lambda0, double neg_inv_two_sigma_sq, double* h_out);

bool avx2_available();

/// Resolves a choice to a callable kernel. Auto picks AVX2 when the CPU has
/// it, unless the SCRID_KERNEL environment variable says "scalar".
/// Requesting Avx2 on a CPU without it throws.
HazardRowFn select(KernelChoice choice);

std::string_view name(KernelChoice choice);
KernelChoice parse_choice(std::string_view text);

/// The concrete variant a choice resolves to on this machine.
KernelChoice resolved(KernelChoice choice);

}  // namespace scrid::kernels
