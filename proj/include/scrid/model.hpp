#pragma once

// Half-normal hazard detection model and the paired (left/right) binomial
// likelihood. Everything here is evaluated in log space; an impossible state
// has log-likelihood kNegInf.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "scrid/geometry.hpp"
#include "scrid/kernels.hpp"

namespace scrid {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct DetectionParams {
  double lambda0 = 0.2;  // baseline hazard per occasion
  double sigma = 0.5;    // spatial scale

  bool valid() const { return lambda0 > 0.0 && sigma > 0.0; }
  friend bool operator==(const DetectionParams&, const DetectionParams&) = default;
};

double hazard(Point s, Point x, DetectionParams params);

/// 1 - exp(-hazard). Left and right devices share the same kernel.
double detection_prob(Point s, Point x, DetectionParams params);

/// log C(K, y). Values for K <= 64 come from a precomputed table.
double log_choose(int K, int y);

/// Dense rows x cols matrix of capture counts out of K occasions.
class EncounterMatrix {
 public:
  EncounterMatrix() = default;
  EncounterMatrix(std::size_t rows, std::size_t cols, int K);
  /// Validates 0 <= count <= K; `counts` is row-major.
  EncounterMatrix(std::size_t rows, std::size_t cols, int K, std::vector<int> counts);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  int occasions() const { return K_; }

  int operator()(std::size_t i, std::size_t j) const { return counts_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, int value);

  std::span<const int> row(std::size_t i) const { return {counts_.data() + i * cols_, cols_}; }
  std::span<int> row(std::size_t i) { return {counts_.data() + i * cols_, cols_}; }
  const std::vector<int>& data() const { return counts_; }

  int row_total(std::size_t i) const;
  bool row_is_zero(std::size_t i) const;
  long long total() const;

  /// Copy with extra all-zero rows appended up to `rows` (no-op if already that tall).
  EncounterMatrix padded(std::size_t rows) const;
  void append_row(std::span<const int> values);

  friend bool operator==(const EncounterMatrix&, const EncounterMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  int K_ = 1;
  std::vector<int> counts_;
};

/// Left and right encounter matrices after augmentation to M rows.
///
/// Rows [0, n_known) of both sides are the same known individuals in the same
/// order. Left rows [n_left, M) and right rows [n_right, M) are all-zero.
struct AugmentedDataset {
  EncounterMatrix left;
  EncounterMatrix right;
  std::size_t M = 0;
  std::size_t J = 0;
  int K = 1;
  std::size_t n_left = 0;
  std::size_t n_right = 0;
  std::size_t n_known = 0;

  /// Throws Error(Dimension/InvalidArgument) on any invariant violation.
  void validate() const;
};

/// Sparse summary of one paired (or single-side) row: which traps have
/// captures, the pooled count there, and the sum of log binomial coefficients.
struct RowCaptures {
  std::vector<std::pair<std::uint32_t, int>> traps;  // (trap index, pooled count)
  double log_coef = 0.0;

  bool empty() const { return traps.empty(); }
  int total() const;
};

RowCaptures row_captures(std::span<const int> y, int K);
RowCaptures row_captures(std::span<const int> y_left, std::span<const int> y_right, int K);

/// Log-likelihood of a row given z = 1:
///   log_coef + sum_j c_j (log p_j + h_j) - sides * K * sum_j h_j
/// where c_j is the pooled count at trap j. `scratch` must hold traps.size()
/// doubles.
double active_row_loglik(kernels::HazardRowFn kernel, const TrapArray& traps, Point s,
                         DetectionParams params, int K, int sides, const RowCaptures& captures,
                         std::span<double> scratch);

/// Paired row term: 0 / -inf for z = 0, binomial log-likelihood of both
/// histories for z = 1. Throws on length or range violations.
double row_loglik(std::span<const int> y_left, std::span<const int> y_right_star, bool z, Point s,
                  const TrapArray& traps, DetectionParams params, int K);

/// Sum of row_loglik over all M rows. `right_star` is the right matrix already
/// reordered into left-row order.
double total_loglik(const AugmentedDataset& data, const EncounterMatrix& right_star,
                    std::span<const std::uint8_t> z, std::span<const Point> s,
                    const TrapArray& traps, DetectionParams params);

}  // namespace scrid
