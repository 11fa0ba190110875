#include "scrid/model.hpp"

#include <array>
#include <cmath>
#include <string>

#include "scrid/error.hpp"

namespace scrid {

namespace {

constexpr int kMaxTabulatedK = 64;

struct LogChooseTable {
  std::array<std::array<double, kMaxTabulatedK + 1>, kMaxTabulatedK + 1> values{};

  LogChooseTable() {
    // Pascal's triangle in double; relative rounding stays near 1e-16 up to K = 64.
    std::array<std::array<double, kMaxTabulatedK + 1>, kMaxTabulatedK + 1> c{};
    for (int k = 0; k <= kMaxTabulatedK; ++k) {
      c[k][0] = c[k][k] = 1.0;
      for (int y = 1; y < k; ++y) c[k][y] = c[k - 1][y - 1] + c[k - 1][y];
      for (int y = 0; y <= k; ++y) values[k][y] = std::log(c[k][y]);
    }
  }
};

const LogChooseTable& log_choose_table() {
  static const LogChooseTable table;
  return table;
}

void check_row(std::span<const int> y, std::size_t J, int K, const char* which) {
  if (y.size() != J)
    throw Error(ErrorKind::Dimension, std::string(which) + " row has " + std::to_string(y.size()) +
                                          " entries, expected " + std::to_string(J));
  for (int v : y)
    if (v < 0 || v > K)
      throw Error(ErrorKind::InvalidArgument,
                  std::string(which) + " row count " + std::to_string(v) + " outside [0, K]");
}

}  // namespace

double hazard(Point s, Point x, DetectionParams params) {
  return params.lambda0 * std::exp(-dist2(s, x) / (2.0 * params.sigma * params.sigma));
}

double detection_prob(Point s, Point x, DetectionParams params) {
  return -std::expm1(-hazard(s, x, params));
}

double log_choose(int K, int y) {
  if (y < 0 || y > K) return kNegInf;
  if (K <= kMaxTabulatedK) return log_choose_table().values[K][y];
  return std::lgamma(K + 1.0) - std::lgamma(y + 1.0) - std::lgamma(K - y + 1.0);
}

// --- EncounterMatrix ---------------------------------------------------------

EncounterMatrix::EncounterMatrix(std::size_t rows, std::size_t cols, int K)
    : rows_(rows), cols_(cols), K_(K), counts_(rows * cols, 0) {
  if (K < 1) throw Error(ErrorKind::InvalidArgument, "K must be at least 1");
}

EncounterMatrix::EncounterMatrix(std::size_t rows, std::size_t cols, int K,
                                 std::vector<int> counts)
    : rows_(rows), cols_(cols), K_(K), counts_(std::move(counts)) {
  if (K < 1) throw Error(ErrorKind::InvalidArgument, "K must be at least 1");
  if (counts_.size() != rows * cols)
    throw Error(ErrorKind::Dimension, "encounter matrix data does not match rows x cols");
  for (std::size_t k = 0; k < counts_.size(); ++k)
    if (counts_[k] < 0 || counts_[k] > K)
      throw Error(ErrorKind::InvalidArgument,
                  "count " + std::to_string(counts_[k]) + " at row " +
                      std::to_string(k / cols + 1) + ", column " + std::to_string(k % cols + 1) +
                      " outside [0, " + std::to_string(K) + "]");
}

void EncounterMatrix::set(std::size_t i, std::size_t j, int value) {
  if (value < 0 || value > K_) throw Error(ErrorKind::InvalidArgument, "count outside [0, K]");
  counts_[i * cols_ + j] = value;
}

int EncounterMatrix::row_total(std::size_t i) const {
  int total = 0;
  for (int v : row(i)) total += v;
  return total;
}

bool EncounterMatrix::row_is_zero(std::size_t i) const {
  for (int v : row(i))
    if (v != 0) return false;
  return true;
}

long long EncounterMatrix::total() const {
  long long t = 0;
  for (int v : counts_) t += v;
  return t;
}

EncounterMatrix EncounterMatrix::padded(std::size_t rows) const {
  EncounterMatrix out = *this;
  if (rows > rows_) {
    out.counts_.resize(rows * cols_, 0);
    out.rows_ = rows;
  }
  return out;
}

void EncounterMatrix::append_row(std::span<const int> values) {
  if (values.size() != cols_) throw Error(ErrorKind::Dimension, "row length mismatch");
  for (int v : values)
    if (v < 0 || v > K_) throw Error(ErrorKind::InvalidArgument, "count outside [0, K]");
  counts_.insert(counts_.end(), values.begin(), values.end());
  ++rows_;
}

// --- AugmentedDataset --------------------------------------------------------

void AugmentedDataset::validate() const {
  if (left.rows() != M || right.rows() != M)
    throw Error(ErrorKind::Dimension, "left and right must both have M rows");
  if (left.cols() != J || right.cols() != J)
    throw Error(ErrorKind::Dimension, "left and right must both have J columns");
  if (left.occasions() != K || right.occasions() != K)
    throw Error(ErrorKind::Dimension, "left and right must share K");
  if (n_left < n_right)
    throw Error(ErrorKind::InvalidArgument, "left must be the larger observed side");
  if (n_known > n_right) throw Error(ErrorKind::InvalidArgument, "n_known exceeds n_right");
  if (n_left > M) throw Error(ErrorKind::Dimension, "n_left exceeds M");
  for (std::size_t i = n_left; i < M; ++i)
    if (!left.row_is_zero(i))
      throw Error(ErrorKind::InvalidArgument, "left augmentation rows must be all-zero");
  for (std::size_t i = n_right; i < M; ++i)
    if (!right.row_is_zero(i))
      throw Error(ErrorKind::InvalidArgument, "right augmentation rows must be all-zero");
}

// --- likelihood ----------------------------------------------------------------

int RowCaptures::total() const {
  int t = 0;
  for (const auto& [j, c] : traps) t += c;
  return t;
}

RowCaptures row_captures(std::span<const int> y, int K) {
  RowCaptures out;
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (y[j] == 0) continue;
    out.traps.emplace_back(static_cast<std::uint32_t>(j), y[j]);
    out.log_coef += log_choose(K, y[j]);
  }
  return out;
}

RowCaptures row_captures(std::span<const int> y_left, std::span<const int> y_right, int K) {
  RowCaptures out;
  for (std::size_t j = 0; j < y_left.size(); ++j) {
    const int c = y_left[j] + y_right[j];
    if (c == 0) continue;
    out.traps.emplace_back(static_cast<std::uint32_t>(j), c);
    out.log_coef += log_choose(K, y_left[j]) + log_choose(K, y_right[j]);
  }
  return out;
}

double active_row_loglik(kernels::HazardRowFn kernel, const TrapArray& traps, Point s,
                         DetectionParams params, int K, int sides, const RowCaptures& captures,
                         std::span<double> scratch) {
  const double neg_inv = -1.0 / (2.0 * params.sigma * params.sigma);
  const double sum_h = kernel(traps.xs().data(), traps.ys().data(), traps.size(), s.x, s.y,
                              params.lambda0, neg_inv, scratch.data());
  // y log p + (K - y) log(1 - p) with log(1 - p) = -h, pooled over sides.
  double ll = captures.log_coef - double(sides) * double(K) * sum_h;
  for (const auto& [j, c] : captures.traps) {
    const double h = scratch[j];
    ll += double(c) * (std::log(-std::expm1(-h)) + h);
  }
  return ll;
}

double row_loglik(std::span<const int> y_left, std::span<const int> y_right_star, bool z, Point s,
                  const TrapArray& traps, DetectionParams params, int K) {
  check_row(y_left, traps.size(), K, "left");
  check_row(y_right_star, traps.size(), K, "right");
  const RowCaptures caps = row_captures(y_left, y_right_star, K);
  if (!z) return caps.empty() ? 0.0 : kNegInf;
  std::vector<double> scratch(traps.size());
  return active_row_loglik(kernels::hazard_row_scalar, traps, s, params, K, 2, caps, scratch);
}

double total_loglik(const AugmentedDataset& data, const EncounterMatrix& right_star,
                    std::span<const std::uint8_t> z, std::span<const Point> s,
                    const TrapArray& traps, DetectionParams params) {
  if (right_star.rows() != data.M || right_star.cols() != data.J || z.size() != data.M ||
      s.size() != data.M || traps.size() != data.J)
    throw Error(ErrorKind::Dimension, "total_loglik: inconsistent dimensions");
  double total = 0.0;
  for (std::size_t i = 0; i < data.M; ++i) {
    total += row_loglik(data.left.row(i), right_star.row(i), z[i] != 0, s[i], traps, params,
                        data.K);
    if (total == kNegInf) return kNegInf;
  }
  return total;
}

}  // namespace scrid
