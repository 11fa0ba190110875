#pragma once

// The latent link between right-side rows and left-side rows.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "scrid/geometry.hpp"
#include "scrid/model.hpp"

namespace scrid {

/// Bijection on row indices: id[i] is the left row that right row i belongs to.
/// Rows below n_known are pinned to themselves. Indices are 0-based in memory.
class IdAssignment {
 public:
  IdAssignment() = default;
  /// Throws unless `ids` is a permutation fixing [0, n_known).
  explicit IdAssignment(std::vector<std::size_t> ids, std::size_t n_known = 0);

  static IdAssignment identity(std::size_t M, std::size_t n_known = 0);

  std::size_t size() const { return ids_.size(); }
  std::size_t n_known() const { return n_known_; }
  std::size_t operator[](std::size_t i) const { return ids_[i]; }
  std::span<const std::size_t> values() const { return ids_; }

  /// Exchanges the left rows of right rows a and b. Both must be unknown-ID rows.
  void swap_rows(std::size_t a, std::size_t b);

  /// Inverse map: result[left row] = right row.
  IdAssignment inverse() const;

  friend bool operator==(const IdAssignment&, const IdAssignment&) = default;

 private:
  std::vector<std::size_t> ids_;
  std::size_t n_known_ = 0;
};

/// Output row id[i] is input row i.
EncounterMatrix reorder_right(const EncounterMatrix& right, const IdAssignment& id);

struct CaptureCentroid {
  std::optional<Point> location;
  int n_caps = 0;
};

/// Capture-count-weighted mean of trap coordinates.
CaptureCentroid centroid(std::span<const int> row, const TrapArray& traps);

struct CanonicalData {
  AugmentedDataset data;
  bool swapped = false;
};

/// Builds an AugmentedDataset from raw observed matrices.
///
/// Rows [0, n_known) of each input are the known individuals. Remaining rows
/// that are all-zero are treated as augmentation and moved to the end (stable).
/// If the right side has more observed rows than the left, the sides are
/// exchanged. Both sides are padded to `M` rows; M = 0 means the taller input.
CanonicalData canonicalize(const EncounterMatrix& left, const EncounterMatrix& right,
                           std::size_t n_known, std::size_t M = 0);

/// Centroids of every left and right row, computed once per dataset.
class CentroidCache {
 public:
  CentroidCache() = default;
  CentroidCache(const AugmentedDataset& data, const TrapArray& traps);

  const CaptureCentroid& left(std::size_t i) const { return left_[i]; }
  const CaptureCentroid& right(std::size_t i) const { return right_[i]; }

 private:
  std::vector<CaptureCentroid> left_;
  std::vector<CaptureCentroid> right_;
};

/// Greedy nearest-centroid matching of captured right rows to captured left
/// rows; leftovers fill unmatched left rows in ascending order.
IdAssignment greedy_init(const AugmentedDataset& data, const TrapArray& traps);

/// Candidate partners for a swap starting at right row i: unknown-ID rows
/// i' != i that are either a free slot (right i' and left id[i'] both
/// all-zero) or whose left row id[i'] has its centroid within `radius` of
/// right row i's centroid. An all-zero right row i takes every eligible i'.
/// Returned in ascending order. Throws if i < n_known.
std::vector<std::size_t> swap_neighborhood(std::size_t i, const IdAssignment& id,
                                           const AugmentedDataset& data,
                                           const CentroidCache& centroids, double radius);

std::vector<std::size_t> swap_neighborhood(std::size_t i, const IdAssignment& id,
                                           const AugmentedDataset& data, const TrapArray& traps,
                                           double radius);

}  // namespace scrid
