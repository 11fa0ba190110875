#include "scrid/identity.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <tuple>

#include "scrid/error.hpp"

namespace scrid {

// --- IdAssignment --------------------------------------------------------------

IdAssignment::IdAssignment(std::vector<std::size_t> ids, std::size_t n_known)
    : ids_(std::move(ids)), n_known_(n_known) {
  const std::size_t M = ids_.size();
  if (n_known_ > M) throw Error(ErrorKind::InvalidArgument, "n_known exceeds ID vector length");
  std::vector<bool> seen(M, false);
  for (std::size_t i = 0; i < M; ++i) {
    const std::size_t v = ids_[i];
    if (v >= M || seen[v]) throw Error(ErrorKind::InvalidArgument, "ID vector is not a bijection");
    seen[v] = true;
    if (i < n_known_ && v != i)
      throw Error(ErrorKind::InvalidArgument, "known rows must map to themselves");
  }
}

IdAssignment IdAssignment::identity(std::size_t M, std::size_t n_known) {
  std::vector<std::size_t> ids(M);
  for (std::size_t i = 0; i < M; ++i) ids[i] = i;
  return IdAssignment(std::move(ids), n_known);
}

void IdAssignment::swap_rows(std::size_t a, std::size_t b) {
  if (a < n_known_ || b < n_known_)
    throw Error(ErrorKind::InvalidArgument, "known identities cannot be swapped");
  std::swap(ids_[a], ids_[b]);
}

IdAssignment IdAssignment::inverse() const {
  std::vector<std::size_t> inv(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) inv[ids_[i]] = i;
  IdAssignment out;
  out.ids_ = std::move(inv);
  out.n_known_ = n_known_;
  return out;
}

EncounterMatrix reorder_right(const EncounterMatrix& right, const IdAssignment& id) {
  if (id.size() != right.rows())
    throw Error(ErrorKind::Dimension, "ID vector length does not match right-side rows");
  EncounterMatrix out(right.rows(), right.cols(), right.occasions());
  for (std::size_t i = 0; i < right.rows(); ++i) {
    const auto src = right.row(i);
    std::copy(src.begin(), src.end(), out.row(id[i]).begin());
  }
  return out;
}

CaptureCentroid centroid(std::span<const int> row, const TrapArray& traps) {
  if (row.size() != traps.size())
    throw Error(ErrorKind::Dimension, "row length does not match trap count");
  CaptureCentroid c;
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] == 0) continue;
    c.n_caps += row[j];
    sx += row[j] * traps[j].x;
    sy += row[j] * traps[j].y;
  }
  if (c.n_caps > 0) c.location = Point{sx / c.n_caps, sy / c.n_caps};
  return c;
}

// --- canonicalize ----------------------------------------------------------------

namespace {

struct Arranged {
  EncounterMatrix rows;
  std::size_t n_observed = 0;
};

Arranged arrange(const EncounterMatrix& m, std::size_t n_known) {
  Arranged out{EncounterMatrix(0, m.cols(), m.occasions()), n_known};
  for (std::size_t i = 0; i < n_known; ++i) out.rows.append_row(m.row(i));
  for (std::size_t i = n_known; i < m.rows(); ++i) {
    if (m.row_is_zero(i)) continue;
    out.rows.append_row(m.row(i));
    ++out.n_observed;
  }
  return out;
}

}  // namespace

CanonicalData canonicalize(const EncounterMatrix& left, const EncounterMatrix& right,
                           std::size_t n_known, std::size_t M) {
  if (left.cols() != right.cols())
    throw Error(ErrorKind::Dimension, "left and right have different trap counts");
  if (left.occasions() != right.occasions())
    throw Error(ErrorKind::Dimension, "left and right have different K");
  if (n_known > left.rows() || n_known > right.rows())
    throw Error(ErrorKind::InvalidArgument, "n_known exceeds the observed rows of a side");

  Arranged l = arrange(left, n_known);
  Arranged r = arrange(right, n_known);
  CanonicalData out;
  if (r.n_observed > l.n_observed) {
    std::swap(l, r);
    out.swapped = true;
  }
  const std::size_t M_eff = M != 0 ? M : std::max(left.rows(), right.rows());
  if (M_eff < l.n_observed)
    throw Error(ErrorKind::Dimension, "M = " + std::to_string(M_eff) +
                                          " is smaller than the observed rows (" +
                                          std::to_string(l.n_observed) + ")");

  AugmentedDataset& d = out.data;
  d.left = l.rows.padded(M_eff);
  d.right = r.rows.padded(M_eff);
  d.M = M_eff;
  d.J = left.cols();
  d.K = left.occasions();
  d.n_left = l.n_observed;
  d.n_right = r.n_observed;
  d.n_known = n_known;
  d.validate();
  return out;
}

CentroidCache::CentroidCache(const AugmentedDataset& data, const TrapArray& traps) {
  left_.reserve(data.M);
  right_.reserve(data.M);
  for (std::size_t i = 0; i < data.M; ++i) {
    left_.push_back(centroid(data.left.row(i), traps));
    right_.push_back(centroid(data.right.row(i), traps));
  }
}

// --- greedy_init ---------------------------------------------------------------------

IdAssignment greedy_init(const AugmentedDataset& data, const TrapArray& traps) {
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  const std::size_t M = data.M;
  const std::size_t nk = data.n_known;
  const CentroidCache cache(data, traps);

  std::vector<std::size_t> ids(M, kUnset);
  std::vector<bool> left_used(M, false);
  for (std::size_t i = 0; i < nk; ++i) {
    ids[i] = i;
    left_used[i] = true;
  }

  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  for (std::size_t r = nk; r < M; ++r) {
    if (!cache.right(r).location) continue;
    for (std::size_t l = nk; l < M; ++l) {
      if (!cache.left(l).location) continue;
      pairs.emplace_back(dist2(*cache.right(r).location, *cache.left(l).location), r, l);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  for (const auto& [d, r, l] : pairs) {
    if (ids[r] != kUnset || left_used[l]) continue;
    ids[r] = l;
    left_used[l] = true;
  }

  std::size_t next_left = 0;
  for (std::size_t r = nk; r < M; ++r) {
    if (ids[r] != kUnset) continue;
    while (left_used[next_left]) ++next_left;
    ids[r] = next_left;
    left_used[next_left] = true;
  }
  return IdAssignment(std::move(ids), nk);
}

// --- swap_neighborhood -------------------------------------------------------------------

std::vector<std::size_t> swap_neighborhood(std::size_t i, const IdAssignment& id,
                                           const AugmentedDataset& data,
                                           const CentroidCache& centroids, double radius) {
  if (i < data.n_known) throw Error(ErrorKind::InvalidArgument, "known identities are never swapped");
  if (i >= data.M) throw Error(ErrorKind::Dimension, "right row index out of range");

  std::vector<std::size_t> out;
  const auto& anchor = centroids.right(i).location;
  const double r2 = radius * radius;
  for (std::size_t k = data.n_known; k < data.M; ++k) {
    if (k == i) continue;
    const std::size_t l = id[k];
    const auto& left_loc = centroids.left(l).location;
    if (!anchor) {
      out.push_back(k);
    } else if (!centroids.right(k).location && !left_loc) {
      out.push_back(k);  // free slot
    } else if (left_loc && dist2(*anchor, *left_loc) <= r2) {
      out.push_back(k);
    }
  }
  return out;
}

std::vector<std::size_t> swap_neighborhood(std::size_t i, const IdAssignment& id,
                                           const AugmentedDataset& data, const TrapArray& traps,
                                           double radius) {
  return swap_neighborhood(i, id, data, CentroidCache(data, traps), radius);
}

}  // namespace scrid
