#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "zakai/types.hpp"

namespace zakai {

/// One nonzero entry alpha_k^l of a multi-index: temporal mode k, channel l.
struct IndexEntry {
  int k = 1;
  int l = 1;
  int count = 1;

  friend bool operator==(const IndexEntry&, const IndexEntry&) = default;
};

/// A (k, l) pair of a characteristic set.
struct ModeChannel {
  int k = 1;
  int l = 1;

  friend bool operator==(const ModeChannel&, const ModeChannel&) = default;
};

using CharacteristicSet = std::vector<ModeChannel>;

/// Sparse multi-index alpha = (alpha_k^l) over temporal modes k >= 1 and
/// channels l in 1..r. Only positive counts are stored, sorted by the
/// flattened slot (k - 1) * r + l. Immutable once built.
class MultiIndex {
 public:
  explicit MultiIndex(int r = 1);
  MultiIndex(int r, std::vector<IndexEntry> entries);

  int channels() const { return r_; }
  const std::vector<IndexEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  /// |alpha|, the chaos order.
  int length() const;
  /// d(alpha), the highest temporal mode used; 0 for the empty index.
  int order() const;
  /// alpha_k^l, zero when absent.
  int count(int k, int l) const;

  int slot(int k, int l) const { return (k - 1) * r_ + l; }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator<(const MultiIndex& a, const MultiIndex& b);

 private:
  int r_;
  std::vector<IndexEntry> entries_;
};

/// Every alpha with |alpha| <= N and d(alpha) <= n over r channels.
/// Ordered by |alpha|, then lexicographically by the nondecreasing slot
/// sequence of the characteristic set. Size is binomial(n r + N, N).
std::vector<MultiIndex> enumerate_truncated(int N, int n, int r);

/// binomial(n r + N, N), the size of the truncated set.
std::uint64_t truncated_set_size(int N, int n, int r);

CharacteristicSet characteristic_set(const MultiIndex& alpha);
/// Inverse of characteristic_set. Throws ValidationError when the pairs are
/// out of order or a channel exceeds r.
MultiIndex from_characteristic_set(const CharacteristicSet& pairs, int r);

/// alpha(k, l): entry (k, l) decremented toward zero.
MultiIndex lower(const MultiIndex& alpha, int k, int l);

/// alpha! = prod alpha_k^l!. Throws ValidationError when an entry exceeds 20
/// or the product overflows 64 bits.
std::uint64_t factorial(const MultiIndex& alpha);

/// Probabilists' Hermite polynomial He_nu(x) via the three-term recurrence.
double hermite_poly(int nu, double x);

/// Dense table of xi_{k,l} values, k = 1..n, l = 1..r.
class XiTable {
 public:
  XiTable(int n, int r) : values_(Matrix::Zero(n, r)) {}
  explicit XiTable(Matrix values) : values_(std::move(values)) {}

  int modes() const { return static_cast<int>(values_.rows()); }
  int channels() const { return static_cast<int>(values_.cols()); }
  double& at(int k, int l) { return values_(k - 1, l - 1); }
  double at(int k, int l) const { return values_(k - 1, l - 1); }
  const Matrix& values() const { return values_; }

 private:
  Matrix values_;
};

/// xi_alpha = prod_{k,l} He_{alpha_k^l}(xi_{k,l}) / sqrt(alpha!).
/// Throws ValidationError when xi lacks an entry that alpha uses.
double xi_eval(const MultiIndex& alpha, const XiTable& xi);

/// Text form: "k:l:count" triples separated by spaces; "-" for the empty index.
std::string serialize(const MultiIndex& alpha);
MultiIndex parse_multiindex(std::string_view text, int r);

}  // namespace zakai
