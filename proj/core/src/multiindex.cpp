#include "zakai/multiindex.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace zakai {

MultiIndex::MultiIndex(int r) : r_(r) {
  if (r < 1) throw ValidationError("multi-index channel count r must be >= 1");
}

MultiIndex::MultiIndex(int r, std::vector<IndexEntry> entries) : MultiIndex(r) {
  for (const auto& e : entries) {
    if (e.k < 1 || e.l < 1 || e.l > r || e.count < 0)
      throw ValidationError("multi-index entry out of range: " + std::to_string(e.k) + ":" +
                            std::to_string(e.l) + ":" + std::to_string(e.count));
  }
  std::erase_if(entries, [](const IndexEntry& e) { return e.count == 0; });
  std::sort(entries.begin(), entries.end(), [this](const IndexEntry& a, const IndexEntry& b) {
    return slot(a.k, a.l) < slot(b.k, b.l);
  });
  // merge duplicates so equal indices compare equal
  for (const auto& e : entries) {
    if (!entries_.empty() && entries_.back().k == e.k && entries_.back().l == e.l)
      entries_.back().count += e.count;
    else
      entries_.push_back(e);
  }
}

int MultiIndex::length() const {
  int total = 0;
  for (const auto& e : entries_) total += e.count;
  return total;
}

int MultiIndex::order() const {
  int top = 0;
  for (const auto& e : entries_) top = std::max(top, e.k);
  return top;
}

int MultiIndex::count(int k, int l) const {
  for (const auto& e : entries_)
    if (e.k == k && e.l == l) return e.count;
  return 0;
}

bool operator<(const MultiIndex& a, const MultiIndex& b) {
  if (a.r_ != b.r_) return a.r_ < b.r_;
  return std::lexicographical_compare(
      a.entries_.begin(), a.entries_.end(), b.entries_.begin(), b.entries_.end(),
      [&](const IndexEntry& x, const IndexEntry& y) {
        const int sx = a.slot(x.k, x.l), sy = a.slot(y.k, y.l);
        if (sx != sy) return sx < sy;
        return x.count < y.count;
      });
}

namespace {

MultiIndex from_slots(const std::vector<int>& slots, int r) {
  std::vector<IndexEntry> entries;
  for (int s : slots) {
    const int k = (s - 1) / r + 1;
    const int l = (s - 1) % r + 1;
    if (!entries.empty() && entries.back().k == k && entries.back().l == l)
      ++entries.back().count;
    else
      entries.push_back({k, l, 1});
  }
  return MultiIndex(r, std::move(entries));
}

void nondecreasing_sequences(int length, int first, int last, std::vector<int>& prefix,
                             std::vector<MultiIndex>& out, int r) {
  if (static_cast<int>(prefix.size()) == length) {
    out.push_back(from_slots(prefix, r));
    return;
  }
  for (int s = first; s <= last; ++s) {
    prefix.push_back(s);
    nondecreasing_sequences(length, s, last, prefix, out, r);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<MultiIndex> enumerate_truncated(int N, int n, int r) {
  if (N < 0) throw ValidationError("enumerate_truncated: N must be >= 0");
  if (n < 1) throw ValidationError("enumerate_truncated: n must be >= 1");
  if (r < 1) throw ValidationError("enumerate_truncated: r must be >= 1");
  std::vector<MultiIndex> out;
  out.reserve(truncated_set_size(N, n, r));
  std::vector<int> prefix;
  for (int len = 0; len <= N; ++len) nondecreasing_sequences(len, 1, n * r, prefix, out, r);
  return out;
}

std::uint64_t truncated_set_size(int N, int n, int r) {
  // binomial(n r + N, N) computed incrementally; each partial product is an
  // exact binomial coefficient so the division is exact
  const std::uint64_t top = static_cast<std::uint64_t>(n) * r + N;
  std::uint64_t c = 1;
  for (std::uint64_t i = 1; i <= static_cast<std::uint64_t>(N); ++i)
    c = c * (top - N + i) / i;
  return c;
}

CharacteristicSet characteristic_set(const MultiIndex& alpha) {
  CharacteristicSet pairs;
  pairs.reserve(alpha.length());
  // entries are sorted by slot, which is exactly (k, then l) order
  for (const auto& e : alpha.entries())
    for (int c = 0; c < e.count; ++c) pairs.push_back({e.k, e.l});
  return pairs;
}

MultiIndex from_characteristic_set(const CharacteristicSet& pairs, int r) {
  std::vector<IndexEntry> entries;
  entries.reserve(pairs.size());
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    const auto& a = pairs[i - 1];
    const auto& b = pairs[i];
    if (a.k > b.k || (a.k == b.k && a.l > b.l))
      throw ValidationError("characteristic set is not ordered at position " + std::to_string(i));
  }
  for (const auto& p : pairs) entries.push_back({p.k, p.l, 1});
  return MultiIndex(r, std::move(entries));
}

MultiIndex lower(const MultiIndex& alpha, int k, int l) {
  std::vector<IndexEntry> entries = alpha.entries();
  for (auto& e : entries)
    if (e.k == k && e.l == l) --e.count;
  return MultiIndex(alpha.channels(), std::move(entries));
}

std::uint64_t factorial(const MultiIndex& alpha) {
  std::uint64_t result = 1;
  for (const auto& e : alpha.entries()) {
    if (e.count > 20)
      throw ValidationError("factorial: entry count " + std::to_string(e.count) +
                            " exceeds the 20 guard");
    for (int i = 2; i <= e.count; ++i) {
      if (__builtin_mul_overflow(result, static_cast<std::uint64_t>(i), &result))
        throw ValidationError("factorial: alpha! overflows 64 bits");
    }
  }
  return result;
}

double hermite_poly(int nu, double x) {
  if (nu < 0) throw ValidationError("hermite_poly: degree must be >= 0");
  if (nu == 0) return 1.0;
  double prev = 1.0, cur = x;
  for (int k = 1; k < nu; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double xi_eval(const MultiIndex& alpha, const XiTable& xi) {
  double product = 1.0;
  for (const auto& e : alpha.entries()) {
    if (e.k > xi.modes() || e.l > xi.channels())
      throw ValidationError("xi_eval: no xi value for (k=" + std::to_string(e.k) +
                            ", l=" + std::to_string(e.l) + ")");
    product *= hermite_poly(e.count, xi.at(e.k, e.l));
  }
  return product / std::sqrt(static_cast<double>(factorial(alpha)));
}

std::string serialize(const MultiIndex& alpha) {
  if (alpha.empty()) return "-";
  std::string out;
  for (const auto& e : alpha.entries()) {
    if (!out.empty()) out += ' ';
    out += std::to_string(e.k) + ':' + std::to_string(e.l) + ':' + std::to_string(e.count);
  }
  return out;
}

MultiIndex parse_multiindex(std::string_view text, int r) {
  std::istringstream in{std::string(text)};
  std::string token;
  std::vector<IndexEntry> entries;
  bool saw_dash = false;
  while (in >> token) {
    if (token == "-") {
      saw_dash = true;
      continue;
    }
    IndexEntry e;
    const char* p = token.data();
    const char* end = token.data() + token.size();
    auto read = [&](int& v, bool want_colon) {
      auto [ptr, ec] = std::from_chars(p, end, v);
      if (ec != std::errc{} || (want_colon && (ptr == end || *ptr != ':')))
        throw ValidationError("malformed multi-index token '" + token + "'");
      p = want_colon ? ptr + 1 : ptr;
    };
    read(e.k, true);
    read(e.l, true);
    read(e.count, false);
    if (p != end || e.count < 1)
      throw ValidationError("malformed multi-index token '" + token + "'");
    entries.push_back(e);
  }
  if (saw_dash && !entries.empty())
    throw ValidationError("multi-index line mixes '-' with entries");
  if (!saw_dash && entries.empty()) throw ValidationError("empty multi-index line");
  return MultiIndex(r, std::move(entries));
}

}  // namespace zakai
