#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "specrange/error.hpp"

namespace specrange {

using Site = std::vector<std::int64_t>;

/// Closed integer interval [lo, hi].
struct Interval {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  std::int64_t length() const { return hi - lo + 1; }
  bool contains(std::int64_t k) const { return lo <= k && k <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

inline std::int64_t l1_norm(std::span<const std::int64_t> k) {
  std::int64_t s = 0;
  for (auto v : k) s += v < 0 ? -v : v;
  return s;
}

inline std::int64_t linf_norm(std::span<const std::int64_t> k) {
  std::int64_t s = 0;
  for (auto v : k) s = std::max<std::int64_t>(s, v < 0 ? -v : v);
  return s;
}

/// Finite axis-aligned box in Z^nu. Sites are enumerated lexicographically
/// on (k_1, ..., k_nu), the last coordinate running fastest.
class LatticeBox {
 public:
  LatticeBox() = default;

  explicit LatticeBox(std::vector<Interval> ranges) : ranges_(std::move(ranges)) {
    if (ranges_.empty())
      detail::fail(ErrorKind::invalid_input, "core_model", "LatticeBox", "dimension nu must be >= 1");
    std::size_t count = 1;
    for (std::size_t j = 0; j < ranges_.size(); ++j) {
      const auto& r = ranges_[j];
      if (r.lo > r.hi)
        detail::fail(ErrorKind::invalid_input, "core_model", "LatticeBox",
                     "axis " + std::to_string(j) + " has lo > hi");
      const auto len = static_cast<std::size_t>(r.length());
      if (count > std::numeric_limits<std::size_t>::max() / len)
        detail::fail(ErrorKind::invalid_input, "core_model", "LatticeBox", "site count overflows");
      count *= len;
    }
    site_count_ = count;
  }

  /// 1D box {lo, ..., hi}.
  static LatticeBox line(std::int64_t lo, std::int64_t hi) { return LatticeBox({Interval{lo, hi}}); }

  /// 1D box of n sites around the origin, [-floor(n/2), n - 1 - floor(n/2)].
  /// Odd n is symmetric; even n has the extra site on the negative side.
  static LatticeBox centred_line(std::int64_t n) {
    if (n < 1) detail::fail(ErrorKind::invalid_input, "core_model", "LatticeBox", "need at least one site");
    const std::int64_t lo = -(n / 2);
    return line(lo, lo + n - 1);
  }

  std::size_t nu() const { return ranges_.size(); }
  const std::vector<Interval>& ranges() const { return ranges_; }
  const Interval& range(std::size_t axis) const { return ranges_.at(axis); }
  std::size_t site_count() const { return site_count_; }

  bool contains(std::span<const std::int64_t> k) const {
    if (k.size() != ranges_.size()) return false;
    for (std::size_t j = 0; j < k.size(); ++j)
      if (!ranges_[j].contains(k[j])) return false;
    return true;
  }

  Site site(std::size_t index) const {
    if (index >= site_count_)
      detail::fail(ErrorKind::invalid_input, "core_model", "site", "index out of range");
    Site k(ranges_.size());
    for (std::size_t j = ranges_.size(); j-- > 0;) {
      const auto len = static_cast<std::size_t>(ranges_[j].length());
      k[j] = ranges_[j].lo + static_cast<std::int64_t>(index % len);
      index /= len;
    }
    return k;
  }

  std::size_t index(std::span<const std::int64_t> k) const {
    if (!contains(k)) detail::fail(ErrorKind::invalid_input, "core_model", "site_index", "site not in box");
    std::size_t idx = 0;
    for (std::size_t j = 0; j < ranges_.size(); ++j)
      idx = idx * static_cast<std::size_t>(ranges_[j].length()) + static_cast<std::size_t>(k[j] - ranges_[j].lo);
    return idx;
  }

  /// Radius of the smallest sup-norm ball around the origin containing the box.
  std::int64_t linf_radius() const {
    std::int64_t r = 0;
    for (const auto& iv : ranges_) r = std::max({r, std::abs(iv.lo), std::abs(iv.hi)});
    return r;
  }

  bool contains_origin() const {
    for (const auto& iv : ranges_)
      if (!iv.contains(0)) return false;
    return true;
  }

  friend bool operator==(const LatticeBox& a, const LatticeBox& b) { return a.ranges_ == b.ranges_; }

 private:
  std::vector<Interval> ranges_;
  std::size_t site_count_ = 0;
};

/// Calls fn(site) for every site of the box in enumeration order.
template <class Fn>
void for_each_site(const LatticeBox& box, Fn&& fn) {
  const auto nu = box.nu();
  Site k(nu);
  for (std::size_t j = 0; j < nu; ++j) k[j] = box.range(j).lo;
  for (std::size_t n = 0; n < box.site_count(); ++n) {
    fn(static_cast<const Site&>(k));
    for (std::size_t j = nu; j-- > 0;) {
      if (k[j] < box.range(j).hi) {
        ++k[j];
        break;
      }
      k[j] = box.range(j).lo;
    }
  }
}

}  // namespace specrange
