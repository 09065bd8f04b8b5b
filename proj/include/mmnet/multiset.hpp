#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <string>

#include "mmnet/error.hpp"

namespace mmnet {

/// Finite multiset. Only strictly positive counts are stored.
template <typename T>
class Multiset {
 public:
  using Entries = std::map<T, std::size_t>;

  Multiset() = default;
  Multiset(std::initializer_list<std::pair<const T, std::size_t>> init) {
    for (const auto& [k, n] : init) add(k, n);
  }

  void add(const T& item, std::size_t n = 1) {
    if (n) entries_[item] += n;
  }

  /// Removes n copies; throws NotSubset when fewer are present.
  void remove(const T& item, std::size_t n = 1) {
    if (!n) return;
    auto it = entries_.find(item);
    if (it == entries_.end() || it->second < n) throw NotSubset("multiset lacks enough copies");
    it->second -= n;
    if (it->second == 0) entries_.erase(it);
  }

  std::size_t count(const T& item) const {
    auto it = entries_.find(item);
    return it == entries_.end() ? 0 : it->second;
  }

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& [_, c] : entries_) n += c;
    return n;
  }

  std::size_t distinct() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Entries& entries() const { return entries_; }

  bool subset_of(const Multiset& other) const {
    for (const auto& [k, n] : entries_)
      if (other.count(k) < n) return false;
    return true;
  }

  friend Multiset operator+(Multiset a, const Multiset& b) {
    for (const auto& [k, n] : b.entries_) a.add(k, n);
    return a;
  }

  /// a - b; requires b to be contained in a.
  friend Multiset operator-(Multiset a, const Multiset& b) {
    if (!b.subset_of(a)) throw NotSubset("difference of a multiset that is not contained");
    for (const auto& [k, n] : b.entries_) a.remove(k, n);
    return a;
  }

  friend Multiset operator*(std::size_t k, const Multiset& s) {
    Multiset out;
    for (const auto& [item, n] : s.entries_) out.add(item, k * n);
    return out;
  }

  friend bool operator==(const Multiset&, const Multiset&) = default;
  friend auto operator<=>(const Multiset&, const Multiset&) = default;

 private:
  Entries entries_;
};

}  // namespace mmnet
