#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iterator>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace uaq {

/// Fixed-universe set of dense indices. `Tag` keeps role sets and
/// permission sets from being mixed up.
template <class Tag>
class IndexSet {
 public:
  using Bits = boost::dynamic_bitset<std::uint64_t>;
  static constexpr std::size_t npos = Bits::npos;

  IndexSet() = default;
  explicit IndexSet(std::size_t universe) : bits_(universe) {}
  IndexSet(std::size_t universe, std::initializer_list<std::size_t> items)
      : bits_(universe) {
    for (auto i : items) bits_.set(i);
  }

  static IndexSet full(std::size_t universe) {
    IndexSet s(universe);
    s.bits_.set();
    return s;
  }

  std::size_t universe() const { return bits_.size(); }
  std::size_t count() const { return bits_.count(); }
  bool empty() const { return bits_.none(); }
  bool any() const { return bits_.any(); }
  bool contains(std::size_t i) const { return i < bits_.size() && bits_.test(i); }

  IndexSet& insert(std::size_t i) {
    bits_.set(i);
    return *this;
  }
  IndexSet& erase(std::size_t i) {
    bits_.reset(i);
    return *this;
  }
  void clear() { bits_.reset(); }

  std::size_t first() const { return bits_.find_first(); }
  std::size_t next(std::size_t i) const { return bits_.find_next(i); }

  bool is_subset_of(const IndexSet& o) const { return bits_.is_subset_of(o.bits_); }
  bool intersects(const IndexSet& o) const { return bits_.intersects(o.bits_); }

  IndexSet& operator|=(const IndexSet& o) {
    bits_ |= o.bits_;
    return *this;
  }
  IndexSet& operator&=(const IndexSet& o) {
    bits_ &= o.bits_;
    return *this;
  }
  IndexSet& operator-=(const IndexSet& o) {
    bits_ -= o.bits_;
    return *this;
  }
  friend IndexSet operator|(IndexSet a, const IndexSet& b) { return a |= b; }
  friend IndexSet operator&(IndexSet a, const IndexSet& b) { return a &= b; }
  friend IndexSet operator-(IndexSet a, const IndexSet& b) { return a -= b; }

  friend bool operator==(const IndexSet& a, const IndexSet& b) = default;
  /// Total order usable for sorted containers (not set inclusion).
  friend bool operator<(const IndexSet& a, const IndexSet& b) {
    if (a.bits_.size() != b.bits_.size()) return a.bits_.size() < b.bits_.size();
    return a.bits_ < b.bits_;
  }

  /// Members in increasing order.
  std::vector<std::size_t> items() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for (auto i = first(); i != npos; i = next(i)) out.push_back(i);
    return out;
  }

  template <class F>
  void for_each(F&& f) const {
    for (auto i = first(); i != npos; i = next(i)) f(i);
  }

  std::size_t hash() const {
    std::size_t h = std::hash<std::size_t>{}(bits_.size());
    boost::to_block_range(bits_, HashSink{&h});
    return h;
  }

  const Bits& bits() const { return bits_; }

 private:
  struct HashSink {
    using iterator_category = std::output_iterator_tag;
    using value_type = void;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = void;
    std::size_t* h;
    HashSink& operator*() { return *this; }
    HashSink& operator++() { return *this; }
    HashSink operator++(int) { return *this; }
    HashSink& operator=(std::uint64_t block) {
      *h ^= std::hash<std::uint64_t>{}(block) + 0x9e3779b97f4a7c15ULL + (*h << 6) + (*h >> 2);
      return *this;
    }
  };

  Bits bits_;
};

struct RoleTag {};
struct PermTag {};

using RoleSet = IndexSet<RoleTag>;
using PermSet = IndexSet<PermTag>;

template <class Tag>
struct IndexSetHash {
  std::size_t operator()(const IndexSet<Tag>& s) const { return s.hash(); }
};

}  // namespace uaq
