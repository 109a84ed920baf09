#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <vector>

namespace linext {

// Fixed-width bitset sized at construction. The samplers spend most of their
// time intersecting closure rows with liveness masks, so we want word-level
// AND/OR plus counts without temporaries; std::bitset is compile-time sized
// and vector<bool> has no word access.
//
// Invariant: bits at positions >= size_bits() are always zero (there is no
// operator~, and -= is used for set difference).
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(int nbits) : nbits_(nbits), words_(word_count(nbits), 0) {}

  int size_bits() const { return nbits_; }

  bool test(int i) const {
    assert(i >= 0 && i < nbits_);
    return (words_[std::size_t(i) >> 6] >> (i & 63)) & 1u;
  }
  void set(int i) {
    assert(i >= 0 && i < nbits_);
    words_[std::size_t(i) >> 6] |= std::uint64_t(1) << (i & 63);
  }
  void reset(int i) {
    assert(i >= 0 && i < nbits_);
    words_[std::size_t(i) >> 6] &= ~(std::uint64_t(1) << (i & 63));
  }

  void clear() {
    for (auto& w : words_) w = 0;
  }

  // Sets bits 0..n-1.
  void set_first_n(int n) {
    assert(n >= 0 && n <= nbits_);
    clear();
    int full = n >> 6;
    for (int w = 0; w < full; ++w) words_[w] = ~std::uint64_t(0);
    if (n & 63) words_[full] = (std::uint64_t(1) << (n & 63)) - 1;
  }

  int count() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }

  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }

  Bitset& operator&=(const Bitset& o) {
    assert(nbits_ == o.nbits_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  Bitset& operator|=(const Bitset& o) {
    assert(nbits_ == o.nbits_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  // Set difference: this &= ~o.
  Bitset& operator-=(const Bitset& o) {
    assert(nbits_ == o.nbits_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }

  // this |= (a & b), without a temporary.
  void or_and(const Bitset& a, const Bitset& b) {
    assert(nbits_ == a.nbits_ && nbits_ == b.nbits_);
    for (std::size_t i = 0; i < words_.size(); ++i)
      words_[i] |= a.words_[i] & b.words_[i];
  }

  friend bool operator==(const Bitset&, const Bitset&) = default;

  // Calls fn(i) for every set bit, in ascending order.
  template <class Fn>
  void for_each_set(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        fn(int(w << 6) + std::countr_zero(bits));
        bits &= bits - 1;
      }
    }
  }

  std::vector<int> to_vector() const {
    std::vector<int> out;
    out.reserve(std::size_t(count()));
    for_each_set([&](int v) { out.push_back(v); });
    return out;
  }

  friend int count_and(const Bitset& a, const Bitset& b) {
    assert(a.nbits_ == b.nbits_);
    int c = 0;
    for (std::size_t i = 0; i < a.words_.size(); ++i)
      c += std::popcount(a.words_[i] & b.words_[i]);
    return c;
  }

  friend bool intersects(const Bitset& a, const Bitset& b) {
    assert(a.nbits_ == b.nbits_);
    for (std::size_t i = 0; i < a.words_.size(); ++i)
      if (a.words_[i] & b.words_[i]) return true;
    return false;
  }

  friend bool intersects3(const Bitset& a, const Bitset& b, const Bitset& c) {
    assert(a.nbits_ == b.nbits_ && a.nbits_ == c.nbits_);
    for (std::size_t i = 0; i < a.words_.size(); ++i)
      if (a.words_[i] & b.words_[i] & c.words_[i]) return true;
    return false;
  }

  // True when every set bit of this is also set in o.
  bool is_subset_of(const Bitset& o) const {
    assert(nbits_ == o.nbits_);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

 private:
  static std::size_t word_count(int nbits) {
    return (std::size_t(nbits) + 63) / 64;
  }

  int nbits_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace linext
