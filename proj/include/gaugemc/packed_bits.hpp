#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <vector>

namespace gaugemc {

// Dense bit array. Throughout this code bit=1 encodes a -1 spin/sign and
// bit=0 encodes +1, so products of +-1 variables become XORs of bits.
class PackedBits {
 public:
  PackedBits() = default;
  explicit PackedBits(int n, bool ones = false) { resize(n, ones); }

  void resize(int n, bool ones = false) {
    n_ = n;
    words_.assign((n + 63) / 64, ones ? ~std::uint64_t{0} : 0);
    trim_tail();
  }

  int size() const { return n_; }

  int get(int i) const {
    assert(i >= 0 && i < n_);
    return static_cast<int>((words_[i >> 6] >> (i & 63)) & 1u);
  }

  void set(int i, int bit) {
    assert(i >= 0 && i < n_);
    std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (bit)
      words_[i >> 6] |= mask;
    else
      words_[i >> 6] &= ~mask;
  }

  void flip(int i) {
    assert(i >= 0 && i < n_);
    words_[i >> 6] ^= std::uint64_t{1} << (i & 63);
  }

  int count() const {
    int c = 0;
    for (std::uint64_t w : words_) c += std::popcount(w);
    return c;
  }

  // Symmetric difference in place; sizes must match.
  void xor_with(const PackedBits& other) {
    assert(n_ == other.n_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  }

  int and_count(const PackedBits& other) const {
    assert(n_ == other.n_);
    int c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i)
      c += std::popcount(words_[i] & other.words_[i]);
    return c;
  }

  bool operator==(const PackedBits&) const = default;

  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  void trim_tail() {
    if (n_ & 63) words_.back() &= (std::uint64_t{1} << (n_ & 63)) - 1;
  }

  int n_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace gaugemc
