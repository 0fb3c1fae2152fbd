#pragma once

// Bit-exact hypercube primitives: points of {0,1}^n, sign vectors of {+-1}^n,
// Hamming distance, xor, and signed dot products.
//
// Bit order is little-endian: coordinate j lives in word j/64 at bit j%64,
// and in serialized form in byte j/8 at bit j%8. Hex serialization emits
// ceil(n/8) bytes, lowercase, padded with zero bits.

#include <cstdint>
#include <string>
#include <vector>

namespace relht {

class Point {
 public:
  Point() = default;
  explicit Point(std::uint32_t n) : n_(n), words_((n + 63) / 64, 0) {}

  std::uint32_t dimension() const { return n_; }

  bool get(std::uint32_t j) const {
    return (words_[j >> 6] >> (j & 63)) & 1;
  }
  void set(std::uint32_t j, bool v) {
    if (v)
      words_[j >> 6] |= (std::uint64_t{1} << (j & 63));
    else
      words_[j >> 6] &= ~(std::uint64_t{1} << (j & 63));
  }
  void flip(std::uint32_t j) { words_[j >> 6] ^= (std::uint64_t{1} << (j & 63)); }

  std::uint32_t weight() const;

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& words() { return words_; }

  bool operator==(const Point& o) const {
    return n_ == o.n_ && words_ == o.words_;
  }
  bool operator!=(const Point& o) const { return !(*this == o); }
  bool operator<(const Point& o) const;  // lexicographic, coordinate 0 first

  std::string to_hex() const;
  static Point from_hex(std::uint32_t n, const std::string& hex);

  // "0101"-style string, coordinate 0 first. For tests and diagnostics.
  std::string to_bits() const;
  static Point from_bits(const std::string& bits);

 private:
  std::uint32_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

// A vector in {+1,-1}^n, bit 1 encoding +1 and bit 0 encoding -1.
class SignVector {
 public:
  SignVector() = default;
  explicit SignVector(std::uint32_t n) : bits_(n) {}
  explicit SignVector(Point bits) : bits_(std::move(bits)) {}

  std::uint32_t dimension() const { return bits_.dimension(); }
  int sign(std::uint32_t j) const { return bits_.get(j) ? 1 : -1; }
  void set_sign(std::uint32_t j, int s) { bits_.set(j, s > 0); }

  const Point& bits() const { return bits_; }

  bool operator==(const SignVector& o) const { return bits_ == o.bits_; }

  std::string to_hex() const { return bits_.to_hex(); }
  static SignVector from_hex(std::uint32_t n, const std::string& hex) {
    return SignVector(Point::from_hex(n, hex));
  }

 private:
  Point bits_;
};

std::uint32_t hamming(const Point& x, const Point& y);
Point xor_points(const Point& x, const Point& y);

// Sum of zeta_j over the support of u. Caller passes u = x xor z.
std::int64_t signed_dot(const SignVector& zeta, const Point& u);

}  // namespace relht
