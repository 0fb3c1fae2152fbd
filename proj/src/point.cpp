#include "relht/point.hpp"

#include <bit>
#include <stdexcept>

namespace relht {

namespace {

void require_same_dim(const Point& x, const Point& y) {
  if (x.dimension() != y.dimension())
    throw std::invalid_argument("dimension mismatch: " +
                                std::to_string(x.dimension()) + " vs " +
                                std::to_string(y.dimension()));
}

int hex_val(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  throw std::invalid_argument("bad hex digit");
}

}  // namespace

std::uint32_t Point::weight() const {
  std::uint32_t w = 0;
  for (auto word : words_) w += static_cast<std::uint32_t>(std::popcount(word));
  return w;
}

bool Point::operator<(const Point& o) const {
  if (n_ != o.n_) return n_ < o.n_;
  for (std::uint32_t j = 0; j < n_; ++j) {
    bool a = get(j), b = o.get(j);
    if (a != b) return !a;
  }
  return false;
}

std::string Point::to_hex() const {
  static const char* digits = "0123456789abcdef";
  const std::uint32_t nbytes = (n_ + 7) / 8;
  std::string out(2 * nbytes, '0');
  for (std::uint32_t b = 0; b < nbytes; ++b) {
    std::uint8_t byte =
        static_cast<std::uint8_t>((words_[b >> 3] >> ((b & 7) * 8)) & 0xff);
    out[2 * b] = digits[byte >> 4];
    out[2 * b + 1] = digits[byte & 0xf];
  }
  return out;
}

Point Point::from_hex(std::uint32_t n, const std::string& hex) {
  const std::uint32_t nbytes = (n + 7) / 8;
  if (hex.size() != 2 * nbytes)
    throw std::invalid_argument("hex string length mismatch");
  Point p(n);
  for (std::uint32_t b = 0; b < nbytes; ++b) {
    std::uint8_t byte = static_cast<std::uint8_t>(hex_val(hex[2 * b]) * 16 +
                                                  hex_val(hex[2 * b + 1]));
    p.words_[b >> 3] |= std::uint64_t{byte} << ((b & 7) * 8);
  }
  // Padding bits beyond n must be zero for bit-exact round trips.
  if (n % 64 != 0 && !p.words_.empty()) {
    std::uint64_t mask = (std::uint64_t{1} << (n % 64)) - 1;
    if ((p.words_.back() & ~mask) != 0)
      throw std::invalid_argument("nonzero padding bits in hex point");
  }
  return p;
}

std::string Point::to_bits() const {
  std::string out(n_, '0');
  for (std::uint32_t j = 0; j < n_; ++j)
    if (get(j)) out[j] = '1';
  return out;
}

Point Point::from_bits(const std::string& bits) {
  Point p(static_cast<std::uint32_t>(bits.size()));
  for (std::uint32_t j = 0; j < bits.size(); ++j) {
    if (bits[j] == '1')
      p.set(j, true);
    else if (bits[j] != '0')
      throw std::invalid_argument("bad bit character");
  }
  return p;
}

std::uint32_t hamming(const Point& x, const Point& y) {
  require_same_dim(x, y);
  std::uint32_t d = 0;
  const auto& a = x.words();
  const auto& b = y.words();
  for (std::size_t i = 0; i < a.size(); ++i)
    d += static_cast<std::uint32_t>(std::popcount(a[i] ^ b[i]));
  return d;
}

Point xor_points(const Point& x, const Point& y) {
  require_same_dim(x, y);
  Point out(x.dimension());
  const auto& a = x.words();
  const auto& b = y.words();
  for (std::size_t i = 0; i < a.size(); ++i) out.words()[i] = a[i] ^ b[i];
  return out;
}

std::int64_t signed_dot(const SignVector& zeta, const Point& u) {
  if (zeta.dimension() != u.dimension())
    throw std::invalid_argument("dimension mismatch in signed_dot");
  // sum = (#plus on support) - (#minus on support) = 2*|plus & u| - |u|
  std::int64_t plus = 0, total = 0;
  const auto& zw = zeta.bits().words();
  const auto& uw = u.words();
  for (std::size_t i = 0; i < uw.size(); ++i) {
    plus += std::popcount(zw[i] & uw[i]);
    total += std::popcount(uw[i]);
  }
  return 2 * plus - total;
}

}  // namespace relht
