#pragma once

#include <boost/container/small_vector.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace smplab {

/// Fixed-length string of bits. Position 0 is the first (most significant)
/// bit; this is the order used by `to_uint`, `from_uint` and the hex codec.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t size);

  /// Low `size` bits of `value`, most significant first. `size` <= 64.
  static BitString from_uint(std::uint64_t value, std::size_t size);
  /// Parses a string of '0'/'1' characters.
  static BitString from_bits(std::string_view bits);
  /// Inverse of `to_hex`; `size` must fit in the given bytes and pad bits must be zero.
  static BitString from_hex(std::string_view hex, std::size_t size);
  static BitString zeros(std::size_t size) { return BitString(size); }
  static BitString ones(std::size_t size);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool get(std::size_t pos) const {
    return (words_[pos / 64] >> (63 - pos % 64)) & 1u;
  }
  void set(std::size_t pos, bool bit);

  /// Value of the whole string read as an unsigned integer. size() <= 64.
  std::uint64_t to_uint() const;
  std::size_t popcount() const;
  bool parity() const { return popcount() & 1u; }
  bool is_zero() const;

  BitString slice(std::size_t pos, std::size_t len) const;
  BitString& append(const BitString& tail);
  void push_back(bool bit);

  BitString& operator^=(const BitString& other);
  friend BitString operator^(BitString lhs, const BitString& rhs) {
    lhs ^= rhs;
    return lhs;
  }

  /// Inner product over GF(2).
  bool dot(const BitString& other) const;

  /// ceil(size/8) bytes, MSB-first within each byte, zero pad bits.
  std::string to_hex() const;
  std::string to_string() const;

  friend bool operator==(const BitString& a, const BitString& b) {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }
  friend std::strong_ordering operator<=>(const BitString& a, const BitString& b);

  std::size_t hash() const;

 private:
  static std::size_t word_count(std::size_t size) { return (size + 63) / 64; }
  void check_same_size(const BitString& other) const;

  std::size_t size_ = 0;
  boost::container::small_vector<std::uint64_t, 1> words_;
};

BitString concat(const BitString& a, const BitString& b);

}  // namespace smplab

template <>
struct std::hash<smplab::BitString> {
  std::size_t operator()(const smplab::BitString& b) const noexcept { return b.hash(); }
};
