#include "smplab/bitstring.hpp"

#include "smplab/error.hpp"

#include <algorithm>
#include <bit>

namespace smplab {

namespace {

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

BitString::BitString(std::size_t size) : size_(size), words_(word_count(size), 0) {}

BitString BitString::from_uint(std::uint64_t value, std::size_t size) {
  if (size > 64) throw ConfigError("BitString::from_uint: size exceeds 64 bits");
  if (size < 64 && (value >> size) != 0) {
    throw ConfigError("BitString::from_uint: value does not fit in " + std::to_string(size) +
                      " bits");
  }
  BitString out(size);
  if (size > 0) out.words_[0] = value << (64 - size);
  return out;
}

BitString BitString::from_bits(std::string_view bits) {
  BitString out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') {
      throw ConfigError("BitString::from_bits: unexpected character '" + std::string(1, bits[i]) +
                        "'");
    }
    out.set(i, bits[i] == '1');
  }
  return out;
}

BitString BitString::from_hex(std::string_view hex, std::size_t size) {
  if (hex.size() != 2 * ((size + 7) / 8)) {
    throw ConfigError("BitString::from_hex: expected " + std::to_string(2 * ((size + 7) / 8)) +
                      " hex digits for " + std::to_string(size) + " bits, got " +
                      std::to_string(hex.size()));
  }
  BitString out(size);
  for (std::size_t d = 0; d < hex.size(); ++d) {
    const int v = hex_digit(hex[d]);
    if (v < 0) throw ConfigError("BitString::from_hex: invalid hex digit");
    for (int b = 0; b < 4; ++b) {
      const bool bit = (v >> (3 - b)) & 1;
      const std::size_t pos = d * 4 + b;
      if (pos < size) {
        out.set(pos, bit);
      } else if (bit) {
        throw ConfigError("BitString::from_hex: non-zero pad bits");
      }
    }
  }
  return out;
}

BitString BitString::ones(std::size_t size) {
  BitString out(size);
  for (std::size_t i = 0; i < size; ++i) out.set(i, true);
  return out;
}

void BitString::set(std::size_t pos, bool bit) {
  const std::uint64_t mask = std::uint64_t{1} << (63 - pos % 64);
  if (bit) {
    words_[pos / 64] |= mask;
  } else {
    words_[pos / 64] &= ~mask;
  }
}

std::uint64_t BitString::to_uint() const {
  if (size_ > 64) throw ConfigError("BitString::to_uint: more than 64 bits");
  if (size_ == 0) return 0;
  return words_[0] >> (64 - size_);
}

std::size_t BitString::popcount() const {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

bool BitString::is_zero() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

BitString BitString::slice(std::size_t pos, std::size_t len) const {
  if (pos + len > size_) throw ConfigError("BitString::slice: range out of bounds");
  BitString out(len);
  if (pos % 64 == 0) {
    for (std::size_t w = 0; w < out.words_.size(); ++w) out.words_[w] = words_[pos / 64 + w];
    if (len % 64 != 0) out.words_.back() &= ~std::uint64_t{0} << (64 - len % 64);
    return out;
  }
  for (std::size_t i = 0; i < len; ++i) out.set(i, get(pos + i));
  return out;
}

BitString& BitString::append(const BitString& tail) {
  const std::size_t old = size_;
  size_ += tail.size_;
  words_.resize(word_count(size_), 0);
  if (old % 64 == 0) {
    for (std::size_t w = 0; w < tail.words_.size(); ++w) words_[old / 64 + w] = tail.words_[w];
    return *this;
  }
  for (std::size_t i = 0; i < tail.size_; ++i) set(old + i, tail.get(i));
  return *this;
}

void BitString::push_back(bool bit) {
  ++size_;
  words_.resize(word_count(size_), 0);
  set(size_ - 1, bit);
}

void BitString::check_same_size(const BitString& other) const {
  if (size_ != other.size_) {
    throw ConfigError("BitString: length mismatch (" + std::to_string(size_) + " vs " +
                      std::to_string(other.size_) + ")");
  }
}

BitString& BitString::operator^=(const BitString& other) {
  check_same_size(other);
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
  return *this;
}

bool BitString::dot(const BitString& other) const {
  check_same_size(other);
  std::uint64_t acc = 0;
  for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & other.words_[w];
  return std::popcount(acc) & 1;
}

std::string BitString::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t bytes = (size_ + 7) / 8;
  std::string out;
  out.reserve(2 * bytes);
  for (std::size_t b = 0; b < bytes; ++b) {
    const std::size_t pos = b * 8;
    const auto byte =
        static_cast<unsigned>((words_[pos / 64] >> (56 - pos % 64)) & 0xffu);
    out.push_back(kDigits[byte >> 4]);
    out.push_back(kDigits[byte & 0xfu]);
  }
  return out;
}

std::string BitString::to_string() const {
  std::string out(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if (get(i)) out[i] = '1';
  }
  return out;
}

std::strong_ordering operator<=>(const BitString& a, const BitString& b) {
  if (auto c = a.size_ <=> b.size_; c != 0) return c;
  for (std::size_t w = 0; w < a.words_.size(); ++w) {
    if (auto c = a.words_[w] <=> b.words_[w]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::size_t BitString::hash() const {
  std::uint64_t h = 0x9e3779b97f4a7c15ull ^ size_;
  for (auto w : words_) {
    h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

BitString concat(const BitString& a, const BitString& b) {
  BitString out = a;
  out.append(b);
  return out;
}

}  // namespace smplab
