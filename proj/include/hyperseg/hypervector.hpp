#pragma once

// Bipolar hypervectors with a bit-packed layout.
//
// Component c is stored in bit (c % 64) of word (c / 64); a set bit encodes -1
// and a clear bit encodes +1. Padding bits past the dimension are always zero,
// so whole-word XOR/popcount gives exact mismatch counts.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hyperseg/error.hpp"
#include "hyperseg/random.hpp"

namespace hyperseg {

inline constexpr std::size_t kDefaultDimension = 10'000;
inline constexpr std::uint64_t kDefaultSeed = 42;

// How an even-sized bundle settles components whose votes cancel.
//   plus_one: the tie becomes +1.
//   content:  the tie takes the component of a vector keyed by the bundled
//             tokens themselves. Unrelated bundles then stay uncorrelated,
//             whereas plus_one pulls every even bundle toward all-ones.
enum class TieBreak { plus_one, content };

// Global randomness context: identical (global_seed, token) pairs always give
// bit-identical vectors.
struct SeedContext {
  std::uint64_t global_seed = kDefaultSeed;
  std::size_t dimension = kDefaultDimension;
  TieBreak tie_break = TieBreak::plus_one;

  void validate() const {
    if (dimension == 0) throw InvalidConfiguration("hypervector dimension must be >= 1");
  }
};

class Hypervector {
 public:
  static constexpr std::size_t kWordBits = 64;

  // All components +1.
  explicit Hypervector(std::size_t dimension) : dim_(dimension), words_(word_count(dimension), 0) {
    if (dimension == 0) throw InvalidConfiguration("hypervector dimension must be >= 1");
  }

  static Hypervector from_components(std::span<const int> components) {
    Hypervector v(components.size());
    for (std::size_t c = 0; c < components.size(); ++c) {
      if (components[c] == -1) {
        v.words_[c / kWordBits] |= bit(c);
      } else if (components[c] != 1) {
        throw InvalidArgument("hypervector component " + std::to_string(c) + " is not -1 or +1");
      }
    }
    return v;
  }

  static Hypervector from_components(std::initializer_list<int> components) {
    const std::vector<int> tmp(components);
    return from_components(std::span<const int>(tmp));
  }

  [[nodiscard]] std::size_t dimension() const noexcept { return dim_; }

  [[nodiscard]] int operator[](std::size_t c) const noexcept {
    return (words_[c / kWordBits] & bit(c)) ? -1 : 1;
  }

  [[nodiscard]] std::vector<int> components() const {
    std::vector<int> out(dim_);
    for (std::size_t c = 0; c < dim_; ++c) out[c] = (*this)[c];
    return out;
  }

  [[nodiscard]] Hypervector negated() const {
    Hypervector out(*this);
    for (auto& w : out.words_) w = ~w;
    out.clear_padding();
    return out;
  }

  [[nodiscard]] std::span<const std::uint64_t> words() const noexcept { return words_; }
  [[nodiscard]] std::span<std::uint64_t> mutable_words() noexcept { return words_; }

  // Zeroes the bits past the dimension. Must be called after raw word writes.
  void clear_padding() noexcept {
    const std::size_t tail = dim_ % kWordBits;
    if (tail != 0) words_.back() &= (std::uint64_t{1} << tail) - 1;
  }

  friend bool operator==(const Hypervector&, const Hypervector&) = default;

  static constexpr std::size_t word_count(std::size_t dimension) noexcept {
    return (dimension + kWordBits - 1) / kWordBits;
  }

 private:
  static constexpr std::uint64_t bit(std::size_t c) noexcept { return std::uint64_t{1} << (c % kWordBits); }

  std::size_t dim_;
  std::vector<std::uint64_t> words_;
};

inline void require_same_dimension(const Hypervector& a, const Hypervector& b) {
  if (a.dimension() != b.dimension()) {
    throw InvalidArgument("hypervector dimension mismatch: " + std::to_string(a.dimension()) +
                          " vs " + std::to_string(b.dimension()));
  }
}

// IID uniform bipolar vector keyed by (ctx.global_seed, key).
[[nodiscard]] inline Hypervector random_hypervector(const SeedContext& ctx, std::string_view key) {
  ctx.validate();
  if (key.empty()) throw InvalidArgument("hypervector key must be non-empty");
  Hypervector v(ctx.dimension);
  const std::uint64_t stream = rng::token_key(ctx.global_seed, key);
  auto words = v.mutable_words();
  for (std::size_t w = 0; w < words.size(); ++w) words[w] = rng::stream_word(stream, w);
  v.clear_padding();
  return v;
}

namespace detail {

// dst |= (src << shift) restricted to the first dst.size() words.
inline void or_shift_up(std::span<const std::uint64_t> src, std::size_t shift,
                        std::span<std::uint64_t> dst) noexcept {
  const std::size_t ws = shift / 64;
  const unsigned bs = static_cast<unsigned>(shift % 64);
  const std::size_t n = dst.size();
  for (std::size_t i = ws; i < n; ++i) {
    std::uint64_t w = src[i - ws] << bs;
    if (bs != 0 && i > ws) w |= src[i - ws - 1] >> (64 - bs);
    dst[i] |= w;
  }
}

// dst |= (src >> shift).
inline void or_shift_down(std::span<const std::uint64_t> src, std::size_t shift,
                          std::span<std::uint64_t> dst) noexcept {
  const std::size_t ws = shift / 64;
  const unsigned bs = static_cast<unsigned>(shift % 64);
  const std::size_t n = src.size();
  for (std::size_t i = 0; i + ws < n; ++i) {
    std::uint64_t w = src[i + ws] >> bs;
    if (bs != 0 && i + ws + 1 < n) w |= src[i + ws + 1] << (64 - bs);
    dst[i] |= w;
  }
}

// Circular rotation toward higher indices: out[(c + shift) % dim] = in[c].
// `out` must hold word_count(dim) words and is overwritten.
inline void rotate_words(std::span<const std::uint64_t> in, std::size_t dim, std::size_t shift,
                         std::span<std::uint64_t> out) noexcept {
  shift %= dim;
  std::fill(out.begin(), out.end(), 0);
  if (shift == 0) {
    std::copy(in.begin(), in.end(), out.begin());
    return;
  }
  or_shift_up(in, shift, out);
  or_shift_down(in, dim - shift, out);
  const std::size_t tail = dim % 64;
  if (tail != 0) out.back() &= (std::uint64_t{1} << tail) - 1;
}

}  // namespace detail

// Circular right rotation by (shifts mod D).
[[nodiscard]] inline Hypervector permute(const Hypervector& v, std::size_t shifts) {
  Hypervector out(v.dimension());
  detail::rotate_words(v.words(), v.dimension(), shifts, out.mutable_words());
  return out;
}

// Number of components where a and b disagree.
[[nodiscard]] inline std::size_t hamming_distance(const Hypervector& a, const Hypervector& b) {
  require_same_dimension(a, b);
  const auto wa = a.words();
  const auto wb = b.words();
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) mismatches += static_cast<std::size_t>(std::popcount(wa[i] ^ wb[i]));
  return mismatches;
}

// (matches - mismatches) / D, which is the exact cosine for bipolar vectors.
[[nodiscard]] inline double cosine(const Hypervector& a, const Hypervector& b) {
  const auto d = static_cast<double>(a.dimension());
  const auto mismatches = static_cast<double>(hamming_distance(a, b));
  return (d - 2.0 * mismatches) / d;
}

// Streaming component-wise majority vote.
//
// Keeps a bit-sliced counter of -1 votes per component: plane p holds bit p of
// every component's count, so adding a vector is a ripple-carry over
// O(log n) planes instead of D scalar increments.
class MajorityAccumulator {
 public:
  explicit MajorityAccumulator(std::size_t dimension)
      : dim_(dimension), words_(Hypervector::word_count(dimension)), scratch_(words_, 0) {
    if (dimension == 0) throw InvalidConfiguration("hypervector dimension must be >= 1");
  }

  [[nodiscard]] std::size_t dimension() const noexcept { return dim_; }
  [[nodiscard]] std::size_t count() const noexcept { return count_; }

  void add(const Hypervector& v) {
    check(v);
    add_words(v.words());
  }

  // Adds permute(v, shift) without materialising a Hypervector.
  void add_rotated(const Hypervector& v, std::size_t shift) {
    check(v);
    detail::rotate_words(v.words(), dim_, shift, scratch_);
    add_words(scratch_);
  }

  // Sign of the vote sum per component. A zero sum (even counts only)
  // resolves to +1, or to the matching component of `tie_breaker` when given.
  [[nodiscard]] Hypervector result(const Hypervector* tie_breaker = nullptr) const {
    if (count_ == 0) throw InvalidArgument("majority bundle of an empty sequence");
    if (tie_breaker != nullptr) check(*tie_breaker);
    // -1 wins iff (#-1 votes) > count/2, i.e. (#-1 votes) >= count/2 + 1.
    // need <= count < 2^planes, so the comparison below never overflows.
    const std::size_t need = count_ / 2 + 1;
    const bool ties_possible = tie_breaker != nullptr && count_ % 2 == 0;
    Hypervector out(dim_);
    auto dst = out.mutable_words();
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t word = at_least(w, need);
      if (ties_possible) word |= equal_to(w, count_ / 2) & tie_breaker->words()[w];
      dst[w] = word;
    }
    out.clear_padding();
    return out;
  }

 private:
  void check(const Hypervector& v) const {
    if (v.dimension() != dim_) {
      throw InvalidArgument("hypervector dimension mismatch: " + std::to_string(v.dimension()) +
                            " vs " + std::to_string(dim_));
    }
  }

  // Components of word w whose -1 count is >= c (bit-sliced, MSB first).
  [[nodiscard]] std::uint64_t at_least(std::size_t w, std::size_t c) const noexcept {
    std::uint64_t gt = 0;
    std::uint64_t eq = ~std::uint64_t{0};
    for (std::size_t p = planes_.size(); p-- > 0;) {
      const std::uint64_t plane = planes_[p][w];
      if ((c >> p) & 1U) {
        eq &= plane;
      } else {
        gt |= eq & plane;
        eq &= ~plane;
      }
    }
    return gt | eq;
  }

  [[nodiscard]] std::uint64_t equal_to(std::size_t w, std::size_t c) const noexcept {
    std::uint64_t eq = ~std::uint64_t{0};
    for (std::size_t p = 0; p < planes_.size(); ++p) eq &= ((c >> p) & 1U) ? planes_[p][w] : ~planes_[p][w];
    return eq;
  }

  void add_words(std::span<const std::uint64_t> src) {
    ++count_;
    if ((count_ >> planes_.size()) != 0) planes_.emplace_back(words_, 0);
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t carry = src[w];
      for (std::size_t p = 0; carry != 0 && p < planes_.size(); ++p) {
        const std::uint64_t cur = planes_[p][w];
        planes_[p][w] = cur ^ carry;
        carry &= cur;
      }
    }
  }

  std::size_t dim_;
  std::size_t words_;
  std::size_t count_ = 0;
  std::vector<std::vector<std::uint64_t>> planes_;
  std::vector<std::uint64_t> scratch_;
};

// Component-wise majority; ties resolve to +1 unless a tie-breaker is given.
[[nodiscard]] inline Hypervector majority_bundle(std::span<const Hypervector> vs,
                                                 const Hypervector* tie_breaker = nullptr) {
  if (vs.empty()) throw InvalidArgument("majority bundle of an empty sequence");
  MajorityAccumulator acc(vs.front().dimension());
  for (const auto& v : vs) acc.add(v);
  return acc.result(tie_breaker);
}

}  // namespace hyperseg
