#pragma once

// Utterance text -> token stream, at word or character n-gram granularity.
//
// Normalisation, per whitespace-delimited chunk: simple lowercase, then strip
// leading and trailing ASCII punctuation. Interior punctuation is kept, so
// "don't" stays one token. Stopwords are removed in word mode only.

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "hyperseg/error.hpp"
#include "hyperseg/stopwords.hpp"

namespace hyperseg {

namespace utf8 {

inline constexpr char32_t kReplacement = 0xFFFD;

// Decodes UTF-8; malformed sequences become U+FFFD.
[[nodiscard]] inline std::u32string decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      len = 1, cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2, cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3, cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4, cp = b0 & 0x07;
    } else {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    if (i + len > s.size()) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    bool ok = true;
    for (std::size_t k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    static constexpr char32_t kMinForLength[] = {0, 0, 0x80, 0x800, 0x10000};
    if (!ok || cp < kMinForLength[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

inline void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

[[nodiscard]] inline std::string encode(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : s) append(out, cp);
  return out;
}

}  // namespace utf8

namespace detail {

[[nodiscard]] constexpr bool is_space(char32_t c) noexcept {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' || c == U'\v' ||
         c == 0x00A0 || c == 0x1680 || (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 ||
         c == 0x202F || c == 0x205F || c == 0x3000;
}

[[nodiscard]] constexpr bool is_ascii_punct(char32_t c) noexcept {
  return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
         (c >= 0x7B && c <= 0x7E);
}

// Simple one-to-one lowercase for ASCII, Latin-1, Greek and Cyrillic capitals.
[[nodiscard]] constexpr char32_t to_lower(char32_t c) noexcept {
  if (c >= U'A' && c <= U'Z') return c + 0x20;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 0x20;
  if (c >= 0x410 && c <= 0x42F) return c + 0x20;
  if (c >= 0x400 && c <= 0x40F) return c + 0x50;
  return c;
}

}  // namespace detail

enum class Granularity { word, char_ngram };

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
};

using StopwordSet = std::unordered_set<std::string, StringHash, std::equal_to<>>;

[[nodiscard]] inline StopwordSet default_stopwords() {
  StopwordSet out;
  for (auto w : kEnglishStopwords) out.emplace(w);
  return out;
}

// One token per line; blank lines and surrounding whitespace ignored.
[[nodiscard]] inline StopwordSet load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stopword list: " + path);
  StopwordSet out;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    out.emplace(line.substr(first, last - first + 1));
  }
  return out;
}

struct TokenizerConfig {
  Granularity granularity = Granularity::word;
  std::size_t ngram = 3;
  bool lowercase = true;
  bool strip_punctuation = true;
  StopwordSet stopwords = default_stopwords();

  static TokenizerConfig words() { return {}; }

  static TokenizerConfig char_ngrams(std::size_t n = 3) {
    TokenizerConfig cfg;
    cfg.granularity = Granularity::char_ngram;
    cfg.ngram = n;
    return cfg;
  }

  void validate() const {
    if (granularity == Granularity::char_ngram && ngram == 0) {
      throw InvalidConfiguration("character n-gram size must be >= 1");
    }
  }
};

// Lowercased, punctuation-stripped chunks in order; empty chunks dropped.
[[nodiscard]] inline std::vector<std::u32string> normalized_chunks(std::string_view text,
                                                                   const TokenizerConfig& cfg) {
  const std::u32string cps = utf8::decode(text);
  std::vector<std::u32string> chunks;
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && detail::is_space(cps[i])) ++i;
    std::size_t j = i;
    while (j < cps.size() && !detail::is_space(cps[j])) ++j;
    std::size_t b = i;
    std::size_t e = j;
    if (cfg.strip_punctuation) {
      while (b < e && detail::is_ascii_punct(cps[b])) ++b;
      while (e > b && detail::is_ascii_punct(cps[e - 1])) --e;
    }
    if (b < e) {
      std::u32string chunk(cps.begin() + static_cast<std::ptrdiff_t>(b), cps.begin() + static_cast<std::ptrdiff_t>(e));
      if (cfg.lowercase) {
        for (auto& c : chunk) c = detail::to_lower(c);
      }
      chunks.push_back(std::move(chunk));
    }
    i = j;
  }
  return chunks;
}

[[nodiscard]] inline std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& cfg) {
  cfg.validate();
  const auto chunks = normalized_chunks(text, cfg);
  std::vector<std::string> tokens;
  if (cfg.granularity == Granularity::word) {
    tokens.reserve(chunks.size());
    for (const auto& chunk : chunks) {
      std::string tok = utf8::encode(chunk);
      if (!cfg.stopwords.contains(std::string_view(tok))) tokens.push_back(std::move(tok));
    }
    return tokens;
  }

  std::u32string joined;
  for (const auto& chunk : chunks) {
    if (!joined.empty()) joined.push_back(U' ');
    joined += chunk;
  }
  const std::size_t n = cfg.ngram;
  if (joined.size() < n) return tokens;
  tokens.reserve(joined.size() - n + 1);
  for (std::size_t k = 0; k + n <= joined.size(); ++k) {
    tokens.push_back(utf8::encode(std::u32string_view(joined).substr(k, n)));
  }
  return tokens;
}

}  // namespace hyperseg
