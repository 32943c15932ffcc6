#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hyperseg/error.hpp"

namespace hyperseg {

// Boundary index j everywhere means "boundary after utterance j".
using BoundarySet = std::vector<std::size_t>;

// Throws ValidationError unless `boundaries` is strictly increasing within
// [0, utterances - 2]. `what` names the owner in the message.
inline void validate_boundaries(const BoundarySet& boundaries, std::size_t utterances, const std::string& what) {
  for (std::size_t k = 0; k < boundaries.size(); ++k) {
    const std::size_t b = boundaries[k];
    if (utterances < 2 || b > utterances - 2) {
      throw ValidationError(what + ": boundary " + std::to_string(b) + " out of range for " +
                            std::to_string(utterances) + " utterances");
    }
    if (k > 0 && boundaries[k - 1] >= b) {
      throw ValidationError(what + ": boundaries must be strictly increasing");
    }
  }
}

struct Transcript {
  std::string id;
  std::vector<std::string> utterances;
  std::optional<BoundarySet> gold_boundaries;
  std::map<std::string, std::string> meta;

  [[nodiscard]] std::size_t size() const noexcept { return utterances.size(); }

  void validate() const {
    if (gold_boundaries) validate_boundaries(*gold_boundaries, utterances.size(), "document '" + id + "'");
  }

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

}  // namespace hyperseg
