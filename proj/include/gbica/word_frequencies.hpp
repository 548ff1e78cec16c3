#pragma once

// Word-frequency lists ("word<TAB>count" per line) as d-bit symbol sources.

#include <iosfwd>
#include <string>
#include <vector>

#include "gbica/prob_model.hpp"

namespace gbica {

struct WordTable {
  JointDistribution dist;          // over 2^d symbols
  std::vector<std::string> words;  // words[s] for each listed symbol s
};

/// Top 2^d words by count take symbols 0, 1, ... in descending frequency (ties
/// keep first appearance); the remaining mass is folded into the last symbol.
/// Duplicate words are summed. Malformed lines raise std::invalid_argument
/// naming the line number.
WordTable ingest_word_frequencies(std::istream& in, int d);
WordTable ingest_word_frequencies(const std::string& path, int d);

/// "symbol<TAB>word" lines.
void write_symbol_map(std::ostream& out, const WordTable& table);

}  // namespace gbica
