#include "gbica/word_frequencies.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

namespace gbica {

WordTable ingest_word_frequencies(std::istream& in, int d) {
  if (d < 1 || d > 24) throw std::invalid_argument("word list: d must be in [1, 24]");
  std::vector<std::string> order;
  std::vector<uint64_t> totals;
  std::unordered_map<std::string, std::size_t> index;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    auto bad = [&](const char* why) {
      return std::invalid_argument("word list line " + std::to_string(lineno) + ": " + why);
    };
    if (tab == std::string::npos || tab == 0) throw bad("expected word<TAB>count");
    std::string word = line.substr(0, tab);
    const char* first = line.data() + tab + 1;
    const char* last = line.data() + line.size();
    uint64_t count = 0;
    auto [ptr, ec] = std::from_chars(first, last, count);
    if (ec != std::errc() || ptr != last || first == last) throw bad("count is not a non-negative integer");
    auto [it, inserted] = index.emplace(word, order.size());
    if (inserted) {
      order.push_back(word);
      totals.push_back(0);
    }
    totals[it->second] += count;
  }
  if (order.empty()) throw std::invalid_argument("word list is empty");

  std::vector<std::size_t> rank(order.size());
  for (std::size_t i = 0; i < rank.size(); ++i) rank[i] = i;
  std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) { return totals[a] > totals[b]; });

  std::size_t m = std::size_t{1} << d;
  std::vector<double> w(m, 0.0);
  WordTable t;
  for (std::size_t i = 0; i < rank.size(); ++i) {
    std::size_t s = std::min(i, m - 1);
    w[s] += static_cast<double>(totals[rank[i]]);
    if (i < m) t.words.push_back(order[rank[i]]);
  }
  t.dist = JointDistribution::from_weights(w);
  return t;
}

WordTable ingest_word_frequencies(const std::string& path, int d) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open word list '" + path + "'");
  return ingest_word_frequencies(in, d);
}

void write_symbol_map(std::ostream& out, const WordTable& table) {
  for (std::size_t s = 0; s < table.words.size(); ++s) out << s << '\t' << table.words[s] << '\n';
}

}  // namespace gbica
