#pragma once

// Order-permutation ranks of a growing count table. Symbols are ranked by
// ascending (count, index); rank r of symbol x is the codeword it maps to.

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

namespace gbica {

class RankTracker {
 public:
  explicit RankTracker(std::size_t m);
  ~RankTracker();
  RankTracker(RankTracker&&) noexcept;
  RankTracker& operator=(RankTracker&&) noexcept;

  std::size_t size() const { return m_; }
  uint64_t count(uint32_t x) const { return counts_[x]; }
  uint32_t rank(uint32_t x) const;
  uint32_t select(uint32_t r) const;
  void update(uint32_t x);

 private:
  struct Group;
  void grow(uint64_t needed);
  uint64_t groups_below(uint64_t c) const;  // symbols with count < c
  Group& group(uint64_t c);

  std::size_t m_;
  std::vector<uint64_t> counts_;
  std::vector<int64_t> unseen_tree_;  // Fenwick indicator over symbols with count 0
  std::vector<int64_t> size_tree_;    // Fenwick over count values: group sizes
  std::vector<uint64_t> sizes_;
  std::unordered_map<uint64_t, std::unique_ptr<Group>> groups_;
};

}  // namespace gbica
