#include "gbica/rank_tracker.hpp"

#include <ext/pb_ds/assoc_container.hpp>
#include <ext/pb_ds/tree_policy.hpp>
#include <stdexcept>

namespace gbica {

namespace {

void fenwick_add(std::vector<int64_t>& t, std::size_t i, int64_t delta) {
  for (++i; i < t.size(); i += i & (~i + 1)) t[i] += delta;
}

int64_t fenwick_prefix(const std::vector<int64_t>& t, std::size_t n) {  // sum of [0, n)
  int64_t s = 0;
  for (std::size_t i = std::min(n, t.size() - 1); i > 0; i -= i & (~i + 1)) s += t[i];
  return s;
}

// Smallest index i with prefix(i + 1) > r; the remainder goes to r.
std::size_t fenwick_search(const std::vector<int64_t>& t, int64_t& r) {
  std::size_t pos = 0;
  std::size_t step = 1;
  while (step * 2 < t.size()) step *= 2;
  for (; step > 0; step /= 2) {
    if (pos + step < t.size() && t[pos + step] <= r) {
      pos += step;
      r -= t[pos];
    }
  }
  return pos;
}

std::vector<int64_t> fenwick_build(const std::vector<int64_t>& values) {
  std::vector<int64_t> t(values.size() + 1, 0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    t[i + 1] += values[i];
    std::size_t j = (i + 1) + ((i + 1) & (~(i + 1) + 1));
    if (j < t.size()) t[j] += t[i + 1];
  }
  return t;
}

}  // namespace

struct RankTracker::Group {
  __gnu_pbds::tree<uint32_t, __gnu_pbds::null_type, std::less<uint32_t>, __gnu_pbds::rb_tree_tag,
                   __gnu_pbds::tree_order_statistics_node_update>
      members;
};

RankTracker::RankTracker(std::size_t m) : m_(m), counts_(m, 0) {
  if (m == 0 || m > (std::size_t{1} << 31)) throw std::invalid_argument("rank tracker: alphabet size out of range");
  unseen_tree_ = fenwick_build(std::vector<int64_t>(m, 1));
  sizes_.assign(64, 0);
  sizes_[0] = m;
  std::vector<int64_t> v(sizes_.begin(), sizes_.end());
  size_tree_ = fenwick_build(v);
}

RankTracker::~RankTracker() = default;
RankTracker::RankTracker(RankTracker&&) noexcept = default;
RankTracker& RankTracker::operator=(RankTracker&&) noexcept = default;

void RankTracker::grow(uint64_t needed) {
  if (needed < sizes_.size()) return;
  std::size_t cap = sizes_.size();
  while (cap <= needed) cap *= 2;
  sizes_.resize(cap, 0);
  std::vector<int64_t> v(sizes_.begin(), sizes_.end());
  size_tree_ = fenwick_build(v);
}

uint64_t RankTracker::groups_below(uint64_t c) const {
  return static_cast<uint64_t>(fenwick_prefix(size_tree_, static_cast<std::size_t>(c)));
}

RankTracker::Group& RankTracker::group(uint64_t c) {
  auto& g = groups_[c];
  if (!g) g = std::make_unique<Group>();
  return *g;
}

uint32_t RankTracker::rank(uint32_t x) const {
  if (x >= m_) throw std::out_of_range("rank tracker: symbol out of range");
  uint64_t c = counts_[x];
  uint64_t within = c == 0 ? static_cast<uint64_t>(fenwick_prefix(unseen_tree_, x))
                           : groups_.at(c)->members.order_of_key(x);
  return static_cast<uint32_t>(groups_below(c) + within);
}

uint32_t RankTracker::select(uint32_t r) const {
  if (r >= m_) throw std::out_of_range("rank tracker: rank out of range");
  int64_t rem = r;
  uint64_t c = fenwick_search(size_tree_, rem);
  if (c == 0) {
    int64_t k = rem;
    return static_cast<uint32_t>(fenwick_search(unseen_tree_, k));
  }
  return *groups_.at(c)->members.find_by_order(static_cast<std::size_t>(rem));
}

void RankTracker::update(uint32_t x) {
  if (x >= m_) throw std::out_of_range("rank tracker: symbol out of range");
  uint64_t c = counts_[x];
  grow(c + 1);
  if (c == 0) {
    fenwick_add(unseen_tree_, x, -1);
  } else {
    auto it = groups_.find(c);
    it->second->members.erase(x);
    if (it->second->members.empty()) groups_.erase(it);
  }
  group(c + 1).members.insert(x);
  --sizes_[c];
  ++sizes_[c + 1];
  fenwick_add(size_tree_, c, -1);
  fenwick_add(size_tree_, c + 1, 1);
  counts_[x] = c + 1;
}

}  // namespace gbica
