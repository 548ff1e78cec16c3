#include "gbica/common.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace gbica {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = uniform_open_low();
  double v = uniform();
  double r = std::sqrt(-2.0 * std::log(u));
  double theta = 2.0 * M_PI * v;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

uint64_t Rng::below(uint64_t n) {
  if (n <= 1) return 0;
  // Lemire-style rejection keeps the draw unbiased.
  uint64_t threshold = (0 - n) % n;
  for (;;) {
    uint64_t x = engine_();
    if (x >= threshold) return x % n;
  }
}

uint64_t derive_seed(uint64_t master, uint64_t index) {
  uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

unsigned thread_count() {
  if (const char* env = std::getenv("GBICA_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  unsigned workers = std::min<std::size_t>(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n || failed.load()) return;
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

double entropy_of_counts(std::span<const uint64_t> counts, uint64_t total) {
  if (total == 0) return 0.0;
  CompensatedSum s;
  double inv = 1.0 / static_cast<double>(total);
  for (uint64_t c : counts)
    if (c) s.add(entropy_term(static_cast<double>(c) * inv));
  return s.value();
}

int exact_log2(uint64_t x) {
  if (!is_power_of_two(x)) throw std::invalid_argument("value is not a power of two: " + std::to_string(x));
  int d = 0;
  while ((uint64_t{1} << d) < x) ++d;
  return d;
}

int bits_for(uint64_t m) {
  int b = 0;
  while (b < 64 && (uint64_t{1} << b) < m) ++b;
  return b;
}

}  // namespace gbica
