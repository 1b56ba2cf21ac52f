#include "riskeysim/util.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace riskeysim {

void parallel_for_blocks(std::int64_t n, int n_threads, std::int64_t block,
                         const std::function<void(std::int64_t, std::int64_t)>& fn) {
  if (n <= 0) return;
  if (block <= 0) block = 1;
  const std::int64_t n_blocks = (n + block - 1) / block;
  if (n_threads <= 1 || n_blocks <= 1) {
    for (std::int64_t b = 0; b < n_blocks; ++b)
      fn(b * block, std::min(n, (b + 1) * block));
    return;
  }
  std::atomic<std::int64_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::int64_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      fn(b * block, std::min(n, (b + 1) * block));
    }
  };
  std::vector<std::thread> pool;
  const int k = static_cast<int>(std::min<std::int64_t>(n_threads, n_blocks));
  pool.reserve(k);
  for (int t = 0; t < k; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace riskeysim
