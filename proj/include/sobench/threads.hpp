#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace sobench {

int thread_count();
void set_thread_count(int n);

/// Splits [0, n) into fixed-size chunks and runs `body(chunk_index, begin,
/// end)` across a worker pool. Chunk boundaries depend only on n, so any
/// per-chunk partial results combined in chunk order give the same answer
/// regardless of how many threads actually ran.
inline void parallel_chunks(std::size_t n, std::size_t chunk,
                            const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  if (chunk == 0) chunk = 1;
  const std::size_t n_chunks = (n + chunk - 1) / chunk;
  const int workers = std::max(1, std::min<int>(thread_count(), static_cast<int>(n_chunks)));

  if (workers == 1) {
    for (std::size_t c = 0; c < n_chunks; ++c)
      body(c, c * chunk, std::min(n, (c + 1) * chunk));
    return;
  }

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t c = static_cast<std::size_t>(w); c < n_chunks;
           c += static_cast<std::size_t>(workers))
        body(c, c * chunk, std::min(n, (c + 1) * chunk));
    });
  }
  for (auto& t : pool) t.join();
}

/// Chunked parallel sum with a deterministic reduction tree: per-chunk sums
/// are accumulated in chunk order.
inline double parallel_sum(std::size_t n, std::size_t chunk,
                           const std::function<double(std::size_t)>& term) {
  if (n == 0) return 0.0;
  if (chunk == 0) chunk = 1;
  const std::size_t n_chunks = (n + chunk - 1) / chunk;
  std::vector<double> partial(n_chunks, 0.0);
  parallel_chunks(n, chunk, [&](std::size_t c, std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) s += term(i);
    partial[c] = s;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace sobench
