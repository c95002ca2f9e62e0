#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <thread>
#include <vector>

// Deterministic tiled parallelism: work is split into fixed tiles by
// sample index, tiles run on any number of workers, and partial results
// are merged in tile order. Outputs are therefore identical for 1..N
// workers.

namespace catseye {

struct ExecPolicy {
  unsigned workers = 0;  // 0 = hardware concurrency

  unsigned resolved_workers() const {
    if (workers > 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
  }
};

/// Kahan compensated accumulator.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

inline constexpr std::size_t kDefaultTileSize = 4096;

// Runs per_tile(begin, end) over [0, count) in tiles of tile_size and
// merges the results in ascending tile order via merge(acc, tile_result).
template <typename R, typename PerTile, typename Merge>
R run_tiled(std::size_t count, std::size_t tile_size, const ExecPolicy& policy,
            PerTile per_tile, Merge merge) {
  const std::size_t n_tiles = count == 0 ? 0 : (count + tile_size - 1) / tile_size;
  std::vector<R> partial(n_tiles);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(policy.resolved_workers(),
                                                  n_tiles == 0 ? 1 : n_tiles));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n_tiles; ++i) {
      const std::size_t b = i * tile_size;
      partial[i] = per_tile(b, std::min(count, b + tile_size));
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= n_tiles) break;
          const std::size_t b = i * tile_size;
          partial[i] = per_tile(b, std::min(count, b + tile_size));
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  R acc{};
  for (std::size_t i = 0; i < n_tiles; ++i) merge(acc, partial[i]);
  return acc;
}

}  // namespace catseye
