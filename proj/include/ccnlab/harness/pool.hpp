#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "ccnlab/core/error.hpp"

namespace ccnlab {

inline constexpr const char* kWorkersEnv = "CCNLAB_WORKERS";

/// Worker count from CCNLAB_WORKERS, else the hardware concurrency.
inline int worker_count() {
  if (const char* env = std::getenv(kWorkersEnv)) {
    try {
      const int n = std::stoi(env);
      require(n >= 1, std::string(kWorkersEnv) + " must be a positive integer");
      return n;
    } catch (const std::logic_error&) {
      throw Error(std::string(kWorkersEnv) + "='" + env + "' is not a positive integer");
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs task(i) for i in [0, n) on up to `workers` threads. Tasks must not
/// throw; callers record failures themselves.
inline void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& task) {
  const auto threads = static_cast<std::size_t>(std::max(1, std::min<int>(workers, static_cast<int>(n))));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) task(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace ccnlab
