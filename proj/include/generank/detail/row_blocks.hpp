#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace generank {

template <typename Body>
void for_each_row_block(std::size_t n, const Execution& exec, Body&& body) {
  // Small problems are not worth a thread launch.
  constexpr std::size_t kMinRowsPerThread = 16384;
  const std::size_t wanted = std::max<unsigned>(exec.threads, 1);
  const std::size_t threads = std::min(wanted, std::max<std::size_t>(n / kMinRowsPerThread, 1));
  if (threads <= 1) {
    body(std::size_t{0}, n);
    return;
  }
  const std::size_t chunk = (n + threads - 1) / threads;
  std::vector<std::jthread> workers;
  workers.reserve(threads - 1);
  for (std::size_t t = 1; t < threads; ++t) {
    const std::size_t begin = std::min(n, t * chunk);
    const std::size_t end = std::min(n, begin + chunk);
    workers.emplace_back([&body, begin, end] { body(begin, end); });
  }
  body(std::size_t{0}, std::min(n, chunk));
}

}  // namespace generank
