#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace pushbutton {

template <typename Body>
void parallel_chunks(std::size_t count, unsigned workers, Body&& body) {
  if (workers <= 1 || count < 2) {
    body(std::size_t{0}, count);
    return;
  }
  const std::size_t n = std::min<std::size_t>(workers, count);
  const std::size_t chunk = (count + n - 1) / n;
  std::vector<std::jthread> threads;
  threads.reserve(n);
  for (std::size_t w = 0; w < n; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&body, begin, end] { body(begin, end); });
  }
}

}  // namespace pushbutton
