#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace lrk {

/// Worker count used when a call does not specify one. Initialized from
/// std::thread::hardware_concurrency(); the CLI's --threads overrides it.
unsigned default_threads() noexcept;
void set_default_threads(unsigned n) noexcept;

/// Runs body(i) for i in [0, n). Work items are claimed dynamically, so
/// body must write only to per-index state. threads == 0 means default.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned threads = 0);

/// Pairwise reduction whose combination tree depends only on the number
/// of parts, never on scheduling.
template <class T, class Combine>
T tree_reduce(std::vector<T> parts, Combine&& combine) {
  if (parts.empty()) return T{};
  while (parts.size() > 1) {
    std::vector<T> next;
    next.reserve((parts.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2)
      next.push_back(combine(std::move(parts[i]), std::move(parts[i + 1])));
    if (parts.size() % 2 == 1) next.push_back(std::move(parts.back()));
    parts = std::move(next);
  }
  return std::move(parts.front());
}

}  // namespace lrk
