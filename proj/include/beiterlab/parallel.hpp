#pragma once

// Worker pools whose results never depend on completion order.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

namespace beiterlab {

/// BEITERLAB_JOBS if set to a positive integer, else the hardware concurrency.
inline unsigned default_jobs() {
  if (const char* env = std::getenv("BEITERLAB_JOBS")) {
    try {
      long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace detail {

// Runs body(worker) on `jobs` threads (inline when jobs == 1) and rethrows the
// first captured exception.
template <class Body>
void run_workers(unsigned jobs, Body&& body) {
  if (jobs <= 1) {
    body();
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (unsigned w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      try {
        body();
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

/// Evaluates fn(i) for i in [0, count) and returns the results in index order.
template <class Fn>
auto parallel_map(std::size_t count, unsigned jobs, Fn&& fn) {
  using R = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<std::optional<R>> slots(count);
  std::atomic<std::size_t> next{0};
  detail::run_workers(std::min<std::size_t>(jobs, count), [&] {
    for (std::size_t i = next++; i < count; i = next++) slots[i].emplace(fn(i));
  });
  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// Smallest index i in [0, count) for which fn(i) yields a value, with that
/// value. Indices are claimed in increasing order and claiming stops past the
/// best hit, so the answer is the same for every job count.
template <class Fn>
auto parallel_find_first(std::size_t count, unsigned jobs, Fn&& fn)
    -> std::optional<std::pair<std::size_t, typename std::invoke_result_t<Fn&, std::size_t>::value_type>> {
  using V = typename std::invoke_result_t<Fn&, std::size_t>::value_type;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best{std::numeric_limits<std::size_t>::max()};
  std::mutex m;
  std::optional<std::pair<std::size_t, V>> found;
  detail::run_workers(std::min<std::size_t>(jobs, count), [&] {
    for (std::size_t i = next++; i < count && i < best.load(); i = next++) {
      auto r = fn(i);
      if (!r) continue;
      std::lock_guard lock(m);
      if (!found || i < found->first) {
        found.emplace(i, std::move(*r));
        best = i;
      }
    }
  });
  return found;
}

}  // namespace beiterlab
