// Internal per-state kernel driver shared by model and semantics code.
//
// Parallel and serial paths run the exact same per-word loop; tests assert
// bit-identical results between the two policies.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>

#include "dglsc/model.hpp"

namespace dglsc::detail {

// Builds { i < n | pred(i) }. pred must be safe to call concurrently.
template <class Pred>
StateSet buildSet(ExecPolicy pol, uint64_t n, Pred&& pred) {
  StateSet out = StateSet::empty(n);
  const int64_t nw = static_cast<int64_t>(out.wordCount());
  auto oneWord = [&](int64_t w) {
    const uint64_t base = static_cast<uint64_t>(w) * 64;
    const uint64_t lim = std::min<uint64_t>(64, n - base);
    uint64_t bits = 0;
    for (uint64_t j = 0; j < lim; ++j) {
      if (pred(base + j)) bits |= uint64_t(1) << j;
    }
    out.setWord(static_cast<uint64_t>(w), bits);
  };
  if (pol == ExecPolicy::Parallel) {
    std::atomic<bool> failed{false};
    std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(static)
    for (int64_t w = 0; w < nw; ++w) {
      if (failed.load(std::memory_order_relaxed)) continue;
      try {
        oneWord(w);
      } catch (...) {
#pragma omp critical(dglsc_buildset_err)
        {
          if (!failed.exchange(true)) err = std::current_exception();
        }
      }
    }
    if (err) std::rethrow_exception(err);
  } else {
    for (int64_t w = 0; w < nw; ++w) oneWord(w);
  }
  return out;
}

// Runs body(i) for i in [0, n), parallel or serial, propagating the first
// exception. Writes inside body must go to disjoint slots.
template <class Body>
void forEachIndex(ExecPolicy pol, uint64_t n, Body&& body) {
  const int64_t ni = static_cast<int64_t>(n);
  if (pol == ExecPolicy::Parallel) {
    std::atomic<bool> failed{false};
    std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < ni; ++i) {
      if (failed.load(std::memory_order_relaxed)) continue;
      try {
        body(static_cast<uint64_t>(i));
      } catch (...) {
#pragma omp critical(dglsc_foreach_err)
        {
          if (!failed.exchange(true)) err = std::current_exception();
        }
      }
    }
    if (err) std::rethrow_exception(err);
  } else {
    for (int64_t i = 0; i < ni; ++i) body(static_cast<uint64_t>(i));
  }
}

}  // namespace dglsc::detail
