#ifndef COLLAPSELAB_PARALLEL_HPP_
#define COLLAPSELAB_PARALLEL_HPP_

// Static-partition parallel loop. Every index writes only its own output
// slot, so results do not depend on the thread count.

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace collapselab {

  //! Worker count from COLLAPSELAB_THREADS (default: hardware concurrency).
  inline std::size_t thread_count() {
    if (char const* env = std::getenv("COLLAPSELAB_THREADS")) {
      try {
        long v = std::stol(env);
        if (v >= 1) {
          return static_cast<std::size_t>(v);
        }
      } catch (...) {
      }
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
  }

  namespace detail {
    //! Set inside workers; nested loops then run serially.
    inline thread_local bool in_parallel_region = false;
  }  // namespace detail

  template <class F>
  void parallel_for(std::size_t n, F&& body) {
    std::size_t const workers = std::min(thread_count(), n);
    if (workers <= 1 || n < 64 || detail::in_parallel_region) {
      for (std::size_t i = 0; i < n; ++i) {
        body(i);
      }
      return;
    }
    std::vector<std::thread>        pool;
    std::vector<std::exception_ptr> errors(workers);
    std::size_t const               chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        detail::in_parallel_region = true;
        try {
          std::size_t const end = std::min(n, (w + 1) * chunk);
          for (std::size_t i = w * chunk; i < end; ++i) {
            body(i);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) {
      t.join();
    }
    for (auto const& e : errors) {
      if (e) {
        std::rethrow_exception(e);
      }
    }
  }

}  // namespace collapselab

#endif  // COLLAPSELAB_PARALLEL_HPP_
