#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gibc
{

// Runs fn(i) for i in [0, n) on up to `threads` threads with a static block partition.
// Each index is processed exactly once, so results written per index do not depend on
// the thread count. The first exception thrown by any worker is rethrown.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn &&fn)
{
  const std::size_t t = std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
  if (t <= 1)
  {
    for (std::size_t i = 0; i < n; ++i)
    {
      fn(i);
    }
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t);
  std::exception_ptr error;
  std::mutex error_mutex;
  for (std::size_t w = 0; w < t; ++w)
  {
    pool.emplace_back([&, w] {
      const std::size_t lo = n * w / t, hi = n * (w + 1) / t;
      try
      {
        for (std::size_t i = lo; i < hi; ++i)
        {
          fn(i);
        }
      }
      catch (...)
      {
        std::lock_guard lock(error_mutex);
        if (!error)
        {
          error = std::current_exception();
        }
      }
    });
  }
  for (auto &th : pool)
  {
    th.join();
  }
  if (error)
  {
    std::rethrow_exception(error);
  }
}

}  // namespace gibc
