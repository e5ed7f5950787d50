// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace koop
{

/// Worker count: hardware concurrency capped by the KOOP_THREADS environment
/// variable when it is set to a positive integer.
inline unsigned worker_count()
{
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char *env = std::getenv("KOOP_THREADS"))
  {
    try
    {
      const long cap = std::stol(env);
      if (cap > 0)
      {
        n = std::min(n, static_cast<unsigned>(cap));
      }
    }
    catch (const std::exception &)
    {
    }
  }
  return n;
}

/// Runs fn(i) for i in [0, count) over a static partition of the index range.
/// Each index is visited exactly once; the first exception thrown is
/// rethrown on the calling thread.
template <typename Fn>
void parallel_for(std::size_t count, Fn &&fn)
{
  const std::size_t workers = std::min<std::size_t>(worker_count(), count);
  if (workers <= 1)
  {
    for (std::size_t i = 0; i < count; ++i)
    {
      fn(i);
    }
    return;
  }
  std::exception_ptr first_error;
  std::mutex mtx;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
  {
    pool.emplace_back(
      [&, w]
      {
        try
        {
          for (std::size_t i = w; i < count; i += workers)
          {
            fn(i);
          }
        }
        catch (...)
        {
          std::lock_guard<std::mutex> lock(mtx);
          if (!first_error)
          {
            first_error = std::current_exception();
          }
        }
      });
  }
  for (auto &t : pool)
  {
    t.join();
  }
  if (first_error)
  {
    std::rethrow_exception(first_error);
  }
}

}  // namespace koop
