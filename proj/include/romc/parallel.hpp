// Copyright 2026 The romc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ROMC_PARALLEL_HPP
#define ROMC_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

/**
 * \file
 * \brief Bounded worker pool over independent tasks keyed by index.
 *
 * Each task receives only its index and returns a value; results are stored
 * in the slot of that index, so the output never depends on scheduling.
 */

namespace romc {

template <class T>
struct TaskOutcome {
  std::optional<T> value;
  std::string error;

  [[nodiscard]] bool ok() const noexcept { return value.has_value(); }
};

/// Number of hardware threads (at least 1).
[[nodiscard]] inline std::size_t available_cores() {
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

inline constexpr std::size_t kMaxWorkers = 256;

/// 0 means all cores; explicit requests are honored up to kMaxWorkers.
[[nodiscard]] inline std::size_t resolve_workers(std::size_t requested) {
  return requested == 0 ? available_cores() : std::min(requested, kMaxWorkers);
}

/// Runs fn(0), ..., fn(count - 1) on up to `workers` threads. An exception
/// thrown by a task is recorded in that task's outcome; the others still run.
template <class Fn>
[[nodiscard]] auto run_tasks(std::size_t count, std::size_t workers, Fn&& fn)
    -> std::vector<TaskOutcome<std::invoke_result_t<Fn&, std::size_t>>> {
  using Result = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<TaskOutcome<Result>> outcomes(count);
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        outcomes[i].value.emplace(fn(i));
      } catch (const std::exception& e) {
        outcomes[i].error = e.what();
      } catch (...) {
        outcomes[i].error = "unknown error";
      }
    }
  };

  const std::size_t threads = std::min(resolve_workers(workers), std::max<std::size_t>(count, 1));
  if (threads <= 1) {
    worker();
    return outcomes;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads - 1);
  for (std::size_t t = 1; t < threads; ++t) {
    pool.emplace_back(worker);
  }
  worker();
  pool.clear();
  return outcomes;
}

}  // namespace romc

#endif
