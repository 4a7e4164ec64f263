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

#include <doctest.h>

#include <atomic>
#include <stdexcept>
#include <string>
#include <vector>

#include <romc/parallel.hpp>

using namespace romc;

TEST_CASE("results land in the slot of their index regardless of worker count") {
  for (const std::size_t workers : {1u, 2u, 4u, 0u}) {
    const auto out = run_tasks(100, workers, [](std::size_t i) { return static_cast<int>(i * i); });
    REQUIRE(out.size() == 100);
    for (std::size_t i = 0; i < out.size(); ++i) {
      REQUIRE(out[i].ok());
      CHECK(*out[i].value == static_cast<int>(i * i));
    }
  }
}

TEST_CASE("a failing task is isolated and reports its error") {
  const auto out = run_tasks(10, 3, [](std::size_t i) -> double {
    if (i == 4) {
      throw std::runtime_error("boom");
    }
    return static_cast<double>(i);
  });
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i == 4) {
      CHECK_FALSE(out[i].ok());
      CHECK(out[i].error == "boom");
    } else {
      CHECK(out[i].ok());
      CHECK(out[i].error.empty());
    }
  }
}

TEST_CASE("every task runs exactly once") {
  std::vector<std::atomic<int>> hits(257);
  const auto out = run_tasks(hits.size(), 4, [&](std::size_t i) {
    hits[i].fetch_add(1);
    return 0;
  });
  CHECK(out.size() == hits.size());
  for (const auto& h : hits) {
    CHECK(h.load() == 1);
  }
}

TEST_CASE("zero tasks and worker resolution") {
  CHECK(run_tasks(0, 4, [](std::size_t) { return 1; }).empty());
  CHECK(available_cores() >= 1);
  CHECK(resolve_workers(0) == available_cores());
  CHECK(resolve_workers(1) == 1);
  CHECK(resolve_workers(3) == 3);
  CHECK(resolve_workers(100000) == kMaxWorkers);
}
