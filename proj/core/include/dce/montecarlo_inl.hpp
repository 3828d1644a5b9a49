// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <exception>
#include <thread>

namespace dce {

template <typename T>
std::vector<T> run_trials(std::size_t trials, unsigned workers,
                          const std::function<T(std::size_t)>& trial) {
  std::vector<T> out(trials);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(trials, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < trials; ++i) out[i] = trial(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < trials; i += workers) out[i] = trial(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace dce
