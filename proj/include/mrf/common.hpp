/*
 * Copyright 2026 The MRF Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MRF_COMMON_HPP_
#define MRF_COMMON_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace mrf {

inline constexpr const char* kVersion = "1.0.0";

// Error hierarchy. Everything thrown by the library derives from mrf::Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A point payload failed its space's validity predicate.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An iterative Fréchet-mean solver did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, int iterations, double grad_norm)
      : Error(what + " (iterations=" + std::to_string(iterations) +
              ", gradient norm=" + std::to_string(grad_norm) + ")"),
        iterations_(iterations),
        grad_norm_(grad_norm) {}

  int iterations() const { return iterations_; }
  double grad_norm() const { return grad_norm_; }

 private:
  int iterations_;
  double grad_norm_;
};

// Invalid forest / scenario configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Forest weights could not be formed (every tree routed the query to an
// empty leaf).
class DegenerateWeightsError : public Error {
 public:
  using Error::Error;
};

// Dense row-major matrix of doubles. Used for covariates.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

  const std::vector<double>& data() const { return data_; }
  std::span<double> data() { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Counts weighted-Fréchet-mean solver invocations. Copying snapshots the
// current value so spaces holding one stay regular value types.
class SolverCounter {
 public:
  SolverCounter() = default;
  SolverCounter(const SolverCounter& other) : count_(other.value()) {}
  SolverCounter& operator=(const SolverCounter& other) {
    count_.store(other.value(), std::memory_order_relaxed);
    return *this;
  }

  void increment() const { count_.fetch_add(1, std::memory_order_relaxed); }
  std::uint64_t value() const { return count_.load(std::memory_order_relaxed); }
  void reset() const { count_.store(0, std::memory_order_relaxed); }

 private:
  mutable std::atomic<std::uint64_t> count_{0};
};

// SplitMix64 finalizer; used to derive independent per-tree / per-replicate
// seeds from a master seed.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix_seed(mix_seed(seed) ^ mix_seed(stream + 0x632be59bd9b4e019ULL));
}

inline double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

// Normalized trapezoid weights on an equispaced grid of `n` nodes; they sum
// to one, i.e. the rule integrates against the uniform measure on the grid's
// span.
inline std::vector<double> trapezoid_weights(std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {1.0};
  std::vector<double> w(n, 1.0 / static_cast<double>(n - 1));
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

// Runs body(i) for i in [0, count) on up to `threads` workers. Work is
// claimed dynamically; results must be written to per-index slots. The first
// exception thrown by any worker is rethrown on the calling thread.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(threads - 1);
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace mrf

#endif  // MRF_COMMON_HPP_
