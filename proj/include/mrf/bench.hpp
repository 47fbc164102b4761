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

// Experiment grid runner: (space x n x d x replicate) cells, each fitted
// with every requested split rule on the same data, one CSV row per
// (cell, method, replicate).

#ifndef MRF_BENCH_HPP_
#define MRF_BENCH_HPP_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "mrf/forest.hpp"
#include "mrf/simgen.hpp"

namespace mrf {

inline constexpr std::string_view kCsvHeader =
    "space,method,n,d,rep,seed,fit_seconds,predict_seconds,mse,solver_calls_fit,solver_calls_predict,status";

struct ExperimentRecord {
  SpaceKind space = SpaceKind::euclidean;
  SplitRule method = SplitRule::medoid;
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  double fit_seconds = 0.0;
  double predict_seconds = 0.0;
  double mse = 0.0;
  std::uint64_t solver_calls_fit = 0;
  std::uint64_t solver_calls_predict = 0;
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

// Status strings must stay a single CSV field.
inline std::string sanitize_status(std::string_view text) {
  std::string out;
  for (char c : text) out.push_back(c == ',' || c == '\n' || c == '\r' || c == '"' ? ' ' : c);
  return out;
}

inline std::string to_csv_row(const ExperimentRecord& r) {
  std::string row;
  row += to_string(r.space);
  row += ',';
  row += to_string(r.method);
  row += ',' + std::to_string(r.n) + ',' + std::to_string(r.d) + ',' + std::to_string(r.rep) + ',' +
         std::to_string(r.seed) + ',' + format_double(r.fit_seconds) + ',' + format_double(r.predict_seconds) + ',' +
         format_double(r.mse) + ',' + std::to_string(r.solver_calls_fit) + ',' +
         std::to_string(r.solver_calls_predict) + ',' + sanitize_status(r.status);
  return row;
}

// (1 / N) sum_i d(predict(X_i), m(X_i))^2 against the noiseless means.
template <MetricSpace S>
double mse(const ForestModel<S>& model, const Dataset<typename S::Point>& test) {
  double total = 0.0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const double d = model.space().distance(model.predict(test.x.row(i)), test.truth[i]);
    total += d * d;
  }
  return total / static_cast<double>(test.size());
}

// MSE of an arbitrary predictor callable on the test covariates.
template <MetricSpace S, class Predictor>
double mse_of(const S& space, const Dataset<typename S::Point>& test, Predictor&& predictor) {
  double total = 0.0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const double d = space.distance(predictor(test.x.row(i)), test.truth[i]);
    total += d * d;
  }
  return total / static_cast<double>(test.size());
}

struct GridConfig {
  std::vector<SpaceKind> spaces{SpaceKind::euclidean};
  std::vector<std::size_t> ns{100};
  std::vector<std::size_t> ds{2};
  std::vector<SplitRule> methods{SplitRule::medoid, SplitRule::two_means};
  std::size_t reps = 10;
  std::size_t n_test = 100;
  std::uint64_t seed = 0;
  ForestConfig forest;     // split_rule and seed are set per row
  unsigned jobs = 1;       // replicate-level workers; 0 = hardware
  WassersteinScenario wasserstein;
  SphereScenario sphere;
  WarpingScenario warping;
  EuclideanScenario euclidean;
};

// Dataset seed of one replicate; a pure function of the master seed and the
// cell coordinates.
inline std::uint64_t replicate_seed(std::uint64_t master, SpaceKind space, std::size_t n, std::size_t d,
                                    std::size_t rep) {
  std::uint64_t h = derive_seed(master, static_cast<std::uint64_t>(space));
  h = derive_seed(h, n);
  h = derive_seed(h, d);
  return derive_seed(h, rep);
}

template <class S>
const typename Scenario<S>::Options& scenario_options(const GridConfig& grid) {
  if constexpr (std::is_same_v<S, EuclideanSpace>) return grid.euclidean;
  else if constexpr (std::is_same_v<S, WassersteinSpace>) return grid.wasserstein;
  else if constexpr (std::is_same_v<S, SphereSpace>) return grid.sphere;
  else return grid.warping;
}

// Fits and evaluates one method on one replicate. Failures are reported in
// the record's status, never thrown.
template <MetricSpace S>
ExperimentRecord run_method(const Replicate<typename S::Point>& data, const typename Scenario<S>::Options& opts,
                            ForestConfig forest, SplitRule method, ExperimentRecord base) {
  using Clock = std::chrono::steady_clock;
  base.method = method;
  forest.split_rule = method;
  forest.seed = derive_seed(base.seed, 0x5eed);
  const S space = Scenario<S>::make_space(opts);
  try {
    const auto t0 = Clock::now();
    const ForestModel<S> model = fit(data.train.x, data.train.y, space, forest);
    const auto t1 = Clock::now();
    base.fit_seconds = std::chrono::duration<double>(t1 - t0).count();
    base.solver_calls_fit = space.solver_counter().value();

    std::vector<typename S::Point> predictions;
    predictions.reserve(data.test.size());
    const auto t2 = Clock::now();
    for (std::size_t i = 0; i < data.test.size(); ++i) predictions.push_back(model.predict(data.test.x.row(i)));
    const auto t3 = Clock::now();
    base.predict_seconds = std::chrono::duration<double>(t3 - t2).count();
    base.solver_calls_predict = space.solver_counter().value() - base.solver_calls_fit;

    double total = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
      const double dist = space.distance(predictions[i], data.test.truth[i]);
      total += dist * dist;
    }
    base.mse = total / static_cast<double>(predictions.size());
  } catch (const std::exception& e) {
    base.status = std::string("error: ") + e.what();
  }
  return base;
}

// Appends CSV rows; each row is one write followed by a flush, so an
// interrupted run loses at most the row in flight.
class CsvSink {
 public:
  explicit CsvSink(const std::filesystem::path& path) : out_(path, std::ios::out | std::ios::trunc) {
    if (!out_) throw Error("cannot open '" + path.string() + "' for writing");
    out_ << kCsvHeader << '\n' << std::flush;
  }

  void write(const ExperimentRecord& record) {
    const std::string line = to_csv_row(record) + '\n';
    std::lock_guard lock(mutex_);
    out_.write(line.data(), static_cast<std::streamsize>(line.size()));
    out_.flush();
  }

 private:
  std::mutex mutex_;
  std::ofstream out_;
};

struct GridSummary {
  std::size_t rows = 0;
  std::size_t failures = 0;
  bool ok() const { return failures == 0; }
};

// Runs every (space, n, d, rep) task on `grid.jobs` workers; within a task
// the methods run in order on the same replicate.
inline GridSummary run_grid(const GridConfig& grid, const std::filesystem::path& out_path) {
  if (grid.methods.empty() || grid.spaces.empty() || grid.ns.empty() || grid.ds.empty())
    throw ConfigError("grid has an empty axis");
  grid.forest.validate();

  struct Task {
    SpaceKind space;
    std::size_t n, d, rep;
  };
  std::vector<Task> tasks;
  for (SpaceKind s : grid.spaces)
    for (std::size_t n : grid.ns)
      for (std::size_t d : grid.ds)
        for (std::size_t rep = 0; rep < grid.reps; ++rep) tasks.push_back({s, n, d, rep});

  CsvSink sink(out_path);
  std::mutex summary_mutex;
  GridSummary summary;
  parallel_for(tasks.size(), grid.jobs, [&](std::size_t t) {
    const Task& task = tasks[t];
    ExperimentRecord base;
    base.space = task.space;
    base.n = task.n;
    base.d = task.d;
    base.rep = task.rep;
    base.seed = replicate_seed(grid.seed, task.space, task.n, task.d, task.rep);
    with_space(task.space, [&](auto tag) {
      using S = typename decltype(tag)::type;
      const auto& opts = scenario_options<S>(grid);
      std::optional<Replicate<typename S::Point>> data;
      std::string gen_error;
      try {
        data = make_replicate<S>({task.space, task.n, task.d, grid.n_test, base.seed}, opts);
      } catch (const std::exception& e) {
        gen_error = std::string("error: data generation: ") + e.what();
      }
      for (SplitRule method : grid.methods) {
        ExperimentRecord record = base;
        record.method = method;
        if (data) {
          record = run_method<S>(*data, opts, grid.forest, method, base);
        } else {
          record.status = gen_error;
        }
        sink.write(record);
        std::lock_guard lock(summary_mutex);
        ++summary.rows;
        if (!record.ok()) ++summary.failures;
      }
    });
  });
  return summary;
}

// Writes one file per replicate (training and test sets) into `dir`.
inline std::vector<std::filesystem::path> dump_datasets(const GridConfig& grid, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (SpaceKind s : grid.spaces)
    for (std::size_t n : grid.ns)
      for (std::size_t d : grid.ds)
        for (std::size_t rep = 0; rep < grid.reps; ++rep) {
          const std::uint64_t seed = replicate_seed(grid.seed, s, n, d, rep);
          with_space(s, [&](auto tag) {
            using S = typename decltype(tag)::type;
            const auto& opts = scenario_options<S>(grid);
            const auto data = make_replicate<S>({s, n, d, grid.n_test, seed}, opts);
            const DatasetHeader header{s, n, d, seed, Scenario<S>::grid_size(opts), 0, data.params};
            const auto path = dir / (std::string(to_string(s)) + "_n" + std::to_string(n) + "_d" +
                                     std::to_string(d) + "_rep" + std::to_string(rep) + ".txt");
            std::ofstream out(path);
            if (!out) throw Error("cannot write '" + path.string() + "'");
            write_replicate(out, header, data);
            written.push_back(path);
          });
        }
  return written;
}

}  // namespace mrf

#endif  // MRF_BENCH_HPP_
