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

#ifndef MRF_PAVA_HPP_
#define MRF_PAVA_HPP_

#include <span>
#include <vector>

#include "mrf/common.hpp"

namespace mrf {

// Weighted least-squares projection of `values` onto nondecreasing vectors
// (pool adjacent violators). Runs in O(n) amortized.
inline std::vector<double> pava_isotonic(std::span<const double> values,
                                         std::span<const double> weights) {
  if (values.size() != weights.size()) throw Error("pava_isotonic: length mismatch");
  struct Block {
    double mean;
    double weight;
    std::size_t count;
  };
  std::vector<Block> blocks;
  blocks.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(weights[i] > 0.0)) throw Error("pava_isotonic: weights must be positive");
    blocks.push_back({values[i], weights[i], 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean > blocks.back().mean) {
      const Block top = blocks.back();
      blocks.pop_back();
      Block& prev = blocks.back();
      const double w = prev.weight + top.weight;
      prev.mean = (prev.weight * prev.mean + top.weight * top.mean) / w;
      prev.weight = w;
      prev.count += top.count;
    }
  }
  std::vector<double> fitted;
  fitted.reserve(values.size());
  for (const Block& b : blocks) fitted.insert(fitted.end(), b.count, b.mean);
  return fitted;
}

inline std::vector<double> pava_isotonic(std::span<const double> values) {
  const std::vector<double> unit(values.size(), 1.0);
  return pava_isotonic(values, unit);
}

}  // namespace mrf

#endif  // MRF_PAVA_HPP_
