// Copyright 2026 The Coreset Authors. All Rights Reserved.
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "coreset/core.hpp"
#include "coreset/sampler.hpp"

namespace coreset {

/// Concatenation of two weighted sets; total_cost is additive over it.
WeightedPointSet merge(const WeightedPointSet& a, const WeightedPointSet& b);

struct MergeTreeConfig {
  /// Raw points per leaf block.
  std::size_t leaf_size = 1024;
  double eps_leaf = 0.3;
  double delta_leaf = 0.1;
  /// A merged bucket larger than this is re-sampled into a coreset.
  std::size_t recompress_threshold = 2048;
  std::uint64_t seed = 0;
  /// Explicit per-reduce sample size. When absent every reduce uses the
  /// size formula clamped to the bucket size.
  std::optional<std::size_t> sample_size;

  /// leaf_size >= 1, eps/delta in (0, 1), and
  /// recompress_threshold >= 2 * sample_size.value_or(leaf_size).
  void validate() const;
};

struct StreamResult {
  Coreset coreset;
  std::size_t leaves = 0;
  /// Number of merge levels above the leaves (log2 of the leaf count for a
  /// full binary tree).
  std::size_t tree_height = 0;
  /// Longest chain of successive re-samplings any output point went
  /// through, leaf summaries included.
  std::size_t reduce_depth = 0;
  std::size_t reduce_count = 0;
  /// Peak number of points held by the tree (buckets plus the bucket being
  /// merged); raw leaf blocks awaiting summarization are not counted.
  std::size_t peak_resident = 0;

  /// (1 + eps_leaf)^reduce_depth - 1, the compounded relative error if every
  /// reduce met its eps_leaf guarantee.
  double compounded_error_bound(double eps_leaf) const;
};

/// Streaming merge-and-reduce tree over weighted batches.
///
/// Batches are cut into leaf blocks of leaf_size points; each leaf is
/// summarized with monotonic_coreset and inserted as a binary counter: two
/// buckets of the same level are merged and, when the union exceeds the
/// recompress threshold, re-sampled. Reduce r uses seed config.seed for
/// r == 0 and derive_seed(config.seed, r) afterwards, so results depend only
/// on the batch order and the config.
///
/// Weighted buckets are re-sampled with weighted_sensitivity_profile; that
/// step has no proven guarantee.
class MergeReduceTree {
 public:
  MergeReduceTree(KernelSpec spec, MergeTreeConfig config);

  void push(const WeightedPointSet& batch);
  /// Flushes the partial leaf and returns the coreset of all buckets. The
  /// tree must not be used afterwards.
  StreamResult finish();

  std::size_t points_seen() const noexcept { return seen_; }

 private:
  struct Bucket {
    WeightedPointSet set;
    std::vector<std::size_t> sources;
    std::vector<double> probabilities;
    std::size_t depth = 0;
  };

  void seal_leaf();
  Bucket reduce(Bucket bucket);
  void insert(Bucket bucket, std::size_t level);
  std::size_t resident() const;
  void note_resident(std::size_t extra);

  KernelSpec spec_;
  MergeTreeConfig config_;
  std::optional<WeightedPointSet> pending_;
  std::vector<std::size_t> pending_sources_;
  std::vector<std::optional<Bucket>> levels_;
  std::size_t seen_ = 0;
  std::size_t leaves_ = 0;
  std::size_t height_ = 0;
  std::size_t reduce_count_ = 0;
  std::size_t peak_ = 0;
  bool finished_ = false;
};

/// Runs a MergeReduceTree over `batches` left to right.
StreamResult stream_coreset(std::span<const WeightedPointSet> batches,
                            const KernelSpec& spec,
                            const MergeTreeConfig& config);

}  // namespace coreset
