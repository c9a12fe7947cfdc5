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

#include "coreset/stream.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "coreset/rng.hpp"

namespace coreset {

WeightedPointSet merge(const WeightedPointSet& a, const WeightedPointSet& b) {
  if (a.dim() != b.dim()) {
    throw Error("merge: dimension mismatch (" + std::to_string(a.dim()) +
                " vs " + std::to_string(b.dim()) + ")");
  }
  std::vector<double> coords = a.coords();
  coords.insert(coords.end(), b.coords().begin(), b.coords().end());
  std::vector<double> weights = a.weights();
  weights.insert(weights.end(), b.weights().begin(), b.weights().end());
  return WeightedPointSet(a.dim(), std::move(coords), std::move(weights));
}

void MergeTreeConfig::validate() const {
  if (leaf_size == 0) throw Error("merge tree: leaf_size must be at least 1");
  if (!(eps_leaf > 0.0 && eps_leaf < 1.0)) throw Error("merge tree: eps_leaf must lie in (0, 1)");
  if (!(delta_leaf > 0.0 && delta_leaf < 1.0)) throw Error("merge tree: delta_leaf must lie in (0, 1)");
  if (sample_size && *sample_size == 0) throw Error("merge tree: sample_size must be at least 1");
  const std::size_t expected = sample_size.value_or(leaf_size);
  if (recompress_threshold < 2 * expected) {
    throw Error("merge tree: recompress_threshold (" +
                std::to_string(recompress_threshold) +
                ") must be at least twice the coreset size (" +
                std::to_string(expected) + ")");
  }
}

double StreamResult::compounded_error_bound(double eps_leaf) const {
  return std::pow(1.0 + eps_leaf, static_cast<double>(reduce_depth)) - 1.0;
}

MergeReduceTree::MergeReduceTree(KernelSpec spec, MergeTreeConfig config)
    : spec_(std::move(spec)), config_(std::move(config)) {
  spec_.validate();
  config_.validate();
}

void MergeReduceTree::push(const WeightedPointSet& batch) {
  if (finished_) throw Error("MergeReduceTree: push after finish");
  if (batch.empty()) return;
  if (pending_ && pending_->dim() != batch.dim()) {
    throw Error("MergeReduceTree: batches must share a dimension");
  }
  if (!levels_.empty()) {
    for (const auto& b : levels_) {
      if (b && b->set.dim() != batch.dim()) {
        throw Error("MergeReduceTree: batches must share a dimension");
      }
    }
  }
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (!pending_) {
      pending_.emplace(batch.dim());
      pending_->reserve(config_.leaf_size);
      pending_sources_.clear();
    }
    pending_->add(batch.point(i), batch.weight(i));
    pending_sources_.push_back(seen_++);
    if (pending_->size() == config_.leaf_size) seal_leaf();
  }
}

void MergeReduceTree::seal_leaf() {
  Bucket leaf{std::move(*pending_), std::move(pending_sources_), {}, 0};
  pending_.reset();
  pending_sources_ = {};
  leaf.probabilities.assign(leaf.set.size(), 1.0);
  ++leaves_;
  insert(reduce(std::move(leaf)), 0);
}

MergeReduceTree::Bucket MergeReduceTree::reduce(Bucket bucket) {
  const std::uint64_t seed =
      reduce_count_ == 0 ? config_.seed : derive_seed(config_.seed, reduce_count_);
  ++reduce_count_;
  std::optional<std::size_t> size;
  if (config_.sample_size) size = std::min(*config_.sample_size, bucket.set.size());
  Coreset c = monotonic_coreset(bucket.set, spec_, config_.eps_leaf,
                                config_.delta_leaf, seed, size);
  Bucket out{std::move(c.set), {}, std::move(c.probabilities), bucket.depth + 1};
  out.sources.reserve(c.source_indices.size());
  for (std::size_t s : c.source_indices) out.sources.push_back(bucket.sources[s]);
  return out;
}

std::size_t MergeReduceTree::resident() const {
  std::size_t total = 0;
  for (const auto& b : levels_) {
    if (b) total += b->set.size();
  }
  return total;
}

void MergeReduceTree::note_resident(std::size_t extra) {
  peak_ = std::max(peak_, resident() + extra);
}

void MergeReduceTree::insert(Bucket bucket, std::size_t level) {
  for (;;) {
    if (levels_.size() <= level) levels_.resize(level + 1);
    height_ = std::max(height_, level);
    if (!levels_[level]) {
      levels_[level] = std::move(bucket);
      note_resident(0);
      return;
    }
    Bucket other = std::move(*levels_[level]);
    levels_[level].reset();
    Bucket merged{merge(other.set, bucket.set), std::move(other.sources),
                  std::move(other.probabilities),
                  std::max(other.depth, bucket.depth)};
    merged.sources.insert(merged.sources.end(), bucket.sources.begin(), bucket.sources.end());
    merged.probabilities.insert(merged.probabilities.end(),
                                bucket.probabilities.begin(),
                                bucket.probabilities.end());
    note_resident(merged.set.size());
    if (merged.set.size() > config_.recompress_threshold) {
      merged = reduce(std::move(merged));
    }
    bucket = std::move(merged);
    ++level;
  }
}

StreamResult MergeReduceTree::finish() {
  if (finished_) throw Error("MergeReduceTree: finish called twice");
  if (pending_ && !pending_->empty()) seal_leaf();
  finished_ = true;

  std::optional<Bucket> all;
  for (auto& b : levels_) {
    if (!b) continue;
    if (!all) {
      all = std::move(*b);
    } else {
      Bucket merged{merge(all->set, b->set), std::move(all->sources),
                    std::move(all->probabilities), std::max(all->depth, b->depth)};
      merged.sources.insert(merged.sources.end(), b->sources.begin(), b->sources.end());
      merged.probabilities.insert(merged.probabilities.end(),
                                  b->probabilities.begin(), b->probabilities.end());
      all = std::move(merged);
    }
    b.reset();
  }
  if (!all) throw Error("stream_coreset: no points were pushed");
  peak_ = std::max(peak_, all->set.size());
  if (all->set.size() > config_.recompress_threshold) all = reduce(std::move(*all));

  StreamResult result{Coreset(all->set.dim())};
  result.coreset.set = std::move(all->set);
  result.coreset.source_indices = std::move(all->sources);
  result.coreset.probabilities = std::move(all->probabilities);
  result.coreset.eps = config_.eps_leaf;
  result.coreset.delta = config_.delta_leaf;
  result.coreset.seed = config_.seed;
  result.coreset.requested_size = result.coreset.set.size();
  result.coreset.weighted_heuristic = all->depth > 1;
  result.leaves = leaves_;
  result.tree_height = height_;
  result.reduce_depth = all->depth;
  result.reduce_count = reduce_count_;
  result.peak_resident = peak_;
  return result;
}

StreamResult stream_coreset(std::span<const WeightedPointSet> batches,
                            const KernelSpec& spec,
                            const MergeTreeConfig& config) {
  MergeReduceTree tree(spec, config);
  for (const auto& b : batches) tree.push(b);
  return tree.finish();
}

}  // namespace coreset
