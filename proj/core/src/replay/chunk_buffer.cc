// Copyright 2026 The dexsim Authors
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

#include "dexsim/replay/chunk_buffer.h"

#include <algorithm>
#include <string>

#include "dexsim/common/errors.h"

namespace dexsim::replay {

namespace {

void CheckLengths(const EpisodeData& e) {
  const std::size_t n = e.rewards.size();
  if (static_cast<std::size_t>(e.policy_obs.cols()) != n ||
      static_cast<std::size_t>(e.value_obs.cols()) != n ||
      static_cast<std::size_t>(e.bins.cols()) != n || e.logp_old.size() != n ||
      e.advantages.size() != n || e.value_targets.size() != n ||
      e.done.size() != n) {
    throw UsageError("episode " + std::to_string(e.episode_id) +
                     ": per-step fields differ in length");
  }
}

}  // namespace

std::vector<EpisodeChunk> ChunkEpisode(const EpisodeData& episode,
                                       int chunk_length,
                                       std::uint64_t generation) {
  if (chunk_length < 1) throw UsageError("chunk length must be >= 1");
  CheckLengths(episode);
  const int len = episode.length();
  if (len == 0) return {};
  const int count = (len + chunk_length - 1) / chunk_length;
  if (static_cast<int>(episode.policy_hiddens.size()) < count ||
      static_cast<int>(episode.value_hiddens.size()) < count) {
    throw IntegrityError("episode " + std::to_string(episode.episode_id) +
                         ": missing recorded hidden state for chunk " +
                         std::to_string(std::min(episode.policy_hiddens.size(),
                                                 episode.value_hiddens.size())));
  }
  std::vector<EpisodeChunk> chunks(count);
  for (int k = 0; k < count; ++k) {
    EpisodeChunk& c = chunks[k];
    const int start = k * chunk_length;
    const int n = std::min(chunk_length, len - start);
    c.generation = generation;
    c.episode_id = episode.episode_id;
    c.chunk_index = k;
    c.length = n;
    c.policy_obs = Eigen::MatrixXd::Zero(episode.policy_obs.rows(), chunk_length);
    c.value_obs = Eigen::MatrixXd::Zero(episode.value_obs.rows(), chunk_length);
    c.bins = Eigen::MatrixXi::Zero(episode.bins.rows(), chunk_length);
    c.policy_obs.leftCols(n) = episode.policy_obs.middleCols(start, n);
    c.value_obs.leftCols(n) = episode.value_obs.middleCols(start, n);
    c.bins.leftCols(n) = episode.bins.middleCols(start, n);
    auto slice = [&](const auto& v, auto& out) {
      using T = typename std::decay_t<decltype(out)>::value_type;
      out.assign(chunk_length, T{});
      std::copy(v.begin() + start, v.begin() + start + n, out.begin());
    };
    slice(episode.logp_old, c.logp_old);
    slice(episode.rewards, c.rewards);
    slice(episode.advantages, c.advantages);
    slice(episode.value_targets, c.value_targets);
    slice(episode.done, c.done);
    c.valid.assign(chunk_length, 0);
    std::fill(c.valid.begin(), c.valid.begin() + n, 1);
    c.policy_h0 = episode.policy_hiddens[k];
    c.value_h0 = episode.value_hiddens[k];
    c.previous = k - 1;
    c.next = k + 1 < count ? k + 1 : -1;
  }
  return chunks;
}

ChunkBuffer::ChunkBuffer(std::uint64_t generation, int chunk_length)
    : generation_(generation), chunk_length_(chunk_length) {
  if (chunk_length < 1) throw UsageError("chunk length must be >= 1");
}

void ChunkBuffer::AddEpisode(const EpisodeData& episode) {
  if (sealed_) throw UsageError("chunk buffer is sealed");
  std::vector<EpisodeChunk> chunks =
      ChunkEpisode(episode, chunk_length_, generation_);
  if (chunks.empty()) return;
  const int base = size();
  heads_.push_back(base);
  for (EpisodeChunk& c : chunks) {
    if (c.next >= 0) c.next += base;
    if (c.previous >= 0) c.previous += base;
    num_transitions_ += c.length;
    chunks_.push_back(std::move(c));
  }
}

std::vector<std::vector<int>> ChunkBuffer::Minibatches(int minibatch_size,
                                                       Rng& rng) const {
  if (!sealed_) throw UsageError("chunk buffer must be sealed before use");
  if (minibatch_size < 1) throw UsageError("minibatch size must be >= 1");
  if (minibatch_size > size()) {
    throw UsageError("minibatch size " + std::to_string(minibatch_size) +
                     " exceeds buffer size " + std::to_string(size()));
  }
  // Uniform random merge: draw the next chain with probability proportional
  // to its remaining length.
  std::vector<int> cursor = heads_;
  std::vector<int> remaining(heads_.size(), 0);
  for (std::size_t e = 0; e < heads_.size(); ++e) {
    for (int c = heads_[e]; c >= 0; c = chunks_[c].next) ++remaining[e];
  }
  int left = size();
  std::vector<int> order;
  order.reserve(size());
  while (left > 0) {
    int pick = UniformInt(rng, 0, left - 1);
    std::size_t e = 0;
    while (pick >= remaining[e]) pick -= remaining[e++];
    order.push_back(cursor[e]);
    cursor[e] = chunks_[cursor[e]].next;
    --remaining[e];
    --left;
  }
  std::vector<std::vector<int>> batches;
  for (int start = 0; start < size(); start += minibatch_size) {
    const int end = std::min(size(), start + minibatch_size);
    std::vector<int> mb(order.begin() + start, order.begin() + end);
    std::stable_sort(mb.begin(), mb.end(), [this](int a, int b) {
      return chunks_[a].chunk_index < chunks_[b].chunk_index;
    });
    batches.push_back(std::move(mb));
  }
  return batches;
}

void ChunkBuffer::RefreshSuccessor(int chunk,
                                   const nn::HiddenState& policy_final,
                                   const nn::HiddenState& value_final,
                                   std::uint64_t generation) {
  const EpisodeChunk& current = chunks_.at(chunk);
  if (current.next < 0) return;
  EpisodeChunk& successor = chunks_[current.next];
  if (generation != generation_ || current.generation != generation_ ||
      successor.generation != generation_) {
    throw IntegrityError(
        "stale hidden-state refresh: chunk generation " +
        std::to_string(successor.generation) + ", forward pass generation " +
        std::to_string(generation));
  }
  successor.policy_h0 = policy_final;
  successor.value_h0 = value_final;
}

}  // namespace dexsim::replay
