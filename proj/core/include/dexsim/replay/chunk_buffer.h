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

#ifndef DEXSIM_REPLAY_CHUNK_BUFFER_H_
#define DEXSIM_REPLAY_CHUNK_BUFFER_H_

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "dexsim/common/rng.h"
#include "dexsim/nn/network.h"

namespace dexsim::replay {

inline constexpr int kChunkLength = 10;

// One episode segment as generated by a rollout worker. Column t of each
// matrix is step t. Hidden states are recorded before steps 0, T, 2T, ...
struct EpisodeData {
  std::uint64_t episode_id = 0;
  Eigen::MatrixXd policy_obs;  // Dp x len, as fed to the policy
  Eigen::MatrixXd value_obs;   // Dv x len, as fed to the value network
  Eigen::MatrixXi bins;        // M x len
  std::vector<double> logp_old;
  std::vector<double> rewards;
  std::vector<double> values;  // V(s_t) at generation time, len entries
  std::vector<double> advantages;
  std::vector<double> value_targets;
  std::vector<std::uint8_t> done;
  std::vector<nn::HiddenState> policy_hiddens;
  std::vector<nn::HiddenState> value_hiddens;

  int length() const { return static_cast<int>(rewards.size()); }
};

struct EpisodeChunk {
  std::uint64_t generation = 0;
  std::uint64_t episode_id = 0;
  int chunk_index = 0;
  int length = 0;  // valid steps; steps >= length are padding
  Eigen::MatrixXd policy_obs;  // Dp x T
  Eigen::MatrixXd value_obs;   // Dv x T
  Eigen::MatrixXi bins;        // M x T
  std::vector<double> logp_old;
  std::vector<double> rewards;
  std::vector<double> advantages;
  std::vector<double> value_targets;
  std::vector<std::uint8_t> done;
  std::vector<std::uint8_t> valid;
  nn::HiddenState policy_h0;
  nn::HiddenState value_h0;
  int next = -1;      // buffer index of the successor, -1 if none
  int previous = -1;  // buffer index of the predecessor, -1 if none
};

// Splits an episode into ceil(len / T) chunks; the last one is zero-padded
// and masked. next/previous are relative to the returned vector.
std::vector<EpisodeChunk> ChunkEpisode(const EpisodeData& episode,
                                       int chunk_length,
                                       std::uint64_t generation);

class ChunkBuffer {
 public:
  explicit ChunkBuffer(std::uint64_t generation,
                       int chunk_length = kChunkLength);

  void AddEpisode(const EpisodeData& episode);
  void Seal() { sealed_ = true; }
  bool sealed() const { return sealed_; }

  // Minibatches of chunk indices. The stream is a uniformly random merge of
  // the per-episode chains, cut into groups of `minibatch_size`; each group is
  // stable-sorted by chunk index. Chunk k of an episode always precedes chunk
  // k + 1, either in an earlier minibatch or earlier within the same one.
  std::vector<std::vector<int>> Minibatches(int minibatch_size, Rng& rng) const;

  // Overwrites the successor's initial hidden states. `generation` is the
  // buffer generation the caller's forward pass belongs to.
  void RefreshSuccessor(int chunk, const nn::HiddenState& policy_final,
                        const nn::HiddenState& value_final,
                        std::uint64_t generation);

  std::uint64_t generation() const { return generation_; }
  int chunk_length() const { return chunk_length_; }
  int size() const { return static_cast<int>(chunks_.size()); }
  int num_transitions() const { return num_transitions_; }
  int num_episodes() const { return static_cast<int>(heads_.size()); }
  const std::vector<EpisodeChunk>& chunks() const { return chunks_; }
  EpisodeChunk& chunk(int i) { return chunks_.at(i); }
  const EpisodeChunk& chunk(int i) const { return chunks_.at(i); }
  // Index of each episode's first chunk, in insertion order.
  const std::vector<int>& heads() const { return heads_; }

 private:
  std::uint64_t generation_;
  int chunk_length_;
  bool sealed_ = false;
  int num_transitions_ = 0;
  std::vector<EpisodeChunk> chunks_;
  std::vector<int> heads_;
};

}  // namespace dexsim::replay

#endif  // DEXSIM_REPLAY_CHUNK_BUFFER_H_
