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

#ifndef DEXSIM_TRAIN_TRAINER_H_
#define DEXSIM_TRAIN_TRAINER_H_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "dexsim/env/env_params.h"
#include "dexsim/nn/adam.h"
#include "dexsim/nn/network.h"
#include "dexsim/rand/randomization_spec.h"
#include "dexsim/replay/chunk_buffer.h"
#include "dexsim/rl/gae.h"
#include "dexsim/rl/normalizer.h"
#include "dexsim/rl/ppo.h"
#include "dexsim/train/evaluate.h"

namespace dexsim::train {

inline constexpr std::uint64_t kCheckpointVersion = 1;

struct TrainConfig {
  std::uint64_t seed = 1;
  int workers = 1;
  // Environments stepped in lockstep per batch. Trajectories depend on this
  // and on the seed, never on the worker count.
  int env_slots = 10;
  int transitions_per_batch = 2000;
  int batches = 300;
  int chunk_length = replay::kChunkLength;
  int dense_size = 64;
  int lstm_size = 32;
  double learning_rate = 1e-3;
  bool refresh_hidden = true;
  rl::GaeConfig gae;
  rl::PpoConfig ppo;
  int eval_every = 0;  // batches; 0 evaluates only after the final batch
  int eval_episodes = 20;
  int checkpoint_every = 10;
  env::EnvParams env = env::EnvParams::Defaults();
  rand::RandomizationSpec randomization = rand::RandomizationSpec::Defaults();

  void Validate() const;
};

struct CollectStats {
  int transitions = 0;
  int episodes_completed = 0;
  int discarded_episodes = 0;
  int discarded_transitions = 0;
  std::vector<double> episode_returns;
  std::vector<int> episode_goals;
  std::vector<int> episode_lengths;
};

struct OptimizeStats {
  int minibatches = 0;
  int samples = 0;
  bool aborted = false;
  std::string abort_reason;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double approx_kl = 0.0;
  double value_loss = 0.0;
  double surrogate = 0.0;
  double first_clip_fraction = 0.0;  // first minibatch of the first epoch
};

struct BatchMetrics {
  int batch = 0;
  CollectStats collect;
  OptimizeStats optimize;
  bool evaluated = false;
  EvalResult eval;
  double collect_seconds = 0.0;
  double optimize_seconds = 0.0;
  double eval_seconds = 0.0;
};

// Deterministic JSON line without wall-clock fields.
std::string FormatMetrics(const BatchMetrics& m);
// Wall-clock timings for the same batch.
std::string FormatTimings(const BatchMetrics& m);

struct MinibatchLoss {
  rl::PpoResult loss;
  Eigen::VectorXd policy_grad;
  Eigen::VectorXd value_grad;
  std::vector<nn::HiddenState> policy_final;  // per entry of `ids`
  std::vector<nn::HiddenState> value_final;
};

// PPO loss of one minibatch and its parameter gradients. A chunk whose
// predecessor appears earlier in `ids` starts from that predecessor's final
// state; initial states are constants for differentiation.
MinibatchLoss ComputeMinibatchLoss(const nn::Network& policy,
                                   const nn::Network& value,
                                   const replay::ChunkBuffer& buffer,
                                   const std::vector<int>& ids,
                                   const rl::RunningNormalizer& target_norm,
                                   const rl::PpoConfig& ppo);

class Trainer {
 public:
  explicit Trainer(const TrainConfig& config,
                   std::string config_fingerprint = "");
  ~Trainer();
  Trainer(const Trainer&) = delete;
  Trainer& operator=(const Trainer&) = delete;

  // Collect rollouts with the current networks, optimize, update
  // normalizers, and evaluate when due.
  BatchMetrics RunBatch();

  // The two phases of RunBatch, exposed for tests. Collect returns a sealed
  // buffer with GAE filled in; Optimize consumes it.
  replay::ChunkBuffer Collect(CollectStats* stats);
  OptimizeStats Optimize(replay::ChunkBuffer& buffer);

  EvalResult EvaluatePolicy(int episodes, std::uint64_t tag) const;

  void SaveCheckpoint(const std::string& path) const;
  // Throws FormatError on a version mismatch or corrupt file, ConfigError if
  // the checkpoint was written under a different configuration.
  void LoadCheckpoint(const std::string& path);

  int batches_done() const { return batches_done_; }
  const TrainConfig& config() const { return config_; }
  const nn::Network& policy() const { return policy_; }
  const nn::Network& value() const { return value_; }
  nn::Network& mutable_policy() { return policy_; }
  nn::Network& mutable_value() { return value_; }
  const rl::RunningNormalizer& policy_normalizer() const {
    return policy_norm_;
  }
  const rl::RunningNormalizer& value_normalizer() const { return value_norm_; }
  const rl::RunningNormalizer& target_normalizer() const {
    return target_norm_;
  }
  const nn::AdamState& policy_adam() const { return policy_adam_; }
  const nn::AdamState& value_adam() const { return value_adam_; }

  // Batch observations collected by the last Collect call (raw, pre
  // normalization); consumed by the normalizer update.
  const Eigen::MatrixXd& last_policy_obs() const { return raw_policy_obs_; }

 private:
  struct Slot;
  struct SlotOutput;
  void CollectSlot(int slot, int steps, SlotOutput& out) const;
  void UpdateNormalizers();

  TrainConfig config_;
  std::string fingerprint_;
  nn::Network policy_;
  nn::Network value_;
  nn::AdamState policy_adam_;
  nn::AdamState value_adam_;
  rl::RunningNormalizer policy_norm_;
  rl::RunningNormalizer value_norm_;
  rl::RunningNormalizer target_norm_;
  std::vector<std::unique_ptr<Slot>> slots_;
  int batches_done_ = 0;
  Eigen::MatrixXd raw_policy_obs_;
  Eigen::MatrixXd raw_value_obs_;
};

struct TrainSummary {
  int batches = 0;
  EvalResult final_eval;
};

// Runs the configured number of batches, writing metrics.jsonl,
// timings.jsonl and checkpoint.bin into out_dir. When resume is true and a
// checkpoint exists there, training continues from it and the metrics file
// is trimmed to the checkpointed batches first.
TrainSummary RunTraining(const TrainConfig& config, const std::string& out_dir,
                         bool resume, const std::string& config_fingerprint,
                         std::ostream* progress);

}  // namespace dexsim::train

#endif  // DEXSIM_TRAIN_TRAINER_H_
