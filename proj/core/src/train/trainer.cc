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

#include "dexsim/train/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "dexsim/common/binary_io.h"
#include "dexsim/common/errors.h"
#include "dexsim/common/rng.h"
#include "dexsim/common/text_format.h"
#include "dexsim/env/observations.h"
#include "dexsim/nn/categorical.h"
#include "dexsim/nn/checkpoint.h"
#include "dexsim/rand/randomized_env.h"

namespace dexsim::train {

namespace {

constexpr std::uint64_t kEpisodeTag = 0xE9150DE;
constexpr std::uint64_t kActionTag = 0xAC7104;
constexpr std::uint64_t kOptimizeTag = 0x0971;
constexpr std::uint64_t kInitTag = 0x1417;
constexpr std::uint64_t kEvalTag = 0xE7A1;
constexpr char kMagic[] = "dexsim-checkpoint";

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

// Per-step records of the episode segment in progress.
struct SegmentBuilder {
  std::vector<Eigen::VectorXd> policy_obs, value_obs;
  std::vector<env::Bins> bins;
  std::vector<double> logp, rewards, values;
  std::vector<std::uint8_t> done;
  std::vector<nn::HiddenState> policy_hiddens, value_hiddens;

  int size() const { return static_cast<int>(rewards.size()); }
  void Clear() { *this = SegmentBuilder(); }
};

replay::EpisodeData Finalize(const SegmentBuilder& seg, std::uint64_t id,
                             rl::TerminalKind kind, double bootstrap,
                             const rl::GaeConfig& gae) {
  replay::EpisodeData e;
  const int n = seg.size();
  e.episode_id = id;
  e.policy_obs.resize(seg.policy_obs.front().size(), n);
  e.value_obs.resize(seg.value_obs.front().size(), n);
  e.bins.resize(env::kNumJoints, n);
  for (int t = 0; t < n; ++t) {
    e.policy_obs.col(t) = seg.policy_obs[t];
    e.value_obs.col(t) = seg.value_obs[t];
    for (int k = 0; k < env::kNumJoints; ++k) e.bins(k, t) = seg.bins[t][k];
  }
  e.logp_old = seg.logp;
  e.rewards = seg.rewards;
  e.values = seg.values;
  e.done = seg.done;
  e.policy_hiddens = seg.policy_hiddens;
  e.value_hiddens = seg.value_hiddens;
  std::vector<double> values = seg.values;
  values.push_back(bootstrap);
  rl::GaeResult g = rl::ComputeGae(seg.rewards, values, kind, gae);
  e.advantages = std::move(g.advantages);
  e.value_targets = std::move(g.value_targets);
  return e;
}

Eigen::MatrixXd Stack(const std::vector<Eigen::VectorXd>& cols, int rows) {
  Eigen::MatrixXd m(rows, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) m.col(i) = cols[i];
  return m;
}

std::string OptionalDouble(bool present, double v) {
  return present ? FormatDouble(v) : "null";
}

}  // namespace

void TrainConfig::Validate() const {
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (env_slots < 1) throw ConfigError("env_slots must be >= 1");
  if (transitions_per_batch < 1) {
    throw ConfigError("transitions_per_batch must be >= 1");
  }
  if (batches < 1) throw ConfigError("batches must be >= 1");
  if (chunk_length < 1) throw ConfigError("chunk_length must be >= 1");
  if (dense_size < 1 || lstm_size < 1) {
    throw ConfigError("network sizes must be >= 1");
  }
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate must be finite and >= 0");
  }
  if (eval_every < 0) throw ConfigError("eval_every must be >= 0");
  if (eval_episodes < 1) throw ConfigError("eval_episodes must be >= 1");
  if (checkpoint_every < 0) throw ConfigError("checkpoint_every must be >= 0");
  gae.Validate();
  ppo.Validate();
  env.Validate();
  randomization.Validate(env);
}

struct Trainer::Slot {
  std::unique_ptr<rand::RandomizedEnv> env;
  std::uint64_t episodes_started = 0;
  Rng action_rng;
  nn::HiddenState policy_h;
  nn::HiddenState value_h;
  env::ObservationPair obs;
  double episode_return = 0.0;
  int episode_length = 0;
  bool needs_reset = true;
};

struct Trainer::SlotOutput {
  std::vector<replay::EpisodeData> segments;
  std::vector<Eigen::VectorXd> raw_policy;
  std::vector<Eigen::VectorXd> raw_value;
  CollectStats stats;
};

Trainer::Trainer(const TrainConfig& config, std::string config_fingerprint)
    : config_(config), fingerprint_(std::move(config_fingerprint)) {
  config_.Validate();
  Rng init = MakeRng(config_.seed, {kInitTag});
  policy_ = nn::Network::Initialized(
      {env::kPolicyObsSize, config_.dense_size, config_.lstm_size,
       env::kNumJoints * nn::kNumBins},
      init);
  value_ = nn::Network::Initialized(
      {env::kValueObsSize, config_.dense_size, config_.lstm_size, 1}, init);
  policy_adam_ = nn::AdamState::ForSize(policy_.params().size(),
                                        config_.learning_rate);
  value_adam_ =
      nn::AdamState::ForSize(value_.params().size(), config_.learning_rate);
  policy_norm_ = rl::RunningNormalizer(env::kPolicyObsSize);
  value_norm_ = rl::RunningNormalizer(env::kValueObsSize);
  target_norm_ = rl::RunningNormalizer(1);

  for (int s = 0; s < config_.env_slots; ++s) {
    auto slot = std::make_unique<Slot>();
    slot->env = std::make_unique<rand::RandomizedEnv>(config_.env,
                                                      config_.randomization);
    slots_.push_back(std::move(slot));
  }
  // Seed the observation statistics with the first observation of every
  // slot so the first collection phase has something to normalize with.
  std::vector<Eigen::VectorXd> p, v;
  for (int s = 0; s < config_.env_slots; ++s) {
    SlotOutput scratch;
    CollectSlot(s, 0, scratch);
    p.push_back(slots_[s]->obs.policy);
    v.push_back(slots_[s]->obs.value);
  }
  policy_norm_.Update(Stack(p, env::kPolicyObsSize));
  value_norm_.Update(Stack(v, env::kValueObsSize));
}

Trainer::~Trainer() = default;

void Trainer::CollectSlot(int index, int steps, SlotOutput& out) const {
  Slot& slot = *slots_[index];
  const int chunk = config_.chunk_length;
  const int lstm = config_.lstm_size;

  auto start_episode = [&]() {
    for (int attempt = 0;; ++attempt) {
      const std::uint64_t n = slot.episodes_started++;
      const auto s = static_cast<std::uint64_t>(index);
      try {
        slot.obs = slot.env->Reset(DeriveSeed(config_.seed, {kEpisodeTag, s, n}));
      } catch (const InitializationError&) {
        ++out.stats.discarded_episodes;
        if (attempt + 1 >= env::kMaxResetAttempts) throw;
        continue;
      }
      slot.action_rng = MakeRng(config_.seed, {kActionTag, s, n});
      break;
    }
    slot.policy_h = nn::HiddenState::Zero(lstm);
    slot.value_h = nn::HiddenState::Zero(lstm);
    slot.episode_return = 0.0;
    slot.episode_length = 0;
    slot.needs_reset = false;
  };
  if (slot.needs_reset) start_episode();

  auto bootstrap_value = [&](const env::ObservationPair& obs) {
    nn::HiddenState h = slot.value_h;
    Eigen::VectorXd v;
    value_.Step(value_norm_.Apply(obs.value), h, v);
    return target_norm_.Denormalize1(v[0]);
  };
  auto segment_id = [&]() {
    return (static_cast<std::uint64_t>(index) << 32) | slot.episodes_started;
  };

  SegmentBuilder seg;
  Eigen::VectorXd logits, vout;
  for (int step = 0; step < steps; ++step) {
    if (slot.needs_reset) start_episode();
    if (slot.obs.policy.size() != env::kPolicyObsSize) {
      throw IntegrityError("policy observation has unexpected fields");
    }
    if (seg.size() % chunk == 0) {
      seg.policy_hiddens.push_back(slot.policy_h);
      seg.value_hiddens.push_back(slot.value_h);
    }
    Eigen::VectorXd pin = policy_norm_.Apply(slot.obs.policy);
    Eigen::VectorXd vin = value_norm_.Apply(slot.obs.value);
    policy_.Step(pin, slot.policy_h, logits);
    value_.Step(vin, slot.value_h, vout);
    const double v = target_norm_.Denormalize1(vout[0]);
    nn::ActionSample a = nn::SampleAction(logits, slot.action_rng);
    env::Bins bins;
    std::copy(a.bins.begin(), a.bins.end(), bins.begin());

    rand::RandomizedEnv::StepOutput so;
    try {
      so = slot.env->Step(bins);
    } catch (const NumericalError&) {
      ++out.stats.discarded_episodes;
      out.stats.discarded_transitions += seg.size() + 1;
      seg.Clear();
      slot.needs_reset = true;
      continue;
    }
    out.raw_policy.push_back(slot.obs.policy);
    out.raw_value.push_back(slot.obs.value);
    seg.policy_obs.push_back(std::move(pin));
    seg.value_obs.push_back(std::move(vin));
    seg.bins.push_back(bins);
    seg.logp.push_back(a.logprob);
    seg.rewards.push_back(so.result.reward);
    seg.values.push_back(v);
    seg.done.push_back(so.result.done ? 1 : 0);
    slot.episode_return += so.result.reward;
    ++slot.episode_length;
    ++out.stats.transitions;

    if (so.result.done) {
      const bool terminal = so.result.reason == env::DoneReason::kDrop;
      const double boot = terminal ? 0.0 : bootstrap_value(so.obs);
      out.segments.push_back(Finalize(
          seg, segment_id(),
          terminal ? rl::TerminalKind::kTerminal : rl::TerminalKind::kTruncated,
          boot, config_.gae));
      seg.Clear();
      ++out.stats.episodes_completed;
      out.stats.episode_returns.push_back(slot.episode_return);
      out.stats.episode_goals.push_back(slot.env->state().consecutive_goals);
      out.stats.episode_lengths.push_back(slot.episode_length);
      slot.needs_reset = true;
    } else {
      slot.obs = std::move(so.obs);
    }
  }
  if (seg.size() > 0) {
    out.segments.push_back(Finalize(seg, segment_id(),
                                    rl::TerminalKind::kTruncated,
                                    bootstrap_value(slot.obs), config_.gae));
  }
}

replay::ChunkBuffer Trainer::Collect(CollectStats* stats) {
  const int n = config_.env_slots;
  const int per_slot = (config_.transitions_per_batch + n - 1) / n;
  std::vector<SlotOutput> outputs(n);
  const int workers = std::min(config_.workers, n);
  if (workers <= 1) {
    for (int s = 0; s < n; ++s) CollectSlot(s, per_slot, outputs[s]);
  } else {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w) {
      threads.emplace_back([&, w]() {
        try {
          for (int s = w; s < n; s += workers) {
            CollectSlot(s, per_slot, outputs[s]);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  replay::ChunkBuffer buffer(static_cast<std::uint64_t>(batches_done_),
                             config_.chunk_length);
  CollectStats total;
  std::vector<Eigen::VectorXd> raw_p, raw_v;
  for (SlotOutput& o : outputs) {
    for (const replay::EpisodeData& e : o.segments) buffer.AddEpisode(e);
    total.transitions += o.stats.transitions;
    total.episodes_completed += o.stats.episodes_completed;
    total.discarded_episodes += o.stats.discarded_episodes;
    total.discarded_transitions += o.stats.discarded_transitions;
    auto append = [](auto& dst, const auto& src) {
      dst.insert(dst.end(), src.begin(), src.end());
    };
    append(total.episode_returns, o.stats.episode_returns);
    append(total.episode_goals, o.stats.episode_goals);
    append(total.episode_lengths, o.stats.episode_lengths);
    append(raw_p, o.raw_policy);
    append(raw_v, o.raw_value);
  }
  buffer.Seal();
  if (buffer.num_transitions() != total.transitions) {
    throw IntegrityError("collected transitions do not match the buffer");
  }
  raw_policy_obs_ = Stack(raw_p, env::kPolicyObsSize);
  raw_value_obs_ = Stack(raw_v, env::kValueObsSize);
  if (stats) *stats = std::move(total);
  return buffer;
}

MinibatchLoss ComputeMinibatchLoss(const nn::Network& policy,
                                   const nn::Network& value,
                                   const replay::ChunkBuffer& buffer,
                                   const std::vector<int>& ids,
                                   const rl::RunningNormalizer& target_norm,
                                   const rl::PpoConfig& ppo) {
  struct Pass {
    nn::ForwardCache policy_cache, value_cache;
    Eigen::MatrixXd logits, values;
  };
  MinibatchLoss out;
  out.policy_final.resize(ids.size());
  out.value_final.resize(ids.size());
  std::vector<Pass> passes(ids.size());
  std::unordered_map<int, std::size_t> position;
  rl::PpoInputs in;
  for (std::size_t j = 0; j < ids.size(); ++j) {
    const replay::EpisodeChunk& c = buffer.chunk(ids[j]);
    Pass& p = passes[j];
    const nn::HiddenState* ph0 = &c.policy_h0;
    const nn::HiddenState* vh0 = &c.value_h0;
    if (auto it = position.find(c.previous); it != position.end()) {
      ph0 = &out.policy_final[it->second];
      vh0 = &out.value_final[it->second];
    }
    p.logits = policy.Forward(c.policy_obs.leftCols(c.length), *ph0,
                              &out.policy_final[j], &p.policy_cache);
    p.values = value.Forward(c.value_obs.leftCols(c.length), *vh0,
                             &out.value_final[j], &p.value_cache);
    position[ids[j]] = j;
    for (int t = 0; t < c.length; ++t) {
      const Eigen::VectorXd z = p.logits.col(t);
      std::vector<int> bins(c.bins.col(t).data(),
                            c.bins.col(t).data() + c.bins.rows());
      in.logp_new.push_back(nn::LogProb(z, bins));
      in.entropy.push_back(nn::Entropy(z));
      in.logp_old.push_back(c.logp_old[t]);
      in.advantages.push_back(c.advantages[t]);
      in.values_pred.push_back(p.values(0, t));
      in.value_targets.push_back(target_norm.Apply1(c.value_targets[t]));
    }
  }
  if (in.advantages.size() >= 2) {
    in.advantages = rl::NormalizeAdvantages(in.advantages);
  }
  out.loss = rl::PpoLoss(in, ppo);

  out.policy_grad = Eigen::VectorXd::Zero(policy.params().size());
  out.value_grad = Eigen::VectorXd::Zero(value.params().size());
  std::size_t k = 0;
  for (std::size_t j = 0; j < ids.size(); ++j) {
    const replay::EpisodeChunk& c = buffer.chunk(ids[j]);
    Pass& p = passes[j];
    Eigen::MatrixXd d_logits(p.logits.rows(), c.length);
    Eigen::MatrixXd d_values(1, c.length);
    for (int t = 0; t < c.length; ++t, ++k) {
      const Eigen::VectorXd z = p.logits.col(t);
      std::vector<int> bins(c.bins.col(t).data(),
                            c.bins.col(t).data() + c.bins.rows());
      d_logits.col(t) = out.loss.d_logp_new[k] * nn::LogProbGradient(z, bins) +
                        out.loss.d_entropy[k] * nn::EntropyGradient(z);
      d_values(0, t) = out.loss.d_values_pred[k];
    }
    out.policy_grad += policy.Backward(p.policy_cache, d_logits).params;
    out.value_grad += value.Backward(p.value_cache, d_values).params;
  }
  return out;
}

OptimizeStats Trainer::Optimize(replay::ChunkBuffer& buffer) {
  if (!buffer.sealed()) throw UsageError("optimize needs a sealed buffer");
  OptimizeStats st;
  if (buffer.size() == 0) return st;

  // Value targets are learned in normalized units.
  {
    std::vector<double> targets;
    for (const auto& c : buffer.chunks()) {
      targets.insert(targets.end(), c.value_targets.begin(),
                     c.value_targets.begin() + c.length);
    }
    target_norm_.Update(Eigen::Map<const Eigen::MatrixXd>(
        targets.data(), 1, static_cast<Eigen::Index>(targets.size())));
  }

  const nn::Network policy_start = policy_;
  const nn::Network value_start = value_;
  const nn::AdamState policy_adam_start = policy_adam_;
  const nn::AdamState value_adam_start = value_adam_;
  Rng rng = MakeRng(config_.seed,
                    {kOptimizeTag, static_cast<std::uint64_t>(batches_done_)});
  const int mb_size = std::min(config_.ppo.chunks_per_minibatch, buffer.size());

  try {
    for (int epoch = 0; epoch < config_.ppo.epochs; ++epoch) {
      for (const std::vector<int>& ids : buffer.Minibatches(mb_size, rng)) {
        MinibatchLoss mb = ComputeMinibatchLoss(policy_, value_, buffer, ids,
                                                target_norm_, config_.ppo);
        const rl::PpoResult& loss = mb.loss;
        if (!std::isfinite(loss.loss)) {
          throw NumericalError("non-finite PPO loss");
        }
        nn::AdamStep(policy_.mutable_params(), mb.policy_grad, policy_adam_);
        nn::AdamStep(value_.mutable_params(), mb.value_grad, value_adam_);
        if (config_.refresh_hidden) {
          for (std::size_t j = 0; j < ids.size(); ++j) {
            buffer.RefreshSuccessor(ids[j], mb.policy_final[j],
                                    mb.value_final[j], buffer.generation());
          }
        }

        if (st.minibatches == 0) st.first_clip_fraction = loss.clip_fraction;
        ++st.minibatches;
        st.samples += static_cast<int>(loss.d_logp_new.size());
        st.entropy += loss.mean_entropy;
        st.clip_fraction += loss.clip_fraction;
        st.approx_kl += loss.approx_kl;
        st.value_loss += loss.value_loss;
        st.surrogate += loss.surrogate;
      }
    }
  } catch (const NumericalError& e) {
    policy_ = policy_start;
    value_ = value_start;
    policy_adam_ = policy_adam_start;
    value_adam_ = value_adam_start;
    st.aborted = true;
    st.abort_reason = e.what();
  }
  if (st.minibatches > 0) {
    const double inv = 1.0 / st.minibatches;
    st.entropy *= inv;
    st.clip_fraction *= inv;
    st.approx_kl *= inv;
    st.value_loss *= inv;
    st.surrogate *= inv;
  }
  return st;
}

void Trainer::UpdateNormalizers() {
  if (raw_policy_obs_.cols() > 0) policy_norm_.Update(raw_policy_obs_);
  if (raw_value_obs_.cols() > 0) value_norm_.Update(raw_value_obs_);
}

EvalResult Trainer::EvaluatePolicy(int episodes, std::uint64_t tag) const {
  EvalConfig ec;
  ec.episodes = episodes;
  ec.seed = DeriveSeed(config_.seed, {kEvalTag, tag});
  return Evaluate(policy_, policy_norm_, config_.env, config_.randomization,
                  ec);
}

BatchMetrics Trainer::RunBatch() {
  BatchMetrics m;
  m.batch = batches_done_;
  const auto t0 = Clock::now();
  replay::ChunkBuffer buffer = Collect(&m.collect);
  const auto t1 = Clock::now();
  m.optimize = Optimize(buffer);
  UpdateNormalizers();
  const auto t2 = Clock::now();
  ++batches_done_;
  m.collect_seconds = Seconds(t0, t1);
  m.optimize_seconds = Seconds(t1, t2);
  const bool due = (config_.eval_every > 0 &&
                    batches_done_ % config_.eval_every == 0) ||
                   batches_done_ == config_.batches;
  if (due) {
    m.evaluated = true;
    m.eval = EvaluatePolicy(config_.eval_episodes,
                            static_cast<std::uint64_t>(batches_done_));
    m.eval_seconds = Seconds(t2, Clock::now());
  }
  return m;
}

void Trainer::SaveCheckpoint(const std::string& path) const {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write checkpoint " + tmp);
    BinaryWriter out(f);
    out.Str(kMagic);
    out.U64(kCheckpointVersion);
    out.Str(fingerprint_);
    out.I64(batches_done_);
    nn::WriteNetwork(out, policy_);
    nn::WriteNetwork(out, value_);
    nn::WriteAdam(out, policy_adam_);
    nn::WriteAdam(out, value_adam_);
    policy_norm_.Write(out);
    value_norm_.Write(out);
    target_norm_.Write(out);
    out.I64(static_cast<std::int64_t>(slots_.size()));
    for (const auto& slot : slots_) {
      slot->env->Save(out);
      out.U64(slot->episodes_started);
      out.Str(SaveRngState(slot->action_rng));
      out.Vec(slot->policy_h.c);
      out.Vec(slot->policy_h.h);
      out.Vec(slot->value_h.c);
      out.Vec(slot->value_h.h);
      out.Vec(slot->obs.policy);
      out.Vec(slot->obs.value);
      out.F64(slot->episode_return);
      out.I64(slot->episode_length);
      out.U64(slot->needs_reset ? 1 : 0);
    }
    f.flush();
    if (!f) throw std::runtime_error("failed writing checkpoint " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

void Trainer::LoadCheckpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open checkpoint " + path);
  BinaryReader in(f);
  if (in.Str() != kMagic) throw FormatError(path + ": not a dexsim checkpoint");
  const std::uint64_t version = in.U64();
  if (version != kCheckpointVersion) {
    throw FormatError(path + ": unsupported checkpoint version " +
                      std::to_string(version) + " (this build reads " +
                      std::to_string(kCheckpointVersion) + ")");
  }
  const std::string fingerprint = in.Str();
  if (!fingerprint_.empty() && !fingerprint.empty() &&
      fingerprint != fingerprint_) {
    throw ConfigError(path + ": checkpoint was written with a different "
                             "configuration");
  }
  const int done = static_cast<int>(in.I64());
  nn::Network policy = nn::ReadNetwork(in);
  nn::Network value = nn::ReadNetwork(in);
  if (!(policy.shape() == policy_.shape()) ||
      !(value.shape() == value_.shape())) {
    throw ConfigError(path + ": network shapes differ from the configuration");
  }
  nn::AdamState pa = nn::ReadAdam(in);
  nn::AdamState va = nn::ReadAdam(in);
  rl::RunningNormalizer pn = rl::RunningNormalizer::Read(in);
  rl::RunningNormalizer vn = rl::RunningNormalizer::Read(in);
  rl::RunningNormalizer tn = rl::RunningNormalizer::Read(in);
  if (in.I64() != static_cast<std::int64_t>(slots_.size())) {
    throw ConfigError(path + ": env slot count differs from the configuration");
  }
  for (auto& slot : slots_) {
    slot->env->Load(in);
    slot->episodes_started = in.U64();
    slot->action_rng = LoadRngState(in.Str());
    slot->policy_h.c = in.Vec();
    slot->policy_h.h = in.Vec();
    slot->value_h.c = in.Vec();
    slot->value_h.h = in.Vec();
    slot->obs.policy = in.Vec();
    slot->obs.value = in.Vec();
    slot->episode_return = in.F64();
    slot->episode_length = static_cast<int>(in.I64());
    slot->needs_reset = in.U64() != 0;
  }
  batches_done_ = done;
  policy_ = std::move(policy);
  value_ = std::move(value);
  policy_adam_ = std::move(pa);
  value_adam_ = std::move(va);
  policy_norm_ = std::move(pn);
  value_norm_ = std::move(vn);
  target_norm_ = std::move(tn);
}

std::string FormatMetrics(const BatchMetrics& m) {
  const CollectStats& c = m.collect;
  const OptimizeStats& o = m.optimize;
  const bool any = !c.episode_returns.empty();
  double mean_return = 0.0, mean_goals = 0.0;
  int len_min = 0, len_max = 0;
  double len_median = 0.0;
  if (any) {
    mean_return = std::accumulate(c.episode_returns.begin(),
                                  c.episode_returns.end(), 0.0) /
                  c.episode_returns.size();
    mean_goals = std::accumulate(c.episode_goals.begin(),
                                 c.episode_goals.end(), 0.0) /
                 c.episode_goals.size();
    len_min = *std::min_element(c.episode_lengths.begin(),
                                c.episode_lengths.end());
    len_max = *std::max_element(c.episode_lengths.begin(),
                                c.episode_lengths.end());
    len_median = Median(std::vector<double>(c.episode_lengths.begin(),
                                            c.episode_lengths.end()));
  }
  std::ostringstream s;
  s << "{\"batch\":" << m.batch << ",\"transitions\":" << c.transitions
    << ",\"episodes\":" << c.episodes_completed
    << ",\"discarded_episodes\":" << c.discarded_episodes
    << ",\"discarded_transitions\":" << c.discarded_transitions
    << ",\"mean_return\":" << OptionalDouble(any, mean_return)
    << ",\"mean_consecutive_goals\":" << OptionalDouble(any, mean_goals)
    << ",\"episode_length\":{\"min\":" << (any ? std::to_string(len_min) : "null")
    << ",\"median\":" << OptionalDouble(any, len_median)
    << ",\"max\":" << (any ? std::to_string(len_max) : "null") << "}"
    << ",\"minibatches\":" << o.minibatches
    << ",\"entropy\":" << FormatDouble(o.entropy)
    << ",\"clip_fraction\":" << FormatDouble(o.clip_fraction)
    << ",\"approx_kl\":" << FormatDouble(o.approx_kl)
    << ",\"value_loss\":" << FormatDouble(o.value_loss)
    << ",\"surrogate\":" << FormatDouble(o.surrogate)
    << ",\"aborted\":" << (o.aborted ? "true" : "false");
  if (o.aborted) s << ",\"abort_reason\":" << QuoteJson(o.abort_reason);
  if (m.evaluated) {
    s << ",\"eval\":{\"median_consecutive_goals\":"
      << FormatDouble(m.eval.median_goals) << ",\"goals\":"
      << FormatIntArray(m.eval.consecutive_goals)
      << ",\"drops\":" << m.eval.drops << "}";
  }
  s << "}";
  return s.str();
}

std::string FormatTimings(const BatchMetrics& m) {
  std::ostringstream s;
  s << "{\"batch\":" << m.batch
    << ",\"collect_seconds\":" << FormatDouble(m.collect_seconds)
    << ",\"optimize_seconds\":" << FormatDouble(m.optimize_seconds)
    << ",\"eval_seconds\":" << FormatDouble(m.eval_seconds) << "}";
  return s.str();
}

namespace {

void TrimLines(const std::filesystem::path& path, int keep) {
  std::vector<std::string> lines;
  {
    std::ifstream in(path);
    std::string line;
    while (static_cast<int>(lines.size()) < keep && std::getline(in, line)) {
      lines.push_back(line);
    }
  }
  std::ofstream out(path, std::ios::trunc);
  for (const auto& l : lines) out << l << "\n";
}

}  // namespace

TrainSummary RunTraining(const TrainConfig& config, const std::string& out_dir,
                         bool resume, const std::string& config_fingerprint,
                         std::ostream* progress) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  const fs::path ckpt = dir / "checkpoint.bin";
  const fs::path metrics_path = dir / "metrics.jsonl";
  const fs::path timings_path = dir / "timings.jsonl";

  Trainer trainer(config, config_fingerprint);
  if (resume && fs::exists(ckpt)) {
    trainer.LoadCheckpoint(ckpt.string());
    TrimLines(metrics_path, trainer.batches_done());
    TrimLines(timings_path, trainer.batches_done());
    if (progress) {
      *progress << "resumed from " << ckpt.string() << " at batch "
                << trainer.batches_done() << "\n";
    }
  } else {
    std::ofstream(metrics_path, std::ios::trunc);
    std::ofstream(timings_path, std::ios::trunc);
  }

  TrainSummary summary;
  std::ofstream metrics(metrics_path, std::ios::app);
  std::ofstream timings(timings_path, std::ios::app);
  while (trainer.batches_done() < config.batches) {
    BatchMetrics m = trainer.RunBatch();
    metrics << FormatMetrics(m) << "\n";
    metrics.flush();
    timings << FormatTimings(m) << "\n";
    timings.flush();
    const int done = trainer.batches_done();
    if ((config.checkpoint_every > 0 && done % config.checkpoint_every == 0) ||
        done == config.batches) {
      trainer.SaveCheckpoint(ckpt.string());
    }
    if (m.evaluated) summary.final_eval = m.eval;
    if (progress) {
      char line[256];
      std::snprintf(line, sizeof(line),
                    "batch %d/%d  episodes %d  entropy %.3f  clip %.3f  "
                    "value_loss %.4f",
                    done, config.batches, m.collect.episodes_completed,
                    m.optimize.entropy, m.optimize.clip_fraction,
                    m.optimize.value_loss);
      *progress << line;
      if (m.evaluated) *progress << "  eval median goals " << m.eval.median_goals;
      if (m.optimize.aborted) *progress << "  ABORTED: " << m.optimize.abort_reason;
      *progress << "\n";
    }
  }
  if (summary.final_eval.consecutive_goals.empty()) {
    summary.final_eval = trainer.EvaluatePolicy(
        config.eval_episodes, static_cast<std::uint64_t>(trainer.batches_done()));
  }
  summary.batches = trainer.batches_done();
  return summary;
}

}  // namespace dexsim::train
