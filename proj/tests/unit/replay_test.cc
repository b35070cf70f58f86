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

#include <algorithm>
#include <map>
#include <vector>

#include <gtest/gtest.h>

#include "dexsim/common/errors.h"
#include "dexsim/common/rng.h"
#include "dexsim/replay/chunk_buffer.h"

namespace dexsim::replay {
namespace {

nn::HiddenState Marked(double v) {
  return {Eigen::VectorXd::Constant(2, v), Eigen::VectorXd::Constant(2, -v)};
}

// Step t of episode e carries reward 1000 e + t.
EpisodeData MakeEpisode(std::uint64_t id, int len, int chunk_length) {
  EpisodeData ep;
  ep.episode_id = id;
  ep.policy_obs.resize(3, len);
  ep.value_obs.resize(4, len);
  ep.bins.resize(2, len);
  for (int t = 0; t < len; ++t) {
    ep.policy_obs.col(t).setConstant(t);
    ep.value_obs.col(t).setConstant(-t);
    ep.bins.col(t).setConstant(t % 11);
    ep.logp_old.push_back(-0.1 * t);
    ep.rewards.push_back(1000.0 * id + t);
    ep.values.push_back(0.0);
    ep.advantages.push_back(t);
    ep.value_targets.push_back(2.0 * t);
    ep.done.push_back(t == len - 1);
  }
  for (int k = 0; k * chunk_length < len; ++k) {
    ep.policy_hiddens.push_back(Marked(k + 1));
    ep.value_hiddens.push_back(Marked(-(k + 1)));
  }
  return ep;
}

TEST(ChunkEpisodeTest, SplitsAndPads) {
  const EpisodeData ep = MakeEpisode(3, 23, 10);
  const auto chunks = ChunkEpisode(ep, 10, 5);
  ASSERT_EQ(chunks.size(), 3u);
  EXPECT_EQ(chunks[0].length, 10);
  EXPECT_EQ(chunks[2].length, 3);
  for (int k = 0; k < 3; ++k) {
    const EpisodeChunk& c = chunks[k];
    EXPECT_EQ(c.generation, 5u);
    EXPECT_EQ(c.episode_id, 3u);
    EXPECT_EQ(c.chunk_index, k);
    EXPECT_EQ(c.policy_obs.cols(), 10);
    EXPECT_EQ(c.previous, k - 1);
    EXPECT_EQ(c.next, k < 2 ? k + 1 : -1);
    EXPECT_EQ(c.policy_h0.h, ep.policy_hiddens[k].h);
    EXPECT_EQ(c.value_h0.c, ep.value_hiddens[k].c);
    for (int t = 0; t < 10; ++t) {
      const int step = 10 * k + t;
      if (step < 23) {
        EXPECT_TRUE(c.valid[t]);
        EXPECT_EQ(c.rewards[t], 3000.0 + step);
        EXPECT_EQ(c.policy_obs(0, t), step);
        EXPECT_EQ(c.bins(1, t), step % 11);
      } else {
        EXPECT_FALSE(c.valid[t]);
        EXPECT_EQ(c.rewards[t], 0.0);
        EXPECT_EQ(c.policy_obs.col(t).norm(), 0.0);
      }
    }
  }
  EXPECT_TRUE(chunks[2].done[2]);
}

TEST(ChunkEpisodeTest, MissingHiddenStateIsIntegrityError) {
  EpisodeData ep = MakeEpisode(1, 25, 10);
  ep.policy_hiddens.pop_back();
  EXPECT_THROW(ChunkEpisode(ep, 10, 0), IntegrityError);
}

TEST(ChunkEpisodeTest, InconsistentLengthsAreRejected) {
  EpisodeData ep = MakeEpisode(1, 12, 10);
  ep.done.pop_back();
  EXPECT_THROW(ChunkEpisode(ep, 10, 0), UsageError);
  EXPECT_TRUE(ChunkEpisode(MakeEpisode(1, 0, 10), 10, 0).empty());
}

ChunkBuffer RandomBuffer(Rng& rng, int episodes) {
  ChunkBuffer buffer(7);
  for (int e = 0; e < episodes; ++e) {
    buffer.AddEpisode(MakeEpisode(e, UniformInt(rng, 1, 60), kChunkLength));
  }
  buffer.Seal();
  return buffer;
}

TEST(ChunkBufferTest, Bookkeeping) {
  ChunkBuffer buffer(2);
  buffer.AddEpisode(MakeEpisode(0, 25, kChunkLength));
  buffer.AddEpisode(MakeEpisode(1, 7, kChunkLength));
  EXPECT_EQ(buffer.size(), 4);
  EXPECT_EQ(buffer.num_transitions(), 32);
  EXPECT_EQ(buffer.num_episodes(), 2);
  EXPECT_EQ(buffer.heads(), (std::vector<int>{0, 3}));
  EXPECT_EQ(buffer.chunk(1).next, 2);
  EXPECT_EQ(buffer.chunk(3).previous, -1);
  Rng rng = MakeRng(1, {});
  EXPECT_THROW(buffer.Minibatches(2, rng), UsageError);
  buffer.Seal();
  EXPECT_THROW(buffer.AddEpisode(MakeEpisode(2, 3, kChunkLength)), UsageError);
  EXPECT_THROW(buffer.Minibatches(0, rng), UsageError);
}

// Every chunk appears exactly once, and chunk k + 1 of an episode never
// precedes chunk k.
TEST(ChunkBufferTest, MinibatchOrderingProperty) {
  Rng rng = MakeRng(2, {});
  for (int trial = 0; trial < 200; ++trial) {
    const ChunkBuffer buffer = RandomBuffer(rng, UniformInt(rng, 1, 12));
    const int mb = UniformInt(rng, 1, buffer.size());
    const auto batches = buffer.Minibatches(mb, rng);
    std::vector<int> seen(buffer.size(), 0);
    std::vector<int> position(buffer.size(), -1);
    int pos = 0;
    for (std::size_t b = 0; b < batches.size(); ++b) {
      EXPECT_LE(batches[b].size(), std::size_t(mb));
      if (b + 1 < batches.size()) EXPECT_EQ(batches[b].size(), std::size_t(mb));
      for (int id : batches[b]) {
        ++seen[id];
        position[id] = pos++;
      }
      EXPECT_TRUE(std::is_sorted(
          batches[b].begin(), batches[b].end(), [&](int x, int y) {
            return buffer.chunk(x).chunk_index < buffer.chunk(y).chunk_index;
          }));
    }
    for (int i = 0; i < buffer.size(); ++i) {
      ASSERT_EQ(seen[i], 1);
      const int next = buffer.chunk(i).next;
      if (next >= 0) ASSERT_LT(position[i], position[next]);
    }
  }
}

// With one chunk per minibatch the stream is a random interleaving; over many
// draws each episode leads the stream about equally often.
TEST(ChunkBufferTest, MergeIsRandomized) {
  ChunkBuffer buffer(1);
  for (int e = 0; e < 4; ++e) buffer.AddEpisode(MakeEpisode(e, 30, 10));
  buffer.Seal();
  Rng rng = MakeRng(3, {});
  std::map<std::uint64_t, int> first;
  for (int i = 0; i < 4000; ++i) {
    ++first[buffer.chunk(buffer.Minibatches(1, rng)[0][0]).episode_id];
  }
  for (const auto& [id, n] : first) EXPECT_NEAR(n, 1000, 150) << id;
}

TEST(ChunkBufferTest, RefreshSuccessor) {
  ChunkBuffer buffer(4);
  buffer.AddEpisode(MakeEpisode(0, 25, kChunkLength));
  buffer.Seal();
  buffer.RefreshSuccessor(0, Marked(9), Marked(8), 4);
  EXPECT_EQ(buffer.chunk(1).policy_h0.h, Marked(9).h);
  EXPECT_EQ(buffer.chunk(1).value_h0.c, Marked(8).c);
  EXPECT_EQ(buffer.chunk(2).policy_h0.h, Marked(3).h);
  buffer.RefreshSuccessor(2, Marked(5), Marked(5), 4);  // last chunk: no-op
  EXPECT_THROW(buffer.RefreshSuccessor(1, Marked(1), Marked(1), 3),
               IntegrityError);
  EXPECT_EQ(buffer.chunk(2).policy_h0.h, Marked(3).h);
  buffer.chunk(2).generation = 2;
  EXPECT_THROW(buffer.RefreshSuccessor(1, Marked(1), Marked(1), 4),
               IntegrityError);
}

}  // namespace
}  // namespace dexsim::replay
