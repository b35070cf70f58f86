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

#include "dexsim/sysid/calibration.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "dexsim/common/errors.h"
#include "dexsim/common/rng.h"
#include "dexsim/common/text_format.h"
#include "dexsim/rand/layers.h"

namespace dexsim::sysid {

namespace {

constexpr std::uint64_t kCalibrationTag = 0xCA11B;
constexpr int kZeroBin = (env::kNumBins - 1) / 2;

int NearestBin(double action) {
  const double a = std::clamp(action, -1.0, 1.0);
  int best = 0;
  for (int b = 1; b < env::kNumBins; ++b) {
    if (std::abs(env::BinCenter(b) - a) < std::abs(env::BinCenter(best) - a)) {
      best = b;
    }
  }
  return best;
}

class Recorder {
 public:
  Recorder(const env::EnvParams& params, const env::EnvState& start)
      : plant_(params, start) {}

  void Step(const env::Bins& bins) {
    if (step_ % kSegmentSteps == 0) {
      env::StateSnapshot snap;
      snap.step = step_;
      snap.state = plant_.state();
      snap.slack = plant_.slack();
      out_.snapshots.push_back(snap);
    }
    const env::Substeps substeps = env::NominalSubsteps();
    plant_.Step(bins, substeps);
    out_.records.push_back(env::MakeRecord(step_, bins, substeps,
                                           plant_.state(), env::StepResult{}));
    ++step_;
  }

  const Plant& plant() const { return plant_; }
  env::TrajectoryFile Take() { return std::move(out_); }

 private:
  Plant plant_;
  env::TrajectoryFile out_;
  std::int64_t step_ = 0;
};

void Sweep(Recorder& rec, int joint, int bin) {
  const int stop_steps =
      static_cast<int>(std::ceil(kStopDuration / env::kStepDuration));
  const int max_steps =
      static_cast<int>(std::ceil(kMaxSweepDuration / env::kStepDuration));
  env::Bins bins;
  bins.fill(kZeroBin);
  bins[joint] = bin;
  int still = 0;
  for (int s = 0; s < max_steps && still < stop_steps; ++s) {
    const double before = rec.plant().state().q[joint];
    rec.Step(bins);
    const double speed =
        std::abs(rec.plant().state().q[joint] - before) / env::kStepDuration;
    still = speed < kStopVelocity ? still + 1 : 0;
  }
}

}  // namespace

Plant::Plant(const env::EnvParams& params, const env::EnvState& state,
             const env::JointVector& slack)
    : params_(params), state_(state), slack_(slack) {}

void Plant::Step(const env::Bins& bins, const env::Substeps& substeps) {
  double dt = 0.0;
  for (double h : substeps) dt += h;
  const env::JointVector action = env::BinsToAction(bins);
  env::StepInput input;
  input.substeps = substeps;
  for (int i = 0; i < env::kNumJoints; ++i) {
    input.action[i] =
        rand::Backlash(action[i], slack_[i], params_.actuators[i].backlash_neg,
                       params_.actuators[i].backlash_pos, dt);
  }
  env::Integrate(state_, params_, input);
}

RecordedTrajectory RecordScript(const env::EnvParams& params,
                                const env::EnvState& start, int joint,
                                ScriptKind kind, const ScriptOptions& options) {
  if (joint < 0 || joint >= env::kNumJoints) {
    throw UsageError("joint index out of range");
  }
  Recorder rec(params, start);
  RecordedTrajectory out;
  if (kind == ScriptKind::kLimitSweep) {
    out.name = "finger" + std::to_string(joint) + "_limit_sweep";
    Sweep(rec, joint, env::kNumBins - 1);  // inward
    Sweep(rec, joint, 0);                  // outward
  } else {
    out.name = "finger" + std::to_string(joint) + "_oscillation";
    const double scale = env::ActionScale(params.joints[joint]);
    const double center = 0.5 * (params.joints[joint].range_min +
                                 params.joints[joint].range_max);
    double t = 0.0;
    for (double f : options.frequencies) {
      const int steps = static_cast<int>(
          std::lround(options.seconds_per_frequency / env::kStepDuration));
      for (int s = 0; s < steps; ++s) {
        t += env::kStepDuration;
        const double target =
            center + options.oscillation_amplitude *
                         std::sin(2.0 * std::numbers::pi * f * t);
        env::Bins bins;
        bins.fill(kZeroBin);
        bins[joint] =
            NearestBin((target - rec.plant().state().q[joint]) / scale);
        rec.Step(bins);
      }
    }
  }
  out.file = rec.Take();
  return out;
}

std::vector<RecordedTrajectory> GenerateCalibrationTrajectories(
    const env::EnvParams& params, std::uint64_t seed,
    const ScriptOptions& options) {
  params.Validate();
  std::vector<RecordedTrajectory> out;
  for (int j = 0; j < env::kNumJoints; ++j) {
    for (ScriptKind kind : {ScriptKind::kLimitSweep, ScriptKind::kOscillation}) {
      Rng rng = MakeRng(seed, {kCalibrationTag, static_cast<std::uint64_t>(j),
                               static_cast<std::uint64_t>(kind)});
      const env::EnvState start = env::Reset(params, rng);
      out.push_back(RecordScript(params, start, j, kind, options));
    }
  }
  return out;
}

namespace {

struct ErrorSum {
  double sum = 0.0;
  int segments = 0;
  int blowups = 0;
};

ErrorSum SumErrors(const env::EnvParams& candidate,
                   const RecordedTrajectory& trajectory) {
  ErrorSum acc;
  const auto& records = trajectory.file.records;
  for (const env::StateSnapshot& snap : trajectory.file.snapshots) {
    const std::int64_t begin = snap.step;
    const std::int64_t end = begin + kSegmentSteps;
    if (begin < 0 || end > static_cast<std::int64_t>(records.size())) continue;
    ++acc.segments;
    Plant plant(candidate, snap.state, snap.slack);
    bool ok = true;
    try {
      for (std::int64_t s = begin; s < end; ++s) {
        plant.Step(records[s].bins, records[s].substeps);
      }
    } catch (const NumericalError&) {
      ok = false;
    }
    double err = 0.0;
    if (ok) {
      const env::JointVector diff = plant.state().q - records[end - 1].q;
      err = diff.squaredNorm();
      ok = std::isfinite(err);
    }
    if (!ok) {
      ++acc.blowups;
      err = kBlowupPenalty * env::kNumJoints;
    }
    acc.sum += err;
  }
  return acc;
}

ReplayError Finish(const ErrorSum& acc) {
  ReplayError r;
  r.segments = acc.segments;
  r.blowups = acc.blowups;
  if (acc.segments > 0) r.error = acc.sum / (acc.segments * env::kNumJoints);
  return r;
}

}  // namespace

ReplayError ComputeReplayError(const env::EnvParams& candidate,
                               const RecordedTrajectory& trajectory) {
  return Finish(SumErrors(candidate, trajectory));
}

ReplayError ComputeReplayError(
    const env::EnvParams& candidate,
    const std::vector<RecordedTrajectory>& trajectories, int workers) {
  const int n = static_cast<int>(trajectories.size());
  std::vector<ErrorSum> parts(n);
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) parts[i] = SumErrors(candidate, trajectories[i]);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) {
      threads.emplace_back([&, w]() {
        for (int i = w; i < n; i += workers) {
          parts[i] = SumErrors(candidate, trajectories[i]);
        }
      });
    }
    for (auto& t : threads) t.join();
  }
  // Summed in trajectory order so the result is worker-count independent.
  ErrorSum total;
  for (const ErrorSum& p : parts) {
    total.sum += p.sum;
    total.segments += p.segments;
    total.blowups += p.blowups;
  }
  return Finish(total);
}

DescentResult CoordinateDescent(
    const env::EnvParams& start,
    const std::vector<RecordedTrajectory>& trajectories,
    const std::vector<std::string>& parameters, const DescentOptions& options) {
  if (parameters.empty()) throw UsageError("calibration: empty parameter list");
  if (trajectories.empty()) throw UsageError("calibration: no trajectories");

  // Expand wildcards once, keeping first occurrences in order.
  std::vector<std::string> names;
  {
    env::EnvParams scratch = start;
    for (const std::string& path : parameters) {
      for (const env::ParamRef& ref : env::ResolveParamPath(scratch, path)) {
        if (std::find(names.begin(), names.end(), ref.name) == names.end()) {
          names.push_back(ref.name);
        }
      }
    }
  }

  DescentResult result;
  result.params = start;
  auto objective = [&](const env::EnvParams& p) {
    return ComputeReplayError(p, trajectories, options.workers).error;
  };
  double current = objective(result.params);
  result.start_objective = current;

  for (int pass = 1; pass <= options.max_passes; ++pass) {
    result.passes = pass;
    bool accepted_any = false;
    for (const std::string& name : names) {
      for (int k = 0; k < options.max_steps_per_parameter; ++k) {
        env::EnvParams trial = result.params;
        double& slot = env::ParamByName(trial, name);
        const double value = slot;
        double scale = 1.0;
        bool is_signed = false;
        for (const env::ParamRef& ref : env::ListParams(trial)) {
          if (ref.name == name) {
            scale = ref.unit_scale;
            is_signed = ref.is_signed;
            break;
          }
        }
        std::vector<double> probes;
        if (is_signed) {
          for (double o : options.offsets) probes.push_back(value + o * scale);
        } else {
          for (double f : options.factors) probes.push_back(value * f);
        }
        double best = current;
        double best_value = value;
        for (double candidate : probes) {
          slot = candidate;
          try {
            trial.Validate();
          } catch (const ConfigError&) {
            continue;
          }
          const double obj = objective(trial);
          if (obj < best) {
            best = obj;
            best_value = candidate;
          }
        }
        if (!(best < current * (1.0 - kAcceptThreshold))) break;
        env::ParamByName(result.params, name) = best_value;
        result.steps.push_back({pass, name, value, best_value, best});
        current = best;
        accepted_any = true;
      }
    }
    result.pass_objectives.push_back(current);
    if (!accepted_any) break;
  }
  result.final_objective = current;
  return result;
}

std::string FormatReport(const env::EnvParams& start,
                         const DescentResult& result) {
  std::ostringstream s;
  s << "{\n  \"start_objective\": " << FormatDouble(result.start_objective)
    << ",\n  \"final_objective\": " << FormatDouble(result.final_objective)
    << ",\n  \"passes\": " << result.passes
    << ",\n  \"pass_objectives\": " << FormatArray(result.pass_objectives)
    << ",\n  \"changed\": {";
  bool first = true;
  const auto before = env::ListParams(start);
  const auto after = env::ListParams(result.params);
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (*before[i].value == *after[i].value) continue;
    s << (first ? "\n" : ",\n") << "    " << QuoteJson(before[i].name)
      << ": {\"start\": " << FormatDouble(*before[i].value)
      << ", \"final\": " << FormatDouble(*after[i].value) << "}";
    first = false;
  }
  s << (first ? "},\n" : "\n  },\n") << "  \"steps\": [";
  for (std::size_t i = 0; i < result.steps.size(); ++i) {
    const AcceptedStep& a = result.steps[i];
    s << (i ? ",\n" : "\n") << "    {\"pass\": " << a.pass
      << ", \"parameter\": " << QuoteJson(a.parameter)
      << ", \"old\": " << FormatDouble(a.old_value)
      << ", \"new\": " << FormatDouble(a.new_value)
      << ", \"objective\": " << FormatDouble(a.objective) << "}";
  }
  s << (result.steps.empty() ? "]\n}\n" : "\n  ]\n}\n");
  return s.str();
}

}  // namespace dexsim::sysid
