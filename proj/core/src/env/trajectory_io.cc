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

#include "dexsim/env/trajectory_io.h"

#include <fstream>
#include <istream>
#include <ostream>

#include "dexsim/common/errors.h"
#include "dexsim/common/text_format.h"
#include "json.hpp"

namespace dexsim::env {

using nlohmann::json;

namespace {

template <typename Derived>
std::string Arr(const Eigen::MatrixBase<Derived>& v) {
  std::vector<double> tmp(v.derived().data(),
                          v.derived().data() + v.size());
  return FormatArray(tmp);
}

std::string QuatArr(const Quaternion& q) {
  auto w = ToWxyz(q);
  return FormatArray(w);
}

std::string StateJson(const EnvState& s) {
  std::string out = "{";
  out += "\"q\":" + Arr(s.q);
  out += ",\"qdot\":" + Arr(s.qdot);
  out += ",\"position\":" + Arr(s.position);
  out += ",\"velocity\":" + Arr(s.velocity);
  out += ",\"orientation\":" + QuatArr(s.orientation);
  out += ",\"angular_velocity\":" + Arr(s.angular_velocity);
  out += ",\"goal\":" + QuatArr(s.goal);
  out += ",\"consecutive_goals\":" + std::to_string(s.consecutive_goals);
  out += ",\"time_since_goal\":" + FormatDouble(s.time_since_goal);
  out += ",\"smoothed_action\":" + Arr(s.smoothed_action);
  out += ",\"contact_loss_time\":" + FormatDouble(s.contact_loss_time);
  out += ",\"time\":" + FormatDouble(s.time);
  out += "}";
  return out;
}

template <int N>
Eigen::Matrix<double, N, 1> ReadVec(const json& j, const char* key) {
  const json& a = j.at(key);
  if (!a.is_array() || a.size() != N) {
    throw FormatError(std::string("field '") + key + "' must have " +
                      std::to_string(N) + " numbers");
  }
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) v[i] = a[i].get<double>();
  return v;
}

Quaternion ReadQuat(const json& j, const char* key) {
  auto v = ReadVec<4>(j, key);
  return Quaternion(v[0], v[1], v[2], v[3]);
}

EnvState ParseState(const json& j) {
  EnvState s;
  s.q = ReadVec<kNumJoints>(j, "q");
  s.qdot = ReadVec<kNumJoints>(j, "qdot");
  s.position = ReadVec<3>(j, "position");
  s.velocity = ReadVec<3>(j, "velocity");
  s.orientation = ReadQuat(j, "orientation");
  s.angular_velocity = ReadVec<3>(j, "angular_velocity");
  s.goal = ReadQuat(j, "goal");
  s.consecutive_goals = j.at("consecutive_goals").get<int>();
  s.time_since_goal = j.at("time_since_goal").get<double>();
  s.smoothed_action = ReadVec<kNumJoints>(j, "smoothed_action");
  s.contact_loss_time = j.at("contact_loss_time").get<double>();
  s.time = j.at("time").get<double>();
  return s;
}

}  // namespace

TrajectoryRecord MakeRecord(std::int64_t step, const Bins& bins,
                            const Substeps& substeps, const EnvState& after,
                            const StepResult& result) {
  TrajectoryRecord r;
  r.step = step;
  r.time = after.time;
  r.substeps = substeps;
  r.bins = bins;
  r.smoothed_action = after.smoothed_action;
  r.q = after.q;
  r.qdot = after.qdot;
  r.position = after.position;
  r.orientation = after.orientation;
  r.reward = result.reward;
  r.done_reason = result.reason;
  return r;
}

std::string FormatRecord(const TrajectoryRecord& r) {
  std::string out = "{\"type\":\"step\"";
  out += ",\"step\":" + std::to_string(r.step);
  out += ",\"time\":" + FormatDouble(r.time);
  out += ",\"substeps\":" + FormatArray(r.substeps);
  out += ",\"bins\":" + FormatIntArray(r.bins);
  out += ",\"smoothed_action\":" + Arr(r.smoothed_action);
  out += ",\"q\":" + Arr(r.q);
  out += ",\"qdot\":" + Arr(r.qdot);
  out += ",\"position\":" + Arr(r.position);
  out += ",\"orientation\":" + QuatArr(r.orientation);
  out += ",\"reward\":" + FormatDouble(r.reward);
  out += ",\"done_reason\":" + QuoteJson(ToString(r.done_reason));
  out += "}";
  return out;
}

std::string FormatSnapshot(const StateSnapshot& s) {
  std::string out = "{\"type\":\"snapshot\"";
  out += ",\"step\":" + std::to_string(s.step);
  out += ",\"state\":" + StateJson(s.state);
  out += ",\"slack\":" + Arr(s.slack);
  out += "}";
  return out;
}

void WriteTrajectory(std::ostream& out, const TrajectoryFile& file) {
  // Snapshots are interleaved before the step they precede.
  std::size_t next_snapshot = 0;
  for (const auto& r : file.records) {
    while (next_snapshot < file.snapshots.size() &&
           file.snapshots[next_snapshot].step <= r.step) {
      out << FormatSnapshot(file.snapshots[next_snapshot++]) << '\n';
    }
    out << FormatRecord(r) << '\n';
  }
  while (next_snapshot < file.snapshots.size()) {
    out << FormatSnapshot(file.snapshots[next_snapshot++]) << '\n';
  }
}

TrajectoryFile ReadTrajectory(std::istream& in) {
  TrajectoryFile file;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      json j = json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (type == "step") {
        TrajectoryRecord r;
        r.step = j.at("step").get<std::int64_t>();
        r.time = j.at("time").get<double>();
        auto sub = ReadVec<kSubsteps>(j, "substeps");
        for (int k = 0; k < kSubsteps; ++k) r.substeps[k] = sub[k];
        const json& bins = j.at("bins");
        if (!bins.is_array() || bins.size() != kNumJoints) {
          throw FormatError("field 'bins' must have 5 integers");
        }
        for (int i = 0; i < kNumJoints; ++i) {
          r.bins[i] = bins[i].get<int>();
          if (r.bins[i] < 0 || r.bins[i] >= kNumBins) {
            throw FormatError("action bin out of range");
          }
        }
        r.smoothed_action = ReadVec<kNumJoints>(j, "smoothed_action");
        r.q = ReadVec<kNumJoints>(j, "q");
        r.qdot = ReadVec<kNumJoints>(j, "qdot");
        r.position = ReadVec<3>(j, "position");
        r.orientation = ReadQuat(j, "orientation");
        r.reward = j.at("reward").get<double>();
        r.done_reason =
            DoneReasonFromString(j.at("done_reason").get<std::string>());
        file.records.push_back(r);
      } else if (type == "snapshot") {
        StateSnapshot s;
        s.step = j.at("step").get<std::int64_t>();
        s.state = ParseState(j.at("state"));
        s.slack = ReadVec<kNumJoints>(j, "slack");
        file.snapshots.push_back(s);
      } else {
        throw FormatError("unknown record type '" + type + "'");
      }
    } catch (const json::exception& e) {
      throw FormatError("trajectory line " + std::to_string(line_no) + ": " +
                        e.what());
    } catch (const FormatError& e) {
      throw FormatError("trajectory line " + std::to_string(line_no) + ": " +
                        e.what());
    }
  }
  return file;
}

void SaveTrajectory(const std::string& path, const TrajectoryFile& file) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open trajectory file for writing: " + path);
  WriteTrajectory(out, file);
}

TrajectoryFile LoadTrajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open trajectory file: " + path);
  return ReadTrajectory(in);
}

}  // namespace dexsim::env
