// Copyright 2026 The fuzzyref Authors.
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

#ifndef FUZZYREF_SERVICE_H_
#define FUZZYREF_SERVICE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "fuzzyref/analysis.h"
#include "fuzzyref/scene.h"
#include "json.hpp"

namespace httplib {
class Server;
}

namespace fuzzyref {

class ServiceError : public Error {
 public:
  enum class Code { kNoPlan, kNotFound, kBadRequest, kAlreadyAnswered, kStale };

  ServiceError(Code code, const std::string &what) : Error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

// Append-only line store. Each line goes out in a single write() followed by
// fsync(), so readers never see a torn record; a partial trailing line left by
// a crash is cut off when the log is opened.
class AppendLog {
 public:
  explicit AppendLog(std::string path);
  ~AppendLog();
  AppendLog(const AppendLog &) = delete;
  AppendLog &operator=(const AppendLog &) = delete;

  void Append(const std::string &line);
  const std::string &path() const { return path_; }

  // Complete lines currently in the file at `path` (missing file: none).
  static std::vector<std::string> ReadLines(const std::string &path);

 private:
  std::string path_;
  int fd_ = -1;
  std::mutex mu_;
};

struct SessionState {
  std::string id;
  uint64_t index = 0;
  int group = 0;
  std::vector<int> order;
  size_t cursor = 0;
  int64_t created_at_ms = 0;

  bool complete() const { return cursor >= order.size(); }
};

struct ResponseEvent {
  std::string session_id;
  std::string trial_id;
  ObjectId chosen;
  double id_time = 0.0;
};

// Experiment backend. Sessions are assigned to latin-square groups round-robin
// and walk their items in a seeded random order. Responses are appended to
// <data_dir>/trials.jsonl as TrialRecords; session creation is logged to
// <data_dir>/sessions.jsonl. Both logs are replayed on construction.
//
// Thread-safe: operations on one session are serialised, different sessions
// proceed concurrently and share only the append logs.
class ExperimentService {
 public:
  explicit ExperimentService(std::string data_dir, PropertyConfig cfg = {});
  ExperimentService(DesignPlan plan, std::string data_dir, PropertyConfig cfg = {});

  // Persists the plan to <data_dir>/plan.json and replays the logs. Throws if
  // the data directory already belongs to a different plan.
  void LoadPlan(DesignPlan plan);
  bool has_plan() const { return plan_.has_value(); }

  nlohmann::json CreateSession();
  // The current trial, or {"v":1,"complete":true} once all are answered. Does
  // not advance the session.
  nlohmann::json NextTrial(const std::string &session_id);
  nlohmann::json SubmitResponse(const ResponseEvent &event);

  size_t session_count() const;
  std::optional<SessionState> Session(const std::string &session_id) const;

  static std::string TrialsPath(const std::string &data_dir);
  static std::string SessionsPath(const std::string &data_dir);

 private:
  struct Slot {
    std::mutex mu;
    SessionState state;
  };

  Slot &FindSlot(const std::string &session_id) const;
  const Scene &SceneFor(int item, const Condition &condition);
  void Replay();

  std::string data_dir_;
  PropertyConfig cfg_;
  std::optional<DesignPlan> plan_;

  mutable std::mutex table_mu_;
  std::map<std::string, std::unique_ptr<Slot>> sessions_;
  uint64_t next_index_ = 0;

  std::mutex scene_mu_;
  std::map<std::pair<int, int>, Scene> scenes_;

  std::unique_ptr<AppendLog> trials_;
  std::unique_ptr<AppendLog> session_log_;
};

// "touch the <expression>" for the item's head noun and identifying term.
std::string Instruction(const Scene &scene);

// Registers the JSON API on `server`:
//   POST /sessions                -> 201 session
//   GET  /sessions/{id}/trial     -> 200 trial payload or completion
//   POST /sessions/{id}/response  -> 200 ack
// Errors are {"v":1,"error":...} with 400/404/409/503. When `ui_dir` is
// non-empty it is served as static files at "/".
void MountRoutes(httplib::Server &server, ExperimentService &service, const std::string &ui_dir = "");

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string plan_path;
  std::string data_dir = "data";
  std::string ui_dir;
  PropertyConfig properties;
};

// Blocks until the server stops. Returns false if the socket cannot be bound.
bool Serve(const ServeOptions &options);

}  // namespace fuzzyref

#endif  // FUZZYREF_SERVICE_H_
