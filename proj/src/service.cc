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

#include "fuzzyref/service.h"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fuzzyref/reg.h"
#include "httplib.h"

namespace fuzzyref {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

int64_t NowMs() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string SessionId(uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "s%06llu", static_cast<unsigned long long>(index));
  return buf;
}

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int HttpStatus(ServiceError::Code code) {
  switch (code) {
    case ServiceError::Code::kNoPlan:
      return 503;
    case ServiceError::Code::kNotFound:
      return 404;
    case ServiceError::Code::kBadRequest:
      return 400;
    case ServiceError::Code::kAlreadyAnswered:
    case ServiceError::Code::kStale:
      return 409;
  }
  return 500;
}

void Reply(httplib::Response &res, int status, const json &body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <typename Handler>
void Guarded(httplib::Response &res, Handler &&handler) {
  try {
    handler();
  } catch (const ServiceError &e) {
    Reply(res, HttpStatus(e.code()), {{"v", 1}, {"error", e.what()}});
  } catch (const json::exception &e) {
    Reply(res, 400, {{"v", 1}, {"error", std::string("bad request: ") + e.what()}});
  } catch (const std::exception &e) {
    Reply(res, 500, {{"v", 1}, {"error", e.what()}});
  }
}

}  // namespace

AppendLog::AppendLog(std::string path) : path_(std::move(path)) {
  fd_ = ::open(path_.c_str(), O_RDWR | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) throw Error("cannot open " + path_ + ": " + std::strerror(errno));
  const std::string contents = ReadFile(path_);
  if (!contents.empty() && contents.back() != '\n') {
    const auto keep = contents.rfind('\n');
    const off_t length = keep == std::string::npos ? 0 : static_cast<off_t>(keep + 1);
    if (::ftruncate(fd_, length) != 0) throw Error("cannot truncate torn line in " + path_);
  }
}

AppendLog::~AppendLog() {
  if (fd_ >= 0) ::close(fd_);
}

void AppendLog::Append(const std::string &line) {
  const std::string data = line + "\n";
  std::lock_guard<std::mutex> lock(mu_);
  size_t written = 0;
  while (written < data.size()) {
    const ssize_t n = ::write(fd_, data.data() + written, data.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error("write to " + path_ + " failed: " + std::strerror(errno));
    }
    written += static_cast<size_t>(n);
  }
  if (::fsync(fd_) != 0) throw Error("fsync of " + path_ + " failed: " + std::strerror(errno));
}

std::vector<std::string> AppendLog::ReadLines(const std::string &path) {
  std::vector<std::string> lines;
  std::ifstream in(path);
  if (!in) return lines;
  std::string contents((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  size_t start = 0;
  while (true) {
    const auto end = contents.find('\n', start);
    if (end == std::string::npos) break;
    if (end > start) lines.push_back(contents.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::string ExperimentService::TrialsPath(const std::string &data_dir) {
  return (fs::path(data_dir) / "trials.jsonl").string();
}

std::string ExperimentService::SessionsPath(const std::string &data_dir) {
  return (fs::path(data_dir) / "sessions.jsonl").string();
}

ExperimentService::ExperimentService(std::string data_dir, PropertyConfig cfg)
    : data_dir_(std::move(data_dir)), cfg_(std::move(cfg)) {}

ExperimentService::ExperimentService(DesignPlan plan, std::string data_dir, PropertyConfig cfg)
    : ExperimentService(std::move(data_dir), std::move(cfg)) {
  LoadPlan(std::move(plan));
}

void ExperimentService::LoadPlan(DesignPlan plan) {
  std::lock_guard<std::mutex> lock(table_mu_);
  if (plan_) throw Error("plan already loaded");
  fs::create_directories(data_dir_);
  const std::string plan_path = (fs::path(data_dir_) / "plan.json").string();
  const std::string plan_text = PlanToJson(plan).dump();
  if (fs::exists(plan_path)) {
    if (PlanToJson(PlanFromJson(json::parse(ReadFile(plan_path)))).dump() != plan_text) {
      throw Error("data directory " + data_dir_ + " belongs to a different plan");
    }
  } else {
    std::ofstream(plan_path) << plan_text << "\n";
  }
  plan_ = std::move(plan);
  trials_ = std::make_unique<AppendLog>(TrialsPath(data_dir_));
  session_log_ = std::make_unique<AppendLog>(SessionsPath(data_dir_));
  Replay();
}

void ExperimentService::Replay() {
  for (const auto &line : AppendLog::ReadLines(SessionsPath(data_dir_))) {
    const json j = json::parse(line);
    auto slot = std::make_unique<Slot>();
    SessionState &s = slot->state;
    s.id = j.at("session").get<std::string>();
    s.index = j.at("index").get<uint64_t>();
    s.group = j.at("group").get<int>();
    s.created_at_ms = j.at("created_at_ms").get<int64_t>();
    s.order = plan_->TrialOrder(s.index);
    next_index_ = std::max(next_index_, s.index + 1);
    sessions_[s.id] = std::move(slot);
  }
  for (const auto &line : AppendLog::ReadLines(TrialsPath(data_dir_))) {
    const TrialRecord record = RecordFromJson(json::parse(line));
    auto it = sessions_.find(record.participant);
    if (it == sessions_.end()) throw Error("trial log names unknown session " + record.participant);
    SessionState &s = it->second->state;
    if (s.complete() || plan_->items[s.order[s.cursor]].id != record.item) {
      throw Error("trial log out of order for session " + s.id);
    }
    ++s.cursor;
  }
}

json ExperimentService::CreateSession() {
  std::lock_guard<std::mutex> lock(table_mu_);
  if (!plan_) throw ServiceError(ServiceError::Code::kNoPlan, "no plan loaded");
  auto slot = std::make_unique<Slot>();
  SessionState &s = slot->state;
  s.index = next_index_;
  s.id = SessionId(s.index);
  s.group = static_cast<int>(s.index % plan_->groups());
  s.order = plan_->TrialOrder(s.index);
  s.created_at_ms = NowMs();
  session_log_->Append(
      json{{"v", 1}, {"session", s.id}, {"index", s.index}, {"group", s.group}, {"created_at_ms", s.created_at_ms}}
          .dump());
  ++next_index_;
  json out = {{"v", 1},
              {"session", s.id},
              {"group", s.group},
              {"trials", s.order.size()},
              {"created_at_ms", s.created_at_ms}};
  sessions_[s.id] = std::move(slot);
  return out;
}

ExperimentService::Slot &ExperimentService::FindSlot(const std::string &session_id) const {
  std::lock_guard<std::mutex> lock(table_mu_);
  if (!plan_) throw ServiceError(ServiceError::Code::kNoPlan, "no plan loaded");
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw ServiceError(ServiceError::Code::kNotFound, "unknown session " + session_id);
  return *it->second;
}

const Scene &ExperimentService::SceneFor(int item, const Condition &condition) {
  std::lock_guard<std::mutex> lock(scene_mu_);
  const auto key = std::make_pair(item, condition.Index());
  auto it = scenes_.find(key);
  if (it == scenes_.end()) it = scenes_.emplace(key, plan_->SceneFor(item, condition, cfg_)).first;
  return it->second;
}

json ExperimentService::NextTrial(const std::string &session_id) {
  Slot &slot = FindSlot(session_id);
  std::lock_guard<std::mutex> lock(slot.mu);
  const SessionState &s = slot.state;
  if (s.complete()) return {{"v", 1}, {"session", s.id}, {"complete", true}};

  const int item = s.order[s.cursor];
  const Condition condition = plan_->ConditionFor(s.group, item);
  const Scene &scene = SceneFor(item, condition);
  json payload = {{"v", 1},
                  {"session", s.id},
                  {"complete", false},
                  {"trial", plan_->items[item].id},
                  {"index", s.cursor},
                  {"total", s.order.size()},
                  {"scene", SceneToJson(scene)},
                  {"instruction", Instruction(scene)}};
  if (!scene.standard_sizes.empty()) {
    payload["standard"] = {{"shape", ShapeName(scene.TargetShape())}, {"sizes", scene.standard_sizes}};
  }
  return payload;
}

json ExperimentService::SubmitResponse(const ResponseEvent &event) {
  Slot &slot = FindSlot(event.session_id);
  std::lock_guard<std::mutex> lock(slot.mu);
  SessionState &s = slot.state;

  for (size_t i = 0; i < s.cursor; ++i) {
    if (plan_->items[s.order[i]].id == event.trial_id) {
      throw ServiceError(ServiceError::Code::kAlreadyAnswered, "already-answered");
    }
  }
  if (s.complete() || plan_->items[s.order[s.cursor]].id != event.trial_id) {
    throw ServiceError(ServiceError::Code::kStale, "stale trial: " + event.trial_id);
  }
  if (!(event.id_time > 0.0)) throw ServiceError(ServiceError::Code::kBadRequest, "id_time must be > 0");

  const int item = s.order[s.cursor];
  const Condition condition = plan_->ConditionFor(s.group, item);
  const Scene &scene = SceneFor(item, condition);
  if (!scene.Contains(event.chosen)) {
    throw ServiceError(ServiceError::Code::kBadRequest, "chosen object not in scene: " + event.chosen);
  }

  TrialRecord record;
  record.participant = s.id;
  record.item = plan_->items[item].id;
  record.condition = condition;
  record.target = scene.target;
  record.chosen = event.chosen;
  record.correct = event.chosen == scene.target;
  record.id_time = event.id_time;
  record.measures = AllMeasures(Rank(IdentifyingDistribution(scene, cfg_)));
  record.group = s.group;
  record.trial_index = static_cast<int>(s.cursor);
  record.server_time_ms = NowMs();
  record.Check();
  trials_->Append(RecordToJson(record).dump());

  ++s.cursor;
  return {{"v", 1}, {"correct", record.correct}, {"complete", s.complete()}, {"next_index", s.cursor}};
}

size_t ExperimentService::session_count() const {
  std::lock_guard<std::mutex> lock(table_mu_);
  return sessions_.size();
}

std::optional<SessionState> ExperimentService::Session(const std::string &session_id) const {
  try {
    Slot &slot = FindSlot(session_id);
    std::lock_guard<std::mutex> lock(slot.mu);
    return slot.state;
  } catch (const ServiceError &) {
    return std::nullopt;
  }
}

std::string Instruction(const Scene &scene) {
  ReferringExpression re(scene.TargetShape());
  if (scene.identifying_term) re.Add(*scene.identifying_term);
  return "touch " + re.Render();
}

void MountRoutes(httplib::Server &server, ExperimentService &service, const std::string &ui_dir) {
  server.Post("/sessions", [&service](const httplib::Request &, httplib::Response &res) {
    Guarded(res, [&] { Reply(res, 201, service.CreateSession()); });
  });
  server.Get(R"(/sessions/([^/]+)/trial)", [&service](const httplib::Request &req, httplib::Response &res) {
    Guarded(res, [&] { Reply(res, 200, service.NextTrial(req.matches[1])); });
  });
  server.Post(R"(/sessions/([^/]+)/response)", [&service](const httplib::Request &req, httplib::Response &res) {
    Guarded(res, [&] {
      const json body = json::parse(req.body);
      ResponseEvent event;
      event.session_id = req.matches[1];
      event.trial_id = body.at("trial").get<std::string>();
      event.chosen = body.at("chosen").get<std::string>();
      event.id_time = body.at("id_time").get<double>();
      Reply(res, 200, service.SubmitResponse(event));
    });
  });
  if (!ui_dir.empty() && !server.set_mount_point("/", ui_dir)) {
    throw Error("cannot serve UI directory " + ui_dir);
  }
}

bool Serve(const ServeOptions &options) {
  ExperimentService service(options.data_dir, options.properties);
  if (!options.plan_path.empty()) {
    service.LoadPlan(PlanFromJson(json::parse(ReadFile(options.plan_path))));
  }
  httplib::Server server;
  MountRoutes(server, service, options.ui_dir);
  return server.listen(options.host, options.port);
}

}  // namespace fuzzyref
