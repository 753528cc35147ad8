// Copyright (c) 2026, The Easel Engine Authors. All rights reserved.
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

#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "easel/clock.hpp"
#include "easel/workflow_graph.hpp"

namespace easel {

struct BackendOutput {
  std::string node_id;
  std::string class_type;
  OutputMedia media = OutputMedia::image;
  std::string filename;
  Bytes bytes;  // empty for text outputs
  std::string text;
};

struct RunContext {
  std::function<void(double)> progress;  // fraction in [0, 1]
  std::function<bool()> cancelled;
  // Bytes for an input filename referenced by a loader node.
  std::function<Bytes(const std::string&)> input;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string name() const = 0;
  // Throws BackendUnavailable (transport) or GenerationFailed (backend error).
  virtual std::vector<BackendOutput> execute(const WorkflowGraph& graph, const RunContext& ctx) = 0;
  // Best-effort request to stop whatever is executing.
  virtual void interrupt() {}
};

// Output size implied by the graph: the nearest upstream node carrying integer
// width/height literals (breadth-first, ties by node id).
std::optional<Dims> declared_dims(const WorkflowGraph& graph, const std::string& output_node);
// length/fps literals upstream of a video output.
double declared_duration(const WorkflowGraph& graph, const std::string& output_node);

struct MockOptions {
  int ticks = 4;
  std::chrono::milliseconds tick{2};
  // Lets tests script failures.
  std::function<bool(const WorkflowGraph&)> fail_if;
};

// In-process backend. Images are solid colors derived from the graph hash and
// output node, with the hash and dims stamped into PNG text chunks; identical
// graphs give byte-identical outputs.
class MockBackend final : public Backend {
 public:
  explicit MockBackend(MockOptions opts = {}) : opts_(std::move(opts)) {}
  std::string name() const override { return "mock"; }
  std::vector<BackendOutput> execute(const WorkflowGraph& graph, const RunContext& ctx) override;

  static std::vector<BackendOutput> render(const WorkflowGraph& graph);

 private:
  MockOptions opts_;
};

enum class JobState { queued, running, done, failed, cancelled };
std::string_view to_string(JobState s);
inline bool is_terminal(JobState s) { return s == JobState::done || s == JobState::failed || s == JobState::cancelled; }

struct JobEvent {
  std::uint64_t index = 0;  // position in the job's event stream
  JobState state = JobState::queued;
  double progress = 0;
  std::string message;
  Timestamp at = 0;
};

struct JobStatus {
  JobId id;
  RunId run;
  JobState state = JobState::queued;
  double progress = 0;
  std::string error;
  Timestamp submitted_at = 0;
  std::optional<Timestamp> finished_at;
  std::size_t output_count = 0;
};

json to_json(const JobEvent& e);
json to_json(const JobStatus& s);

class Gateway {
 public:
  using Listener = std::function<void(const JobStatus&, const JobEvent&)>;
  using InputResolver = std::function<Bytes(const std::string&)>;

  Gateway(std::shared_ptr<Backend> backend, std::shared_ptr<Clock> clock, std::size_t max_inflight = 1,
          InputResolver inputs = {});
  ~Gateway();
  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  // Throws InvalidGraph.
  JobId submit(WorkflowGraph graph, RunId run);
  JobStatus status(const JobId& id) const;  // throws UnknownJob
  std::vector<JobStatus> jobs() const;

  // Events after `from`; blocks until at least one exists, the job is
  // terminal, or the timeout passes.
  std::vector<JobEvent> watch(const JobId& id, std::size_t from = 0,
                              std::chrono::milliseconds timeout = std::chrono::milliseconds(0)) const;
  JobStatus wait(const JobId& id, std::chrono::milliseconds timeout = std::chrono::seconds(30)) const;

  // queued/running -> cancelled; cancelling a cancelled job is a no-op.
  // Throws NotCancellable for done or failed jobs.
  JobStatus cancel(const JobId& id);

  // Throws NotDone unless the job finished successfully.
  std::vector<BackendOutput> outputs(const JobId& id) const;
  const WorkflowGraph& graph(const JobId& id) const;

  // Called (on the worker thread, without gateway locks held) for every event.
  void set_listener(Listener l);
  // Next job ids are numbered above `n`; keeps ids unique across restarts.
  void reserve_job_ids(std::uint64_t n);
  // Blocks until nothing is queued or running.
  void drain() const;
  void shutdown();
  Backend& backend() { return *backend_; }

 private:
  struct Job {
    JobStatus status;
    WorkflowGraph graph;
    std::vector<JobEvent> events;
    std::vector<BackendOutput> outputs;
    std::atomic<bool> cancel{false};
  };

  void worker_loop();
  void run_job(const std::shared_ptr<Job>& job);
  // Appends an event under the lock; returns a copy for the listener.
  JobEvent push_event(Job& job, JobState state, double progress, std::string message);
  void notify(const JobStatus& s, const JobEvent& e);
  std::shared_ptr<Job> get(const JobId& id) const;

  std::shared_ptr<Backend> backend_;
  std::shared_ptr<Clock> clock_;
  std::size_t max_inflight_;
  InputResolver inputs_;

  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  std::map<JobId, std::shared_ptr<Job>> jobs_;
  std::deque<std::shared_ptr<Job>> queue_;
  std::size_t inflight_ = 0;
  std::uint64_t counter_ = 0;
  bool stopping_ = false;
  std::vector<std::thread> workers_;
  std::mutex listener_mu_;
  Listener listener_;
};

}  // namespace easel
