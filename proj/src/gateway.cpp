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

#include "easel/gateway.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "easel/error.hpp"
#include "easel/hash.hpp"
#include "easel/media.hpp"

namespace easel {

namespace {

std::optional<std::int64_t> int_literal(const Literal& l) {
  if (const auto* i = std::get_if<std::int64_t>(&l)) return *i;
  if (const auto* u = std::get_if<std::uint64_t>(&l)) return static_cast<std::int64_t>(*u);
  return std::nullopt;
}

std::optional<double> number_literal(const Literal& l) {
  if (auto i = int_literal(l)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&l)) return *d;
  return std::nullopt;
}

// Breadth-first walk upstream of `start` (inclusive); visit returns true to stop.
template <class F>
void walk_upstream(const WorkflowGraph& g, const std::string& start, F&& visit) {
  std::set<std::string> seen{start};
  std::vector<std::string> level{start};
  while (!level.empty()) {
    std::sort(level.begin(), level.end());
    for (const auto& id : level) {
      if (visit(id, g.node(id))) return;
    }
    std::vector<std::string> next;
    for (const auto& id : level) {
      for (const auto& [_, v] : g.node(id).inputs) {
        if (const auto* e = std::get_if<Edge>(&v); e && g.nodes.count(e->node) && seen.insert(e->node).second) {
          next.push_back(e->node);
        }
      }
    }
    level = std::move(next);
  }
}

}  // namespace

std::optional<Dims> declared_dims(const WorkflowGraph& graph, const std::string& output_node) {
  std::optional<Dims> out;
  walk_upstream(graph, output_node, [&](const std::string& id, const WorkflowNode&) {
    const auto* w = graph.literal(id, "width");
    const auto* h = graph.literal(id, "height");
    if (!w || !h) return false;
    auto wi = int_literal(*w), hi = int_literal(*h);
    if (!wi || !hi || *wi <= 0 || *hi <= 0) return false;
    out = Dims{static_cast<int>(*wi), static_cast<int>(*hi)};
    return true;
  });
  return out;
}

double declared_duration(const WorkflowGraph& graph, const std::string& output_node) {
  std::optional<double> length, fps;
  walk_upstream(graph, output_node, [&](const std::string& id, const WorkflowNode&) {
    if (!length) {
      if (const auto* l = graph.literal(id, "length")) length = number_literal(*l);
    }
    if (!fps) {
      if (const auto* f = graph.literal(id, "fps")) fps = number_literal(*f);
      if (!fps) {
        if (const auto* f = graph.literal(id, "frame_rate")) fps = number_literal(*f);
      }
    }
    return length && fps;
  });
  if (length && fps && *fps > 0) return *length / *fps;
  return 5.0;
}

std::vector<BackendOutput> MockBackend::render(const WorkflowGraph& graph) {
  const auto hash = graph.hash();
  std::vector<BackendOutput> out;
  for (const auto& id : graph.output_node_ids()) {
    const auto& node = graph.node(id);
    BackendOutput o;
    o.node_id = id;
    o.class_type = node.class_type;
    o.media = output_media(node.class_type).value_or(OutputMedia::image);
    const auto seed = sha256_hex(hash + ":" + id);
    const auto dims = declared_dims(graph, id).value_or(Dims{1024, 1024});
    const std::string dim_text = std::to_string(dims.width) + "x" + std::to_string(dims.height);
    switch (o.media) {
      case OutputMedia::image: {
        const Rgba c{static_cast<std::uint8_t>(std::stoi(seed.substr(0, 2), nullptr, 16)),
                     static_cast<std::uint8_t>(std::stoi(seed.substr(2, 2), nullptr, 16)),
                     static_cast<std::uint8_t>(std::stoi(seed.substr(4, 2), nullptr, 16)), 255};
        o.bytes = encode_png(Raster(dims.width, dims.height, c),
                             {{"easel:graph", hash}, {"easel:node", id}, {"easel:dims", dim_text}});
        o.filename = "mock_" + seed.substr(0, 16) + ".png";
        break;
      }
      case OutputMedia::video:
        o.bytes = encode_stub_mp4(dims.width, dims.height, declared_duration(graph, id), hash);
        o.filename = "mock_" + seed.substr(0, 16) + ".mp4";
        break;
      case OutputMedia::model3d:
        o.bytes = encode_stub_glb(json{{"asset", {{"version", "2.0"}, {"generator", "easel-mock"}}},
                                       {"extras", {{"graph", hash}, {"node", id}}}}
                                      .dump());
        o.filename = "mock_" + seed.substr(0, 16) + ".glb";
        break;
      case OutputMedia::text:
        o.text = "mock caption " + hash.substr(0, 8);
        break;
    }
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<BackendOutput> MockBackend::execute(const WorkflowGraph& graph, const RunContext& ctx) {
  for (int k = 0; k < opts_.ticks; ++k) {
    if (opts_.tick.count() > 0) std::this_thread::sleep_for(opts_.tick);
    if (ctx.cancelled && ctx.cancelled()) return {};
    if (ctx.progress) ctx.progress(static_cast<double>(k + 1) / opts_.ticks);
  }
  if (opts_.fail_if && opts_.fail_if(graph)) fail(ErrorCode::GenerationFailed, "mock backend scripted failure");
  return render(graph);
}

std::string_view to_string(JobState s) {
  switch (s) {
    case JobState::queued: return "queued";
    case JobState::running: return "running";
    case JobState::done: return "done";
    case JobState::failed: return "failed";
    case JobState::cancelled: return "cancelled";
  }
  return "queued";
}

json to_json(const JobEvent& e) {
  return json{{"index", e.index}, {"state", to_string(e.state)}, {"progress", e.progress},
              {"message", e.message}, {"at", e.at}};
}

json to_json(const JobStatus& s) {
  return json{{"job_id", s.id},
              {"run_id", s.run},
              {"state", to_string(s.state)},
              {"progress", s.progress},
              {"error", s.error.empty() ? json(nullptr) : json(s.error)},
              {"submitted_at", s.submitted_at},
              {"finished_at", s.finished_at ? json(*s.finished_at) : json(nullptr)},
              {"output_count", s.output_count}};
}

Gateway::Gateway(std::shared_ptr<Backend> backend, std::shared_ptr<Clock> clock, std::size_t max_inflight,
                 InputResolver inputs)
    : backend_(std::move(backend)),
      clock_(std::move(clock)),
      max_inflight_(std::max<std::size_t>(1, max_inflight)),
      inputs_(std::move(inputs)) {
  // Workers pull strictly in FIFO order from one queue, so with one worker a
  // job never starts before every earlier submission has finished.
  for (std::size_t i = 0; i < max_inflight_; ++i) workers_.emplace_back([this] { worker_loop(); });
}

Gateway::~Gateway() { shutdown(); }

void Gateway::shutdown() {
  std::vector<std::shared_ptr<Job>> pending;
  {
    std::lock_guard lk(mu_);
    if (stopping_) return;
    stopping_ = true;
    for (auto& [_, job] : jobs_) job->cancel = true;
  }
  cv_.notify_all();
  backend_->interrupt();
  for (auto& t : workers_) {
    if (t.joinable()) t.join();
  }
}

std::shared_ptr<Gateway::Job> Gateway::get(const JobId& id) const {
  std::lock_guard lk(mu_);
  auto it = jobs_.find(id);
  if (it == jobs_.end()) fail(ErrorCode::UnknownJob, "unknown job " + id.str());
  return it->second;
}

JobEvent Gateway::push_event(Job& job, JobState state, double progress, std::string message) {
  JobEvent e{job.events.size(), state, progress, std::move(message), clock_->now()};
  job.events.push_back(e);
  return e;
}

void Gateway::notify(const JobStatus& s, const JobEvent& e) {
  Listener l;
  {
    std::lock_guard lk(listener_mu_);
    l = listener_;
  }
  if (l) l(s, e);
}

void Gateway::set_listener(Listener l) {
  std::lock_guard lk(listener_mu_);
  listener_ = std::move(l);
}

void Gateway::reserve_job_ids(std::uint64_t n) {
  std::lock_guard lk(mu_);
  counter_ = std::max(counter_, n);
}

JobId Gateway::submit(WorkflowGraph graph, RunId run) {
  graph.require_valid();
  auto job = std::make_shared<Job>();
  JobStatus snapshot;
  JobEvent ev;
  {
    std::lock_guard lk(mu_);
    if (stopping_) fail(ErrorCode::BackendUnavailable, "gateway is shutting down");
    job->status.id = JobId(make_id("j", ++counter_));
    job->status.run = std::move(run);
    job->status.submitted_at = clock_->now();
    job->graph = std::move(graph);
    ev = push_event(*job, JobState::queued, 0, "");
    snapshot = job->status;
    jobs_.emplace(job->status.id, job);
    queue_.push_back(job);
  }
  cv_.notify_all();
  notify(snapshot, ev);
  return snapshot.id;
}

JobStatus Gateway::status(const JobId& id) const {
  auto job = get(id);
  std::lock_guard lk(mu_);
  return job->status;
}

std::vector<JobStatus> Gateway::jobs() const {
  std::lock_guard lk(mu_);
  std::vector<JobStatus> out;
  for (const auto& [_, j] : jobs_) out.push_back(j->status);
  return out;
}

std::vector<JobEvent> Gateway::watch(const JobId& id, std::size_t from, std::chrono::milliseconds timeout) const {
  auto job = get(id);
  std::unique_lock lk(mu_);
  cv_.wait_for(lk, timeout, [&] { return job->events.size() > from || is_terminal(job->status.state); });
  if (from >= job->events.size()) return {};
  return {job->events.begin() + static_cast<std::ptrdiff_t>(from), job->events.end()};
}

JobStatus Gateway::wait(const JobId& id, std::chrono::milliseconds timeout) const {
  auto job = get(id);
  std::unique_lock lk(mu_);
  cv_.wait_for(lk, timeout, [&] { return is_terminal(job->status.state); });
  return job->status;
}

JobStatus Gateway::cancel(const JobId& id) {
  auto job = get(id);
  JobStatus snapshot;
  JobEvent ev;
  bool was_running = false;
  {
    std::lock_guard lk(mu_);
    auto& st = job->status;
    if (st.state == JobState::cancelled) return st;
    if (st.state == JobState::done || st.state == JobState::failed) {
      fail(ErrorCode::NotCancellable, "job " + id.str() + " already " + std::string(to_string(st.state)));
    }
    was_running = st.state == JobState::running;
    job->cancel = true;
    st.state = JobState::cancelled;
    st.finished_at = clock_->now();
    ev = push_event(*job, JobState::cancelled, st.progress, "cancelled");
    if (!was_running) {
      queue_.erase(std::remove(queue_.begin(), queue_.end(), job), queue_.end());
    }
    snapshot = st;
  }
  cv_.notify_all();
  if (was_running) backend_->interrupt();
  notify(snapshot, ev);
  return snapshot;
}

std::vector<BackendOutput> Gateway::outputs(const JobId& id) const {
  auto job = get(id);
  std::lock_guard lk(mu_);
  if (job->status.state != JobState::done) {
    fail(ErrorCode::NotDone, "job " + id.str() + " is " + std::string(to_string(job->status.state)));
  }
  return job->outputs;
}

const WorkflowGraph& Gateway::graph(const JobId& id) const { return get(id)->graph; }

void Gateway::drain() const {
  std::unique_lock lk(mu_);
  cv_.wait(lk, [&] { return (queue_.empty() && inflight_ == 0) || stopping_; });
}

void Gateway::worker_loop() {
  for (;;) {
    std::shared_ptr<Job> job;
    {
      std::unique_lock lk(mu_);
      cv_.wait(lk, [&] { return stopping_ || !queue_.empty(); });
      if (stopping_) return;
      job = queue_.front();
      queue_.pop_front();
      ++inflight_;
    }
    run_job(job);
    {
      std::lock_guard lk(mu_);
      --inflight_;
    }
    cv_.notify_all();
  }
}

void Gateway::run_job(const std::shared_ptr<Job>& job) {
  auto transition = [&](JobState state, double progress, std::string message) {
    JobStatus snapshot;
    JobEvent ev;
    {
      std::lock_guard lk(mu_);
      auto& st = job->status;
      if (is_terminal(st.state)) return false;  // terminal states win
      if (state == JobState::running && st.state == JobState::running && progress <= st.progress) return true;
      st.state = state;
      st.progress = std::max(st.progress, progress);
      if (is_terminal(state)) st.finished_at = clock_->now();
      if (state == JobState::failed) st.error = message;
      if (state == JobState::done) st.output_count = job->outputs.size();
      ev = push_event(*job, state, st.progress, std::move(message));
      snapshot = st;
    }
    cv_.notify_all();
    notify(snapshot, ev);
    return true;
  };

  if (!transition(JobState::running, 0, "")) return;
  RunContext ctx;
  ctx.progress = [&](double p) { transition(JobState::running, std::clamp(p, 0.0, 1.0), ""); };
  ctx.cancelled = [&] { return job->cancel.load(); };
  ctx.input = inputs_;
  try {
    auto outs = backend_->execute(job->graph, ctx);
    if (job->cancel) return;
    if (outs.empty()) {
      transition(JobState::failed, 0, "backend returned no outputs");
      return;
    }
    {
      std::lock_guard lk(mu_);
      if (is_terminal(job->status.state)) return;
      job->outputs = std::move(outs);
    }
    transition(JobState::done, 1.0, "");
  } catch (const std::exception& e) {
    transition(JobState::failed, 0, e.what());
  }
}

}  // namespace easel
