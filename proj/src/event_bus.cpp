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

#include "easel/event_bus.hpp"

#include <algorithm>

namespace easel {

json BusEvent::to_json() const { return json{{"seq", seq}, {"type", type}, {"data", data}, {"at", at}}; }

BusEvent resync_event() { return {0, "resync", json::object(), 0}; }

std::optional<BusEvent> EventBus::Subscription::next(std::chrono::milliseconds timeout) {
  std::unique_lock lk(mu_);
  cv_.wait_for(lk, timeout, [&] { return overflowed_ || !queue_.empty() || closed_; });
  if (overflowed_) {
    overflowed_ = false;
    return resync_event();
  }
  if (queue_.empty()) return std::nullopt;
  auto e = std::move(queue_.front());
  queue_.pop_front();
  return e;
}

bool EventBus::Subscription::closed() const {
  std::lock_guard lk(mu_);
  return closed_ && queue_.empty() && !overflowed_;
}

void EventBus::Subscription::push(const BusEvent& e) {
  {
    std::lock_guard lk(mu_);
    if (closed_) return;
    if (overflowed_) return;  // dropping until the reader resyncs
    if (queue_.size() >= capacity_) {
      queue_.clear();
      overflowed_ = true;
    } else {
      queue_.push_back(e);
    }
  }
  cv_.notify_all();
}

void EventBus::Subscription::close() {
  {
    std::lock_guard lk(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

EventBus::~EventBus() { close(); }

std::shared_ptr<EventBus::Subscription> EventBus::subscribe(std::size_t capacity) {
  std::shared_ptr<Subscription> s(new Subscription(std::max<std::size_t>(1, capacity)));
  std::lock_guard lk(mu_);
  if (closed_) s->close();
  subs_.push_back(s);
  return s;
}

std::shared_ptr<EventBus::Subscription> EventBus::subscribe_from(std::uint64_t after_seq, std::size_t capacity) {
  std::shared_ptr<Subscription> s(new Subscription(std::max<std::size_t>(1, capacity)));
  std::lock_guard lk(mu_);
  const bool gap = !history_.empty() && history_.front().seq > after_seq + 1;
  if (gap) {
    std::lock_guard slk(s->mu_);
    s->overflowed_ = true;
  } else {
    for (const auto& e : history_) {
      if (e.seq > after_seq) s->push(e);
    }
  }
  if (closed_) s->close();
  subs_.push_back(s);
  return s;
}

void EventBus::publish(const BusEvent& e) {
  std::vector<std::shared_ptr<Subscription>> live;
  {
    std::lock_guard lk(mu_);
    if (closed_) return;
    if (e.seq != 0) {
      history_.push_back(e);
      while (history_.size() > history_cap_) history_.pop_front();
    }
    auto it = subs_.begin();
    while (it != subs_.end()) {
      if (auto s = it->lock()) {
        live.push_back(std::move(s));
        ++it;
      } else {
        it = subs_.erase(it);
      }
    }
    // Push while holding the bus lock so every subscriber sees one order.
    for (auto& s : live) s->push(e);
  }
}

void EventBus::close() {
  std::lock_guard lk(mu_);
  closed_ = true;
  for (auto& w : subs_) {
    if (auto s = w.lock()) s->close();
  }
}

std::size_t EventBus::subscriber_count() const {
  std::lock_guard lk(mu_);
  return static_cast<std::size_t>(std::count_if(subs_.begin(), subs_.end(), [](auto& w) { return !w.expired(); }));
}

}  // namespace easel
