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

#include <chrono>
#include <condition_variable>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "easel/canonical_json.hpp"
#include "easel/ids.hpp"

namespace easel {

struct BusEvent {
  std::uint64_t seq = 0;  // journal line; 0 for transient events (job progress)
  std::string type;
  json data;
  Timestamp at = 0;

  json to_json() const;
};

// Fan-out of document events to independent subscribers. Each subscriber has
// a bounded buffer; when it overflows the buffer is dropped and the next read
// yields a single "resync" event telling the client to refetch state.
class EventBus {
 public:
  class Subscription {
   public:
    // nullopt on timeout or after the bus closed.
    std::optional<BusEvent> next(std::chrono::milliseconds timeout);
    bool closed() const;

   private:
    friend class EventBus;
    explicit Subscription(std::size_t capacity) : capacity_(capacity) {}
    void push(const BusEvent& e);
    void close();

    mutable std::mutex mu_;
    std::condition_variable cv_;
    std::deque<BusEvent> queue_;
    std::size_t capacity_;
    bool overflowed_ = false;
    bool closed_ = false;
  };

  explicit EventBus(std::size_t history = 4096) : history_cap_(history) {}
  ~EventBus();

  std::shared_ptr<Subscription> subscribe(std::size_t capacity = 1024);
  // Subscribes and preloads persisted events after `after_seq`. If they are
  // no longer retained, the subscription starts with a resync event.
  std::shared_ptr<Subscription> subscribe_from(std::uint64_t after_seq, std::size_t capacity = 1024);
  void publish(const BusEvent& e);
  void close();
  std::size_t subscriber_count() const;

 private:
  mutable std::mutex mu_;
  std::vector<std::weak_ptr<Subscription>> subs_;
  std::deque<BusEvent> history_;  // persisted events only
  std::size_t history_cap_;
  bool closed_ = false;
};

BusEvent resync_event();

}  // namespace easel
