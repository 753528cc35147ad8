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

#include "easel/http_service.hpp"

#include <httplib.h>

#include <atomic>
#include <thread>

#include "easel/engine.hpp"
#include "easel/event_bus.hpp"
#include "easel/projections.hpp"
#include "easel/provenance.hpp"

namespace easel {

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownAsset:
    case ErrorCode::UnknownPage:
    case ErrorCode::UnknownItem:
    case ErrorCode::UnknownNode:
    case ErrorCode::UnknownJob:
    case ErrorCode::UnknownRun:
    case ErrorCode::UnknownCollection:
    case ErrorCode::UnknownEntry:
    case ErrorCode::UnknownEasel:
    case ErrorCode::UnknownTemplate:
      return 404;
    case ErrorCode::MalformedPayload:
    case ErrorCode::UndecodablePayload:
      return 400;
    case ErrorCode::UnsupportedKind:
      return 415;
    case ErrorCode::NotDone:
    case ErrorCode::NotCancellable:
      return 409;
    case ErrorCode::BackendUnavailable:
      return 503;
    case ErrorCode::GenerationFailed:
      return 502;
    case ErrorCode::InvalidTemplate:
    case ErrorCode::InvalidGraph:
    case ErrorCode::CorruptJournal:
    case ErrorCode::Io:
      return 500;
    default:
      return 422;
  }
}

json error_body(const Error& e) {
  return json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}, {"violations", e.violations()}};
}

namespace {

using httplib::Request;
using httplib::Response;

json to_json_value(const HistoryEntry& h) {
  return json{{"position", h.position},   {"item", h.item},         {"asset", h.asset},
              {"node", h.node},           {"page", h.page},         {"created_at", h.created_at},
              {"canvas_position", h.canvas_position}};
}

json to_json_value(const TrailPoint& t) {
  return json{{"at", t.at}, {"centroid", t.centroid}, {"events", t.events}};
}

json related_json(const std::vector<RelatedItem>& v) {
  json out = json::array();
  for (const auto& r : v) {
    out.push_back({{"node", r.node},
                   {"item", r.item.empty() ? json(nullptr) : json(r.item)},
                   {"role", std::string(to_string(r.role))}});
  }
  return out;
}

json to_json_value(const TimelineEntry& t) {
  return json{{"item", t.item},
              {"node", t.node},
              {"created_at", t.created_at},
              {"x", t.x},
              {"parents", related_json(t.parents)},
              {"children", related_json(t.children)}};
}

template <class T>
json array_of(const std::vector<T>& v) {
  json out = json::array();
  for (const auto& x : v) {
    if constexpr (requires { to_json_value(x); }) {
      out.push_back(to_json_value(x));
    } else {
      out.push_back(x);
    }
  }
  return out;
}

json parse_body(const Request& req) {
  if (req.body.empty()) return json::object();
  json j = json::parse(req.body, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::MalformedPayload, "request body is not valid JSON");
  if (!j.is_object()) throw Error(ErrorCode::MalformedPayload, "request body must be a JSON object");
  return j;
}

std::string key_of(const Request& req) { return req.get_header_value("Idempotency-Key"); }

std::string param(const Request& req, const std::string& name) {
  auto it = req.path_params.find(name);
  return it == req.path_params.end() ? std::string{} : it->second;
}

template <class T>
std::optional<T> query(const Request& req, const std::string& name) {
  if (!req.has_param(name)) return std::nullopt;
  const auto s = req.get_param_value(name);
  try {
    if constexpr (std::is_same_v<T, std::string>) {
      return s;
    } else if constexpr (std::is_same_v<T, bool>) {
      return s == "1" || s == "true";
    } else if constexpr (std::is_floating_point_v<T>) {
      return static_cast<T>(std::stod(s));
    } else {
      return static_cast<T>(std::stoll(s));
    }
  } catch (const std::exception&) {
    throw Error(ErrorCode::MalformedPayload, "query parameter '" + name + "' is not a valid value");
  }
}

Placement placement_from(const json& j) {
  Placement p;
  if (j.contains("page") && !j.at("page").is_null()) p.page = PageId(j.at("page").get<std::string>());
  if (j.contains("anchor") && !j.at("anchor").is_null()) p.anchor = j.at("anchor").get<Vec2>();
  return p;
}

AssetKind kind_from_mime(const std::string& mime) {
  const auto base = mime.substr(0, mime.find(';'));
  if (base.rfind("image/", 0) == 0) return AssetKind::image;
  if (base.rfind("video/", 0) == 0) return AssetKind::video;
  if (base.rfind("audio/", 0) == 0) return AssetKind::audio;
  if (base.rfind("text/", 0) == 0) return AssetKind::text;
  if (base == "model/gltf-binary") return AssetKind::model3d;
  return AssetKind::image;
}

void send_json(Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(Response& res, const Error& e) { send_json(res, error_body(e), http_status_for(e.code())); }

// Runs a handler and maps every failure to a JSON error response.
template <class F>
void guard(Response& res, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    send_error(res, e);
  } catch (const json::exception& e) {
    send_error(res, Error(ErrorCode::MalformedPayload, e.what()));
  } catch (const std::exception& e) {
    send_json(res, {{"error", "Internal"}, {"message", e.what()}, {"violations", json::array()}}, 500);
  }
}

std::string sse_frame(const BusEvent& e) {
  std::string out;
  if (e.seq > 0) out += "id: " + std::to_string(e.seq) + "\n";
  out += "event: " + e.type + "\n";
  out += "data: " + e.to_json().dump() + "\n\n";
  return out;
}

}  // namespace

struct HttpService::Impl {
  Engine& engine;
  Options opts;
  httplib::Server server;
  std::thread thread;
  std::atomic<bool> stopping{false};
  int port = 0;

  Impl(Engine& e, Options o) : engine(e), opts(o) {
    server.new_task_queue = [n = opts.worker_threads] { return new httplib::ThreadPool(n); };
    routes();
  }

  using Handler = std::function<void(const Request&, Response&)>;

  // JSON handler: the callback returns the response body.
  template <class F>
  Handler J(F f, int status = 200) {
    return [f, status](const Request& req, Response& res) { guard(res, [&] { send_json(res, f(req), status); }); };
  }

  void routes();
  void events(const Request& req, Response& res);
};

void HttpService::Impl::routes() {
  Engine& E = engine;
  auto& S = server;

  S.Get("/api/health", J([](const Request&) { return json{{"ok", true}}; }));
  S.Get("/api/state", J([&E](const Request&) { return E.state_json(); }));
  S.Get("/api/events", [this](const Request& req, Response& res) { events(req, res); });

  // Pages.
  S.Get("/api/pages", J([&E](const Request&) { return json(E.pages()); }));
  S.Post("/api/pages", J([&E](const Request& r) {
           const auto b = parse_body(r);
           return json(E.create_page(b.value("name", std::string("Untitled")), key_of(r)));
         }, 201));

  // Items.
  S.Get("/api/items", J([&E](const Request& r) {
          std::optional<PageId> page;
          if (auto p = query<std::string>(r, "page")) page = PageId(*p);
          return json(E.items(page, query<bool>(r, "include_hidden").value_or(false)));
        }));
  S.Post("/api/items", J([&E](const Request& r) {
           const auto b = parse_body(r);
           return json(E.place_item(AssetId(b.at("asset").get<std::string>()),
                                    PageId(b.value("page", std::string{})), b.value("position", Vec2{}),
                                    b.at("size").get<Vec2>(), key_of(r)));
         }, 201));
  S.Get("/api/items/:id", J([&E](const Request& r) { return json(E.item(ItemId(param(r, "id")))); }));
  S.Patch("/api/items/:id", J([&E](const Request& r) {
            const auto b = parse_body(r);
            ItemPatch p;
            if (b.contains("position")) p.position = b.at("position").get<Vec2>();
            if (b.contains("size")) p.size = b.at("size").get<Vec2>();
            if (b.contains("page")) p.page = PageId(b.at("page").get<std::string>());
            if (b.contains("z_order")) p.z_order = b.at("z_order").get<std::int64_t>();
            return json(E.update_item(ItemId(param(r, "id")), p, key_of(r)));
          }));
  S.Post("/api/items/:id/touch",
         J([&E](const Request& r) { return json(E.touch(ItemId(param(r, "id")), key_of(r))); }));
  S.Post("/api/items/:id/emphasis", J([&E](const Request& r) {
           const auto b = parse_body(r);
           return json(E.set_emphasis(ItemId(param(r, "id")), b.at("level").get<double>(), key_of(r)));
         }));
  S.Delete("/api/items/:id",
           J([&E](const Request& r) { return json(E.delete_item(ItemId(param(r, "id")), key_of(r))); }));
  S.Post("/api/items/:id/restore", J([&E](const Request& r) {
           const ItemId id(param(r, "id"));
           auto n = E.node_for_item(id);
           if (!n) throw Error(ErrorCode::UnknownItem, "item has no provenance node: " + id.str());
           return json(E.set_deleted(n->id, false, key_of(r)));
         }));
  S.Get("/api/items/:id/node", J([&E](const Request& r) {
          const ItemId id(param(r, "id"));
          auto n = E.node_for_item(id);
          if (!n) throw Error(ErrorCode::UnknownItem, "item has no provenance node: " + id.str());
          return json(*n);
        }));
  S.Post("/api/pack", J([&E](const Request& r) {
           const auto b = parse_body(r);
           std::vector<ItemId> ids;
           for (const auto& i : b.at("items")) ids.emplace_back(i.get<std::string>());
           json out = json::object();
           for (const auto& [id, pos] : E.pack_grid(ids, b.value("gap", 16.0), key_of(r))) out[id.str()] = pos;
           return out;
         }));

  // Assets.
  S.Get("/api/assets", J([&E](const Request&) { return json(E.assets()); }));
  S.Post("/api/assets", [&E](const Request& r, Response& res) {
    guard(res, [&] {
      Bytes bytes;
      std::string mime = r.get_header_value("Content-Type");
      std::optional<std::string> kind = query<std::string>(r, "kind");
      if (r.is_multipart_form_data()) {
        if (!r.has_file("file")) throw Error(ErrorCode::MalformedPayload, "multipart upload needs a 'file' part");
        const auto f = r.get_file_value("file");
        bytes.assign(f.content.begin(), f.content.end());
        mime = f.content_type;
        if (r.has_file("kind")) kind = r.get_file_value("kind").content;
      } else {
        bytes.assign(r.body.begin(), r.body.end());
      }
      const AssetKind k = kind ? asset_kind_from_string(*kind) : kind_from_mime(mime);
      send_json(res, json(E.ingest(bytes, k, key_of(r))), 201);
    });
  });
  S.Get("/api/assets/:id", J([&E](const Request& r) { return json(E.asset(AssetId(param(r, "id")))); }));
  S.Get("/api/assets/:id/blob", [&E](const Request& r, Response& res) {
    guard(res, [&] {
      auto b = E.asset_blob(AssetId(param(r, "id")));
      res.set_header("Content-Disposition", "inline; filename=\"" + b.filename + "\"");
      res.set_content(std::string(b.bytes.begin(), b.bytes.end()), b.mime);
    });
  });
  S.Get("/api/assets/:id/control/:kind", [&E](const Request& r, Response& res) {
    guard(res, [&] {
      auto b = E.control_map_blob(AssetId(param(r, "id")), control_kind_from_string(param(r, "kind")));
      res.set_content(std::string(b.bytes.begin(), b.bytes.end()), b.mime);
    });
  });

  // Local runs and quick operations.
  S.Post("/api/collage", J([&E](const Request& r) {
           const auto b = parse_body(r);
           return json(E.flatten_collage(b.get<CollageRequest>(), placement_from(b), key_of(r)));
         }, 201));
  S.Post("/api/sketch", J([&E](const Request& r) {
           const auto b = parse_body(r);
           return json(E.rasterize_sketch(b.get<SketchRequest>(), PageId(b.value("page", std::string{})), key_of(r)));
         }, 201));
  S.Post("/api/quick-ops", J([&E](const Request& r) {
           const auto b = parse_body(r);
           return json(E.quick_op(b.get<QuickOpRequest>(), placement_from(b), key_of(r)));
         }, 201));

  // Easels.
  S.Get("/api/easels", J([&E](const Request&) { return json(E.easels()); }));
  auto save = [&E](const Request& r, EaselId id) {
    const auto b = parse_body(r);
    EaselDraft d;
    d.id = std::move(id);
    d.page = PageId(b.value("page", std::string{}));
    d.position = b.value("position", Vec2{});
    d.size = b.value("size", Vec2{320, 480});
    d.spec = b.at("spec").get<EaselSpec>();
    return json(E.save_easel(d, key_of(r)));
  };
  S.Post("/api/easels", J([save](const Request& r) { return save(r, EaselId{}); }, 201));
  S.Put("/api/easels/:id", J([save, &E](const Request& r) {
          const EaselId id(param(r, "id"));
          E.easel(id);
          return save(r, id);
        }));
  S.Get("/api/easels/:id", J([&E](const Request& r) { return json(E.easel(EaselId(param(r, "id")))); }));
  S.Delete("/api/easels/:id", J([&E](const Request& r) {
             E.delete_easel(EaselId(param(r, "id")), key_of(r));
             return json{{"deleted", param(r, "id")}};
           }));
  S.Post("/api/easels/:id/compile",
         J([&E](const Request& r) { return E.compile_easel(EaselId(param(r, "id"))).to_json(); }));
  S.Post("/api/easels/:id/generate",
         J([&E](const Request& r) { return json(E.generate_easel(EaselId(param(r, "id")), key_of(r))); }, 201));
  S.Post("/api/compile", J([&E](const Request& r) {
           const auto b = parse_body(r);
           return E.compile(b.at("spec").get<EaselSpec>()).to_json();
         }));
  S.Post("/api/generate", J([&E](const Request& r) {
           const auto b = parse_body(r);
           return json(E.generate(b.at("spec").get<EaselSpec>(), placement_from(b), key_of(r)));
         }, 201));

  // Runs and jobs.
  S.Get("/api/runs", J([&E](const Request&) { return json(E.runs()); }));
  S.Get("/api/runs/:id", J([&E](const Request& r) { return json(E.run(RunId(param(r, "id")))); }));
  S.Get("/api/jobs/:id", J([&E](const Request& r) { return to_json(E.job(JobId(param(r, "id")))); }));
  S.Get("/api/jobs/:id/events", J([&E](const Request& r) {
          const auto from = query<std::size_t>(r, "from").value_or(0);
          const auto wait = std::chrono::milliseconds(std::min<long long>(query<long long>(r, "timeout_ms").value_or(0), 30000));
          json out = json::array();
          for (const auto& e : E.watch(JobId(param(r, "id")), from, wait)) out.push_back(to_json(e));
          return out;
        }));
  S.Post("/api/jobs/:id/cancel", J([&E](const Request& r) { return to_json(E.cancel(JobId(param(r, "id")))); }));
  S.Get("/api/jobs/:id/outputs", J([&E](const Request& r) { return json(E.fetch_outputs(JobId(param(r, "id")))); }));

  // Provenance.
  S.Get("/api/nodes/:id", J([&E](const Request& r) { return json(E.node(NodeId(param(r, "id")))); }));
  S.Patch("/api/nodes/:id", J([&E](const Request& r) {
            const auto b = parse_body(r);
            return json(E.set_deleted(NodeId(param(r, "id")), b.at("deleted").get<bool>(), key_of(r)));
          }));
  S.Get("/api/nodes/:id/lineage", J([&E](const Request& r) { return to_json(E.lineage(NodeId(param(r, "id")))); }));
  S.Get("/api/nodes/:id/recreate", J([&E](const Request& r) {
          const auto spec = E.recreate(NodeId(param(r, "id")));
          const auto graph = E.compile_run_spec(spec);
          return json{{"spec", run_spec_to_json(spec)}, {"graph", graph ? graph->to_json() : json(nullptr)}};
        }));
  S.Post("/api/nodes/:id/recreate", J([&E](const Request& r) {
           const auto b = parse_body(r);
           return json(E.recreate_easel(NodeId(param(r, "id")), PageId(b.value("page", std::string{})),
                                        b.value("position", Vec2{}), key_of(r)));
         }, 201));
  S.Get("/api/history", J([&E](const Request& r) {
          return array_of(E.history(query<std::int64_t>(r, "cursor").value_or(0)));
        }));
  S.Get("/api/trail", J([&E](const Request& r) {
          std::optional<Timestamp> bucket;
          if (auto s = query<double>(r, "bucket_seconds")) {
            if (!(*s > 0)) throw Error(ErrorCode::OutOfRange, "bucket_seconds must be positive");
            bucket = static_cast<Timestamp>(*s * 1e6);
          }
          return array_of(E.trail(bucket));
        }));
  S.Get("/api/heatmap", J([&E](const Request&) {
          json out = json::object();
          for (const auto& [id, w] : E.heatmap()) out[id.str()] = w;
          return out;
        }));
  S.Get("/api/timeline", J([&E](const Request& r) {
          return array_of(E.timeline(query<double>(r, "width").value_or(1000.0)));
        }));
  S.Get("/api/provenance", J([&E](const Request&) { return E.provenance_export(); }));

  // Collections and exhibit.
  S.Get("/api/collections", J([&E](const Request&) { return json(E.collections()); }));
  S.Post("/api/collections", J([&E](const Request& r) {
           const auto b = parse_body(r);
           return json(E.create_collection(b.at("name").get<std::string>(),
                                           b.value("members", std::vector<AssetId>{}),
                                           b.value("tags", std::vector<std::string>{}), key_of(r)));
         }, 201));
  S.Get("/api/collections/:id",
        J([&E](const Request& r) { return json(E.collection(CollectionId(param(r, "id")))); }));
  S.Post("/api/collections/:id/members", J([&E](const Request& r) {
           const auto b = parse_body(r);
           return json(E.add_to_collection(CollectionId(param(r, "id")), b.at("members").get<std::vector<AssetId>>(),
                                           key_of(r)));
         }));
  S.Post("/api/collections/:id/pull", J([&E](const Request& r) {
           const auto b = parse_body(r);
           std::optional<Vec2> size;
           if (b.contains("size")) size = b.at("size").get<Vec2>();
           return json(E.pull_from_collection(CollectionId(param(r, "id")), AssetId(b.at("asset").get<std::string>()),
                                              PageId(b.value("page", std::string{})), b.value("position", Vec2{}),
                                              size, key_of(r)));
         }, 201));
  S.Get("/api/exhibit", J([&E](const Request&) { return E.exhibit_manifest(); }));
  S.Post("/api/exhibit", J([&E](const Request& r) {
           const auto b = parse_body(r);
           std::optional<std::size_t> index;
           if (b.contains("index") && !b.at("index").is_null()) index = b.at("index").get<std::size_t>();
           return json(E.exhibit_add(AssetId(b.at("asset").get<std::string>()), b.value("caption", std::string{}),
                                     index, key_of(r)));
         }, 201));
  S.Post("/api/exhibit/:id/move", J([&E](const Request& r) {
           const auto b = parse_body(r);
           E.exhibit_reorder(EntryId(param(r, "id")), b.at("index").get<std::size_t>(), key_of(r));
           return E.exhibit_manifest();
         }));
  S.Patch("/api/exhibit/:id", J([&E](const Request& r) {
            const auto b = parse_body(r);
            E.exhibit_caption(EntryId(param(r, "id")), b.at("caption").get<std::string>(), key_of(r));
            return E.exhibit_manifest();
          }));
  S.Delete("/api/exhibit/:id", J([&E](const Request& r) {
             E.exhibit_remove(EntryId(param(r, "id")), key_of(r));
             return E.exhibit_manifest();
           }));

  S.Get("/api/search", J([&E](const Request& r) {
          json out = json::array();
          for (const auto& h : E.search(query<std::string>(r, "q").value_or(""),
                                        query<std::size_t>(r, "limit").value_or(50))) {
            out.push_back({{"asset", h.asset}, {"score", h.score}});
          }
          return out;
        }));

  S.set_error_handler([](const Request&, Response& res) {
    if (!res.body.empty()) return;
    send_json(res, {{"error", res.status == 404 ? "NotFound" : "HttpError"},
                    {"message", httplib::status_message(res.status)},
                    {"violations", json::array()}},
              res.status);
  });
}

// Server-sent events. Resumes after Last-Event-ID (or ?after=) when the bus
// still holds those events; otherwise the stream opens with "resync".
void HttpService::Impl::events(const Request& req, Response& res) {
  std::optional<std::uint64_t> after;
  guard(res, [&] {
    if (auto a = query<std::uint64_t>(req, "after")) after = *a;
    const auto h = req.get_header_value("Last-Event-ID");
    if (!h.empty()) {
      if (h.find_first_not_of("0123456789") != std::string::npos || h.size() > 19) {
        throw Error(ErrorCode::MalformedPayload, "Last-Event-ID must be an event sequence number");
      }
      after = std::stoull(h);
    }
  });
  if (res.status >= 400) return;
  auto sub = after ? engine.bus().subscribe_from(*after, opts.event_buffer) : engine.bus().subscribe(opts.event_buffer);
  res.set_header("Cache-Control", "no-cache");
  auto last_write = std::make_shared<std::chrono::steady_clock::time_point>(std::chrono::steady_clock::now());
  res.set_chunked_content_provider("text/event-stream", [this, sub, last_write](std::size_t, httplib::DataSink& sink) {
    if (stopping || sub->closed() || !sink.is_writable()) {
      sink.done();
      return true;
    }
    if (auto e = sub->next(std::chrono::milliseconds(200))) {
      const auto frame = sse_frame(*e);
      *last_write = std::chrono::steady_clock::now();
      return sink.write(frame.data(), frame.size());
    }
    if (std::chrono::steady_clock::now() - *last_write >= opts.keepalive) {
      *last_write = std::chrono::steady_clock::now();
      static constexpr char ping[] = ": keep-alive\n\n";
      return sink.write(ping, sizeof(ping) - 1);
    }
    return true;
  });
}

HttpService::HttpService(Engine& engine) : HttpService(engine, Options{}) {}

HttpService::HttpService(Engine& engine, Options opts) : impl_(std::make_unique<Impl>(engine, opts)) {}

HttpService::~HttpService() { stop(); }

int HttpService::start(const std::string& host, int port) {
  auto& s = impl_->server;
  const int bound = port == 0 ? s.bind_to_any_port(host) : (s.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error(ErrorCode::Io, "cannot bind " + host + ":" + std::to_string(port));
  impl_->port = bound;
  impl_->thread = std::thread([&s] { s.listen_after_bind(); });
  s.wait_until_ready();
  return bound;
}

void HttpService::run(const std::string& host, int port) {
  auto& s = impl_->server;
  if (!s.bind_to_port(host, port)) throw Error(ErrorCode::Io, "cannot bind " + host + ":" + std::to_string(port));
  impl_->port = port;
  s.listen_after_bind();
}

void HttpService::stop() {
  if (!impl_) return;
  impl_->stopping = true;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int HttpService::port() const { return impl_->port; }

}  // namespace easel
