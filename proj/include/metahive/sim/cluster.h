// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "metahive/engine.h"
#include "metahive/options.h"
#include "metahive/status.h"

namespace metahive::sim {

// Longest-prefix key routing. The empty prefix (spelled "*" in scripts) is
// the catch-all; routing fails until one is installed so misconfigured
// clusters fail loudly instead of silently dropping traffic.
class Router {
 public:
  void SetRoute(std::string prefix, std::string node);
  Result<std::string> Route(std::string_view key) const;
  bool has_catch_all() const { return routes_.count("") > 0; }
  const std::map<std::string, std::string>& routes() const { return routes_; }

 private:
  std::map<std::string, std::string> routes_;  // prefix -> node name
};

// Direct scan of a node's live SSTs (not the client view: tombstone-typed
// entries are counted, which is exactly what client reads can never see).
struct SstCensus {
  uint64_t files = 0;
  uint64_t entries = 0;
  uint64_t metadata_entries = 0;
  uint64_t put_entries = 0;  // non-metadata puts
  uint64_t tombstones = 0;   // non-metadata deletion markers
  uint64_t data_bytes = 0;   // data-area bytes (before index blocks)
};

Result<SstCensus> CensusEngine(Engine& engine);

// One simulated storage node: an independent engine in its own directory.
class SimNode {
 public:
  SimNode(std::string name, EngineMode mode, std::unique_ptr<Engine> engine)
      : name_(std::move(name)), mode_(mode), engine_(std::move(engine)) {}

  const std::string& name() const { return name_; }
  EngineMode mode() const { return mode_; }
  Engine& engine() { return *engine_; }

 private:
  std::string name_;
  EngineMode mode_;
  std::unique_ptr<Engine> engine_;
};

// An in-process heterogeneous cluster: nodes of different engine modes
// behind one prefix router. Single-threaded and deterministic; every node
// engine runs with background jobs disabled.
class Cluster {
 public:
  // Creates (or reuses) root_dir; node engines live in root_dir/<name>.
  static Result<std::unique_ptr<Cluster>> Create(std::string root_dir,
                                                 Options base);

  // Node names are directory-safe: [A-Za-z0-9_-]+, unique.
  Status AddNode(const std::string& name, EngineMode mode);
  SimNode* FindNode(const std::string& name);
  std::vector<std::string> NodeNames() const;  // sorted

  Router& router() { return router_; }
  const Router& router() const { return router_; }

  // Routed client operations.
  Status Put(std::string_view key, std::string_view value);
  Status Delete(std::string_view key);
  Result<std::string> Get(std::string_view key);  // NotFound surfaces

  // Fan-out scan across every node, merged ascending by key.
  Result<std::vector<Engine::ScanItem>> ScanAll(std::string_view lo,
                                                std::string_view hi);

  // Moves one SST between nodes: copy into `to` (ingest), then drop from
  // `from`. Returns the file number assigned by the destination.
  Result<uint64_t> Migrate(const std::string& from, uint64_t file_no,
                           const std::string& to);

  Status Close();

 private:
  Cluster(std::string root, Options base)
      : root_(std::move(root)), base_(std::move(base)) {}

  Result<Engine*> RouteToEngine(std::string_view key);

  std::string root_;
  Options base_;
  std::map<std::string, std::unique_ptr<SimNode>> nodes_;
  Router router_;
};

}  // namespace metahive::sim
