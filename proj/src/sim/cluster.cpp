// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "metahive/sim/cluster.h"

#include <algorithm>

#include "metahive/env.h"
#include "metahive/metadata.h"
#include "metahive/table_reader.h"

namespace metahive::sim {

void Router::SetRoute(std::string prefix, std::string node) {
  routes_[std::move(prefix)] = std::move(node);
}

Result<std::string> Router::Route(std::string_view key) const {
  // std::map orders prefixes ascending; walk from the longest candidate
  // down by checking all stored prefixes that prefix the key. The map stays
  // small (one entry per routing rule), so a linear scan is fine and keeps
  // the semantics obvious.
  const std::string* best = nullptr;
  size_t best_len = 0;
  for (const auto& [prefix, node] : routes_) {
    if (key.substr(0, prefix.size()) != prefix) continue;
    if (best == nullptr || prefix.size() >= best_len) {
      best = &node;
      best_len = prefix.size();
    }
  }
  if (best == nullptr) {
    return Status::InvalidArgument("no route for key (missing catch-all?)");
  }
  return *best;
}

Result<SstCensus> CensusEngine(Engine& engine) {
  SstCensus census;
  for (const Engine::LiveFile& file : engine.ListLiveFiles()) {
    auto reader = TableReader::Open(file.path);
    if (!reader.ok()) return reader.status();
    census.files++;
    census.data_bytes += (*reader)->footer().index_offset;
    std::vector<KVEntry> entries;
    Status s = (*reader)->ReadAllEntries(&entries);
    if (!s.ok()) return s;
    for (const KVEntry& e : entries) {
      census.entries++;
      if (IsMetadataEntry(e)) {
        census.metadata_entries++;
      } else if (e.key.type == EntryType::kPut) {
        census.put_entries++;
      } else {
        census.tombstones++;
      }
    }
  }
  return census;
}

Result<std::unique_ptr<Cluster>> Cluster::Create(std::string root_dir,
                                                 Options base) {
  Status vs = base.Validate();
  if (!vs.ok()) return vs;
  Status ds = CreateDirIfMissing(root_dir);
  if (!ds.ok()) return ds;
  // Determinism contract: the simulator is single-threaded.
  base.background_jobs = false;
  return std::unique_ptr<Cluster>(
      new Cluster(std::move(root_dir), std::move(base)));
}

Status Cluster::AddNode(const std::string& name, EngineMode mode) {
  if (name.empty()) return Status::InvalidArgument("empty node name");
  for (char c : name) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '_' || c == '-';
    if (!ok) {
      return Status::InvalidArgument("node name must be [A-Za-z0-9_-]+: " +
                                     name);
    }
  }
  if (nodes_.count(name)) {
    return Status::InvalidArgument("duplicate node name: " + name);
  }
  Options opts = base_;
  opts.mode = mode;
  auto engine = Engine::Open(root_ + "/" + name, opts);
  if (!engine.ok()) return engine.status();
  nodes_[name] =
      std::make_unique<SimNode>(name, mode, std::move(engine.value()));
  return Status::OK();
}

SimNode* Cluster::FindNode(const std::string& name) {
  auto it = nodes_.find(name);
  return it == nodes_.end() ? nullptr : it->second.get();
}

std::vector<std::string> Cluster::NodeNames() const {
  std::vector<std::string> names;
  names.reserve(nodes_.size());
  for (const auto& [name, node] : nodes_) names.push_back(name);
  return names;  // map iteration is already sorted
}

Result<Engine*> Cluster::RouteToEngine(std::string_view key) {
  auto routed = router_.Route(key);
  if (!routed.ok()) return routed.status();
  SimNode* node = FindNode(*routed);
  if (node == nullptr) {
    return Status::InvalidArgument("route names unknown node: " + *routed);
  }
  return &node->engine();
}

Status Cluster::Put(std::string_view key, std::string_view value) {
  auto engine = RouteToEngine(key);
  if (!engine.ok()) return engine.status();
  return (*engine)->Put(key, value).status();
}

Status Cluster::Delete(std::string_view key) {
  auto engine = RouteToEngine(key);
  if (!engine.ok()) return engine.status();
  return (*engine)->Delete(key).status();
}

Result<std::string> Cluster::Get(std::string_view key) {
  auto engine = RouteToEngine(key);
  if (!engine.ok()) return engine.status();
  return (*engine)->Get(key);
}

Result<std::vector<Engine::ScanItem>> Cluster::ScanAll(std::string_view lo,
                                                       std::string_view hi) {
  std::vector<Engine::ScanItem> merged;
  for (const auto& [name, node] : nodes_) {
    auto items = node->engine().Scan(lo, hi);
    if (!items.ok()) return items.status();
    merged.insert(merged.end(), items->begin(), items->end());
  }
  std::stable_sort(
      merged.begin(), merged.end(),
      [](const Engine::ScanItem& a, const Engine::ScanItem& b) {
        return a.key < b.key;
      });
  return merged;
}

Result<uint64_t> Cluster::Migrate(const std::string& from, uint64_t file_no,
                                  const std::string& to) {
  SimNode* src = FindNode(from);
  if (src == nullptr) return Status::InvalidArgument("unknown node: " + from);
  SimNode* dst = FindNode(to);
  if (dst == nullptr) return Status::InvalidArgument("unknown node: " + to);
  if (src == dst) {
    return Status::InvalidArgument("migration source equals destination");
  }

  std::string path;
  for (const Engine::LiveFile& file : src->engine().ListLiveFiles()) {
    if (file.file_no == file_no) {
      path = file.path;
      break;
    }
  }
  if (path.empty()) {
    return Status::NotFound("node " + from + " has no live file " +
                            std::to_string(file_no));
  }

  // Ingest first, drop second: a failure in between leaves a duplicate
  // (harmless, keys are identical) rather than a hole.
  auto ingested = dst->engine().IngestSst(path);
  if (!ingested.ok()) return ingested.status();
  Status dropped = src->engine().DropFile(file_no);
  if (!dropped.ok()) return dropped;
  return ingested->file_no;
}

Status Cluster::Close() {
  Status first = Status::OK();
  for (auto& [name, node] : nodes_) {
    Status s = node->engine().Close();
    if (!s.ok() && first.ok()) first = s;
  }
  return first;
}

}  // namespace metahive::sim
