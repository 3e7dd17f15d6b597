// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "metahive/sim/scenario.h"

#include <algorithm>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "metahive/hash.h"
#include "metahive/metadata.h"
#include "metahive/workload.h"

namespace metahive::sim {

namespace {

// Prefix+count loads pad the index to fixed width so key order is stable.
constexpr int kLoadPadWidth = 8;

std::vector<std::string> Tokenize(std::string_view line) {
  std::vector<std::string> tokens;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) i++;
    size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') i++;
    if (i > start) tokens.emplace_back(line.substr(start, i - start));
  }
  return tokens;
}

Status ParseUint(const std::string& token, uint64_t* out) {
  if (token.empty()) return Status::InvalidArgument("empty number");
  uint64_t value = 0;
  for (char c : token) {
    if (c < '0' || c > '9') {
      return Status::InvalidArgument("not a number: " + token);
    }
    value = value * 10 + static_cast<uint64_t>(c - '0');
  }
  *out = value;
  return Status::OK();
}

Status ParseProbability(const std::string& token, double* out) {
  try {
    size_t used = 0;
    *out = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
  } catch (const std::exception&) {
    return Status::InvalidArgument("not a probability: " + token);
  }
  if (*out < 0.0 || *out > 1.0) {
    return Status::InvalidArgument("probability out of [0, 1]: " + token);
  }
  return Status::OK();
}

std::string PadIndex(uint64_t i) {
  std::string digits = std::to_string(i);
  if (digits.size() < kLoadPadWidth) {
    digits.insert(0, kLoadPadWidth - digits.size(), '0');
  }
  return digits;
}

Status ArityError(const std::vector<std::string>& tokens, const char* usage) {
  return Status::InvalidArgument("bad " + tokens[0] + " command; usage: " +
                                 usage);
}

}  // namespace

const char kHetero3Scenario[] = R"(# hetero3: one metadata-aware node plus two plain nodes behind a prefix
# router. Exercises hidden siblings, migration in both directions,
# automatic cleanup on plain nodes, adoption of foreign data, and fault
# detection at compaction time.
NODE m0 metahive
NODE l0 legacy
NODE l1 legacy
ROUTE * m0
ROUTE user1 l0
ROUTE user2 l1

# Spread 600 keys across the three nodes, with a little point traffic.
LOAD user0 200 64
LOAD user1 200 64
LOAD user2 200 64
PUT user1hot first
ASSERT get user1hot value first
PUT user1hot second
ASSERT get user1hot value second
DEL user1hot
ASSERT get user1hot missing
FLUSH *
SCAN user0 user3
ASSERT scan_count user0 user3 600
ASSERT leakage 0
COMPACT *
ASSERT leakage 0

# The metadata-aware node's file moves to a plain node. Its checksum
# siblings ride along invisibly and the next compaction purges them.
MIGRATE m0 oldest l0
REASSIGN user0 l0
ASSERT get user000000000 present
COMPACT l0
ASSERT census l0 metadata 0
ASSERT scan_count user0 user3 600
ASSERT leakage 0

# A plain node's file moves to the metadata-aware node, which adopts it:
# the next compaction creates checksum siblings for every key.
MIGRATE l1 oldest m0
REASSIGN user2 m0
COMPACT m0
ASSERT verified m0 all

# Corrupt 2% of the checksum fields; the next compaction must detect and
# repair every one of them in place.
INJECT m0 meta_checksum 0.02
COMPACT m0
ASSERT detected all
ASSERT verified m0 all
ASSERT scan_count user0 user3 600
ASSERT leakage 0
)";

std::string_view FindCannedScenario(std::string_view name) {
  if (name == "hetero3") return kHetero3Scenario;
  return {};
}

ScenarioRunner::ScenarioRunner(std::string root_dir, uint64_t seed,
                               Options base)
    : root_(std::move(root_dir)), rng_(seed), base_(std::move(base)) {}

Result<ScenarioReport> ScenarioRunner::Run(std::string_view script) {
  report_ = ScenarioReport();
  pending_.clear();
  auto created = Cluster::Create(root_, base_);
  if (!created.ok()) return created.status();
  cluster_ = std::move(created.value());

  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= script.size()) {
    size_t eol = script.find('\n', pos);
    if (eol == std::string_view::npos) eol = script.size();
    std::string_view line = script.substr(pos, eol - pos);
    pos = eol + 1;
    line_no++;

    size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<std::string> tokens = Tokenize(line);
    if (tokens.empty()) continue;

    report_.commands++;
    Status s = RunCommand(tokens);
    if (!s.ok()) {
      return Status(s.code(),
                    "line " + std::to_string(line_no) + ": " + s.message());
    }
  }

  Status filled = FillNodeReports();
  if (!filled.ok()) return filled;
  Status closed = cluster_->Close();
  if (!closed.ok()) return closed;
  return report_;
}

Status ScenarioRunner::RunCommand(const std::vector<std::string>& tokens) {
  const std::string& cmd = tokens[0];

  if (cmd == "NODE") {
    if (tokens.size() != 3) return ArityError(tokens, "NODE <name> <mode>");
    EngineMode mode;
    if (tokens[2] == "metahive") {
      mode = EngineMode::kMetaHive;
    } else if (tokens[2] == "legacy") {
      mode = EngineMode::kLegacy;
    } else {
      return Status::InvalidArgument("unknown node mode: " + tokens[2]);
    }
    return cluster_->AddNode(tokens[1], mode);
  }

  if (cmd == "ROUTE" || cmd == "REASSIGN") {
    if (tokens.size() != 3) {
      return ArityError(tokens, "ROUTE <prefix|*> <node>");
    }
    if (cluster_->FindNode(tokens[2]) == nullptr) {
      return Status::InvalidArgument("unknown node: " + tokens[2]);
    }
    std::string prefix = tokens[1] == "*" ? "" : tokens[1];
    cluster_->router().SetRoute(std::move(prefix), tokens[2]);
    return Status::OK();
  }

  if (cmd == "LOAD") {
    if (tokens.size() != 4) {
      return ArityError(tokens, "LOAD <prefix> <count> <value_size>");
    }
    uint64_t count = 0, value_size = 0;
    Status s = ParseUint(tokens[2], &count);
    if (s.ok()) s = ParseUint(tokens[3], &value_size);
    if (!s.ok()) return s;
    // Values are a pure function of (prefix, index) so reruns and reloads
    // are reproducible regardless of interleaved RNG use.
    uint64_t prefix_seed = FindHashFunction(2)->evaluate(tokens[1]);
    for (uint64_t i = 0; i < count; i++) {
      s = cluster_->Put(tokens[1] + PadIndex(i),
                        WorkloadValue(i, value_size, prefix_seed));
      if (!s.ok()) return s;
      report_.loads++;
    }
    return Status::OK();
  }

  if (cmd == "PUT") {
    if (tokens.size() != 3) return ArityError(tokens, "PUT <key> <value>");
    report_.puts++;
    return cluster_->Put(tokens[1], tokens[2]);
  }

  if (cmd == "DEL") {
    if (tokens.size() != 2) return ArityError(tokens, "DEL <key>");
    report_.dels++;
    return cluster_->Delete(tokens[1]);
  }

  if (cmd == "GET") {
    if (tokens.size() != 2) return ArityError(tokens, "GET <key>");
    report_.gets++;
    auto value = cluster_->Get(tokens[1]);
    if (value.ok()) {
      report_.get_hits++;
      return Status::OK();
    }
    if (value.status().code() == Status::Code::kNotFound) {
      report_.get_misses++;
      return Status::OK();
    }
    return value.status();
  }

  if (cmd == "SCAN") {
    if (tokens.size() != 3) return ArityError(tokens, "SCAN <lo> <hi>");
    report_.scans++;
    auto items = cluster_->ScanAll(tokens[1], tokens[2]);
    if (!items.ok()) return items.status();
    report_.scanned_items += items->size();
    for (const Engine::ScanItem& item : *items) {
      if (HasMetadataSuffix(item.key)) report_.leaked_metadata_keys++;
    }
    return Status::OK();
  }

  if (cmd == "FLUSH" || cmd == "COMPACT") {
    if (tokens.size() != 2) return ArityError(tokens, "FLUSH <node|*>");
    std::vector<std::string> names;
    if (tokens[1] == "*") {
      names = cluster_->NodeNames();
    } else {
      names.push_back(tokens[1]);
    }
    for (const std::string& name : names) {
      SimNode* node = cluster_->FindNode(name);
      if (node == nullptr) {
        return Status::InvalidArgument("unknown node: " + name);
      }
      if (cmd == "FLUSH") {
        Status s = node->engine().Flush();
        if (!s.ok()) return s;
        report_.flushes++;
      } else {
        Status s = RunCompact(name);
        if (!s.ok()) return s;
      }
    }
    return Status::OK();
  }

  if (cmd == "MIGRATE") {
    if (tokens.size() != 4) {
      return ArityError(tokens, "MIGRATE <from> <file_no|oldest> <to>");
    }
    SimNode* from = cluster_->FindNode(tokens[1]);
    if (from == nullptr) {
      return Status::InvalidArgument("unknown node: " + tokens[1]);
    }
    auto file_no = ParseFileNo(from, tokens[2]);
    if (!file_no.ok()) return file_no.status();
    auto new_file = cluster_->Migrate(tokens[1], *file_no, tokens[3]);
    if (!new_file.ok()) return new_file.status();
    report_.migrations++;
    // Pending faults ride along with the file.
    auto& from_pending = pending_[tokens[1]];
    auto it = from_pending.find(*file_no);
    if (it != from_pending.end()) {
      std::vector<FaultRecord> moved = std::move(it->second);
      from_pending.erase(it);
      for (FaultRecord& fault : moved) {
        fault.node = tokens[3];
        fault.file_no = *new_file;
      }
      auto& slot = pending_[tokens[3]][*new_file];
      slot.insert(slot.end(), std::make_move_iterator(moved.begin()),
                  std::make_move_iterator(moved.end()));
    }
    return Status::OK();
  }

  if (cmd == "INJECT") {
    if (tokens.size() != 4) {
      return ArityError(tokens, "INJECT <node> <field> <probability>");
    }
    FaultField field;
    Status s = ParseFaultField(tokens[2], &field);
    if (!s.ok()) return s;
    double p = 0;
    s = ParseProbability(tokens[3], &p);
    if (!s.ok()) return s;
    return RunInject(tokens[1], field, p);
  }

  if (cmd == "ASSERT") {
    return RunAssert(tokens);
  }

  return Status::InvalidArgument("unknown command: " + cmd);
}

Status ScenarioRunner::RunCompact(const std::string& node_name) {
  SimNode* node = cluster_->FindNode(node_name);
  if (node == nullptr) {
    return Status::InvalidArgument("unknown node: " + node_name);
  }
  Engine& engine = node->engine();

  SstCensus before;
  if (node->mode() == EngineMode::kLegacy) {
    auto census = CensusEngine(engine);
    if (!census.ok()) return census.status();
    before = *census;
  }

  auto compacted = engine.CompactAll();
  if (!compacted.ok()) return compacted.status();
  std::vector<Engine::CompactionResult> results = std::move(*compacted);
  if (results.empty()) {
    // Data already sits in one level. Push it down once so the command
    // still passes every entry through verification.
    std::vector<Engine::LiveFile> files = engine.ListLiveFiles();
    if (!files.empty()) {
      int lowest = files[0].level;
      for (const Engine::LiveFile& f : files) {
        lowest = std::min(lowest, f.level);
      }
      auto pushed = engine.CompactLevel(lowest);
      if (!pushed.ok()) return pushed.status();
      results.push_back(std::move(*pushed));
    }
  }

  std::set<std::pair<std::string, SequenceNumber>> incidents;
  std::set<uint64_t> consumed;
  for (const Engine::CompactionResult& result : results) {
    report_.compactions++;
    report_.repair_validated += result.repair.validated;
    report_.repair_regenerated += result.repair.regenerated;
    report_.repair_recovered += result.repair.recovered;
    report_.repair_quarantined += result.repair.quarantined;
    report_.repair_metadata_created += result.repair.metadata_created;
    report_.repair_orphans_dropped += result.repair.orphans_dropped;
    for (const RepairIncident& incident : result.repair.incidents) {
      incidents.emplace(incident.user_key, incident.seq);
    }
    consumed.insert(result.input_files.begin(), result.input_files.end());
  }

  auto& node_pending = pending_[node_name];
  for (uint64_t file_no : consumed) {
    auto it = node_pending.find(file_no);
    if (it == node_pending.end()) continue;
    for (const FaultRecord& fault : it->second) {
      bool matched = incidents.count({fault.cluster_key, fault.seq}) > 0;
      if (!fault.detectable) continue;  // coc flips stay silent by design
      if (matched) {
        report_.faults_detected++;
      } else {
        report_.failures.push_back(
            "fault not detected: node=" + node_name +
            " file=" + std::to_string(file_no) + " field=" +
            FaultFieldName(fault.field) + " key=" + fault.cluster_key +
            " seq=" + std::to_string(fault.seq));
      }
    }
    node_pending.erase(it);
  }

  if (node->mode() == EngineMode::kLegacy) {
    auto census = CensusEngine(engine);
    if (!census.ok()) return census.status();
    if (before.metadata_entries > census->metadata_entries) {
      report_.metadata_purged +=
          before.metadata_entries - census->metadata_entries;
    }
  }
  return Status::OK();
}

Status ScenarioRunner::RunInject(const std::string& node_name,
                                 FaultField field, double p) {
  SimNode* node = cluster_->FindNode(node_name);
  if (node == nullptr) {
    return Status::InvalidArgument("unknown node: " + node_name);
  }
  std::vector<Engine::LiveFile> files = node->engine().ListLiveFiles();
  std::sort(files.begin(), files.end(),
            [](const Engine::LiveFile& a, const Engine::LiveFile& b) {
              return a.file_no < b.file_no;
            });
  for (const Engine::LiveFile& file : files) {
    auto stats = InjectFaults(file.path, node_name, file.file_no, field, p,
                              rng_);
    if (!stats.ok()) return stats.status();
    for (FaultRecord& fault : stats->faults) {
      report_.faults_injected++;
      if (fault.detectable) {
        report_.faults_detectable++;
      } else {
        report_.faults_undetectable++;
      }
      pending_[node_name][file.file_no].push_back(std::move(fault));
    }
  }
  return Status::OK();
}

Result<uint64_t> ScenarioRunner::ParseFileNo(SimNode* node,
                                             const std::string& token) {
  if (token != "oldest") {
    uint64_t file_no = 0;
    Status s = ParseUint(token, &file_no);
    if (!s.ok()) return s;
    return file_no;
  }
  std::vector<Engine::LiveFile> files = node->engine().ListLiveFiles();
  if (files.empty()) {
    return Status::NotFound("node " + node->name() + " has no live files");
  }
  uint64_t oldest = files[0].file_no;
  for (const Engine::LiveFile& f : files) {
    oldest = std::min(oldest, f.file_no);
  }
  return oldest;
}

Status ScenarioRunner::RunAssert(const std::vector<std::string>& tokens) {
  report_.assertions++;
  auto fail = [this](std::string message) {
    report_.failures.push_back(std::move(message));
    return Status::OK();
  };

  if (tokens.size() >= 2 && tokens[1] == "get") {
    // ASSERT get <key> value <v> | present | missing
    if (tokens.size() == 4 && tokens[3] == "missing") {
      auto value = cluster_->Get(tokens[2]);
      if (value.ok()) {
        return fail("assert get " + tokens[2] + ": expected missing, got '" +
                    *value + "'");
      }
      if (value.status().code() != Status::Code::kNotFound) {
        return value.status();
      }
      return Status::OK();
    }
    if (tokens.size() == 4 && tokens[3] == "present") {
      auto value = cluster_->Get(tokens[2]);
      if (!value.ok()) {
        if (value.status().code() != Status::Code::kNotFound) {
          return value.status();
        }
        return fail("assert get " + tokens[2] + ": expected present, missing");
      }
      return Status::OK();
    }
    if (tokens.size() == 5 && tokens[3] == "value") {
      auto value = cluster_->Get(tokens[2]);
      if (!value.ok()) {
        if (value.status().code() != Status::Code::kNotFound) {
          return value.status();
        }
        return fail("assert get " + tokens[2] + ": expected '" + tokens[4] +
                    "', got missing");
      }
      if (*value != tokens[4]) {
        return fail("assert get " + tokens[2] + ": expected '" + tokens[4] +
                    "', got '" + *value + "'");
      }
      return Status::OK();
    }
    return ArityError(tokens, "ASSERT get <key> value <v>|present|missing");
  }

  if (tokens.size() == 3 && tokens[1] == "leakage") {
    uint64_t expect = 0;
    Status s = ParseUint(tokens[2], &expect);
    if (!s.ok()) return s;
    if (report_.leaked_metadata_keys != expect) {
      return fail("assert leakage: expected " + tokens[2] + ", got " +
                  std::to_string(report_.leaked_metadata_keys));
    }
    return Status::OK();
  }

  if (tokens.size() == 3 && tokens[1] == "detected") {
    if (tokens[2] == "all") {
      if (report_.faults_detected != report_.faults_detectable) {
        return fail("assert detected all: " +
                    std::to_string(report_.faults_detected) + " of " +
                    std::to_string(report_.faults_detectable));
      }
      return Status::OK();
    }
    uint64_t expect = 0;
    Status s = ParseUint(tokens[2], &expect);
    if (!s.ok()) return s;
    if (report_.faults_detected != expect) {
      return fail("assert detected: expected " + tokens[2] + ", got " +
                  std::to_string(report_.faults_detected));
    }
    return Status::OK();
  }

  if (tokens.size() == 5 && tokens[1] == "census" && tokens[3] == "metadata") {
    SimNode* node = cluster_->FindNode(tokens[2]);
    if (node == nullptr) {
      return Status::InvalidArgument("unknown node: " + tokens[2]);
    }
    uint64_t expect = 0;
    Status s = ParseUint(tokens[4], &expect);
    if (!s.ok()) return s;
    auto census = CensusEngine(node->engine());
    if (!census.ok()) return census.status();
    if (census->metadata_entries != expect) {
      return fail("assert census " + tokens[2] + " metadata: expected " +
                  tokens[4] + ", got " +
                  std::to_string(census->metadata_entries));
    }
    return Status::OK();
  }

  if (tokens.size() == 4 && tokens[1] == "verified" && tokens[3] == "all") {
    SimNode* node = cluster_->FindNode(tokens[2]);
    if (node == nullptr) {
      return Status::InvalidArgument("unknown node: " + tokens[2]);
    }
    auto items = node->engine().Scan("", "");
    if (!items.ok()) return items.status();
    uint64_t bad = 0;
    std::string first_bad;
    for (const Engine::ScanItem& item : *items) {
      auto verified = node->engine().GetVerified(item.key);
      if (!verified.ok()) return verified.status();
      if (verified->verdict != Verdict::kValidated ||
          !verified->had_metadata) {
        bad++;
        if (first_bad.empty()) first_bad = item.key;
      }
    }
    if (bad > 0) {
      return fail("assert verified " + tokens[2] + " all: " +
                  std::to_string(bad) + " of " +
                  std::to_string(items->size()) +
                  " keys unverified, first: " + first_bad);
    }
    return Status::OK();
  }

  if (tokens.size() == 5 && tokens[1] == "scan_count") {
    uint64_t expect = 0;
    Status s = ParseUint(tokens[4], &expect);
    if (!s.ok()) return s;
    auto items = cluster_->ScanAll(tokens[2], tokens[3]);
    if (!items.ok()) return items.status();
    for (const Engine::ScanItem& item : *items) {
      if (HasMetadataSuffix(item.key)) report_.leaked_metadata_keys++;
    }
    if (items->size() != expect) {
      return fail("assert scan_count [" + tokens[2] + ", " + tokens[3] +
                  "): expected " + tokens[4] + ", got " +
                  std::to_string(items->size()));
    }
    return Status::OK();
  }

  return Status::InvalidArgument("unknown assertion: " +
                                 (tokens.size() > 1 ? tokens[1] : ""));
}

Status ScenarioRunner::FillNodeReports() {
  for (const std::string& name : cluster_->NodeNames()) {
    SimNode* node = cluster_->FindNode(name);
    auto census = CensusEngine(node->engine());
    if (!census.ok()) return census.status();
    NodeReport nr;
    nr.mode = EngineModeName(node->mode());
    nr.files = census->files;
    nr.entries = census->entries;
    nr.metadata_entries = census->metadata_entries;
    nr.put_entries = census->put_entries;
    nr.tombstones = census->tombstones;
    nr.data_bytes = census->data_bytes;
    report_.nodes[name] = nr;
  }
  return Status::OK();
}

std::string ScenarioReportJson(const ScenarioReport& report) {
  nlohmann::json j;
  j["commands"] = report.commands;
  j["puts"] = report.puts;
  j["dels"] = report.dels;
  j["gets"] = report.gets;
  j["get_hits"] = report.get_hits;
  j["get_misses"] = report.get_misses;
  j["scans"] = report.scans;
  j["scanned_items"] = report.scanned_items;
  j["loads"] = report.loads;
  j["flushes"] = report.flushes;
  j["compactions"] = report.compactions;
  j["migrations"] = report.migrations;
  j["leaked_metadata_keys"] = report.leaked_metadata_keys;
  j["faults_injected"] = report.faults_injected;
  j["faults_detectable"] = report.faults_detectable;
  j["faults_undetectable"] = report.faults_undetectable;
  j["faults_detected"] = report.faults_detected;
  j["metadata_purged"] = report.metadata_purged;
  j["repair_validated"] = report.repair_validated;
  j["repair_regenerated"] = report.repair_regenerated;
  j["repair_recovered"] = report.repair_recovered;
  j["repair_quarantined"] = report.repair_quarantined;
  j["repair_metadata_created"] = report.repair_metadata_created;
  j["repair_orphans_dropped"] = report.repair_orphans_dropped;
  j["assertions"] = report.assertions;
  j["ok"] = report.ok();
  j["failures"] = report.failures;
  nlohmann::json nodes = nlohmann::json::object();
  for (const auto& [name, nr] : report.nodes) {
    nodes[name] = {
        {"mode", nr.mode},
        {"files", nr.files},
        {"entries", nr.entries},
        {"metadata_entries", nr.metadata_entries},
        {"put_entries", nr.put_entries},
        {"tombstones", nr.tombstones},
        {"data_bytes", nr.data_bytes},
    };
  }
  j["nodes"] = nodes;
  return j.dump(2) + "\n";
}

std::string ScenarioReportText(const ScenarioReport& report) {
  std::map<std::string, std::string> rows;
  rows["commands"] = std::to_string(report.commands);
  rows["puts"] = std::to_string(report.puts);
  rows["dels"] = std::to_string(report.dels);
  rows["gets"] = std::to_string(report.gets);
  rows["get_hits"] = std::to_string(report.get_hits);
  rows["get_misses"] = std::to_string(report.get_misses);
  rows["scans"] = std::to_string(report.scans);
  rows["scanned_items"] = std::to_string(report.scanned_items);
  rows["loads"] = std::to_string(report.loads);
  rows["flushes"] = std::to_string(report.flushes);
  rows["compactions"] = std::to_string(report.compactions);
  rows["migrations"] = std::to_string(report.migrations);
  rows["leaked_metadata_keys"] = std::to_string(report.leaked_metadata_keys);
  rows["faults_injected"] = std::to_string(report.faults_injected);
  rows["faults_detectable"] = std::to_string(report.faults_detectable);
  rows["faults_undetectable"] = std::to_string(report.faults_undetectable);
  rows["faults_detected"] = std::to_string(report.faults_detected);
  rows["metadata_purged"] = std::to_string(report.metadata_purged);
  rows["repair_validated"] = std::to_string(report.repair_validated);
  rows["repair_regenerated"] = std::to_string(report.repair_regenerated);
  rows["repair_recovered"] = std::to_string(report.repair_recovered);
  rows["repair_quarantined"] = std::to_string(report.repair_quarantined);
  rows["repair_metadata_created"] =
      std::to_string(report.repair_metadata_created);
  rows["repair_orphans_dropped"] =
      std::to_string(report.repair_orphans_dropped);
  rows["assertions"] = std::to_string(report.assertions);
  rows["ok"] = report.ok() ? "true" : "false";
  for (const auto& [name, nr] : report.nodes) {
    const std::string prefix = "nodes." + name + ".";
    rows[prefix + "mode"] = nr.mode;
    rows[prefix + "files"] = std::to_string(nr.files);
    rows[prefix + "entries"] = std::to_string(nr.entries);
    rows[prefix + "metadata_entries"] = std::to_string(nr.metadata_entries);
    rows[prefix + "put_entries"] = std::to_string(nr.put_entries);
    rows[prefix + "tombstones"] = std::to_string(nr.tombstones);
    rows[prefix + "data_bytes"] = std::to_string(nr.data_bytes);
  }
  std::ostringstream out;
  for (const auto& [key, value] : rows) out << key << "=" << value << "\n";
  for (size_t i = 0; i < report.failures.size(); i++) {
    out << "failure." << i << "=" << report.failures[i] << "\n";
  }
  return out.str();
}

}  // namespace metahive::sim
