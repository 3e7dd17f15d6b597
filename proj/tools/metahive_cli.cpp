// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

// Command-line front end: point ops, maintenance, integrity checks, dump
// and inspection tooling, the workload benchmark, and the cluster
// simulator.
//
// Exit codes: 0 success, 1 operational failure (missing key, detected
// corruption, failed scenario assertions, I/O errors), 2 usage errors.

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cstdio>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "metahive/bench.h"
#include "metahive/engine.h"
#include "metahive/env.h"
#include "metahive/hash.h"
#include "metahive/integrity.h"
#include "metahive/manifest.h"
#include "metahive/metadata.h"
#include "metahive/options.h"
#include "metahive/sim/fault.h"
#include "metahive/sim/scenario.h"
#include "metahive/sst_format.h"
#include "metahive/table_reader.h"

namespace {

using namespace metahive;  // NOLINT: single-file tool

int Fail(const Status& status) {
  std::fprintf(stderr, "metahive: %s\n", status.ToString().c_str());
  return 1;
}

int Fail(const std::string& message) {
  std::fprintf(stderr, "metahive: %s\n", message.c_str());
  return 1;
}

// Printable ASCII stays raw; backslash doubles; everything else becomes
// \xNN so binary keys and values are terminal-safe.
std::string EscapeBytes(std::string_view bytes) {
  std::string out;
  out.reserve(bytes.size());
  for (unsigned char c : bytes) {
    if (c == '\\') {
      out += "\\\\";
    } else if (c >= 0x20 && c <= 0x7E) {
      out += static_cast<char>(c);
    } else {
      char buf[5];
      std::snprintf(buf, sizeof(buf), "\\x%02X", c);
      out += buf;
    }
  }
  return out;
}

// Advisory exclusive lock on <dir>/LOCK, held for the process lifetime.
// Serializes CLI invocations that open or mutate a store.
class DirLock {
 public:
  ~DirLock() {
    if (fd_ >= 0) ::close(fd_);  // closing releases the flock
  }

  Status Acquire(const std::string& dir) {
    Status s = CreateDirIfMissing(dir);
    if (!s.ok()) return s;
    std::string path = dir + "/LOCK";
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) return Status::IOError("open " + path);
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
      ::close(fd_);
      fd_ = -1;
      return Status::IOError("store is locked by another process: " + path);
    }
    return Status::OK();
  }

 private:
  int fd_ = -1;
};

Result<Options> BuildOptions(const std::string& config,
                             const std::string& mode) {
  Options opts;
  if (!config.empty()) {
    Status s = LoadConfigFile(config, &opts);
    if (!s.ok()) return s;
  }
  if (!mode.empty()) {
    if (mode == "metahive") {
      opts.mode = EngineMode::kMetaHive;
    } else if (mode == "legacy") {
      opts.mode = EngineMode::kLegacy;
    } else {
      return Status::InvalidArgument("unknown mode: " + mode);
    }
  }
  return opts;
}

// Live files straight from the manifest, without opening the engine (no
// WAL replay, no manifest rewrite). Shared by the read-only verbs.
Status ListFilesFromManifest(const std::string& dir,
                             std::vector<FileMeta>* files) {
  VersionState state;
  Status s = LoadManifest(dir + "/MANIFEST", &state);
  if (!s.ok()) return s;
  files->clear();
  for (int level = 0; level < kNumLevels; level++) {
    for (const FileMeta& f : state.level(level)) files->push_back(f);
  }
  return Status::OK();
}

// Reads the pinned hash id from the ENGINE meta file.
Result<const HashFunction*> HashFromEngineMeta(const std::string& dir) {
  std::string body;
  Status s = ReadFileToString(dir + "/ENGINE", &body);
  if (!s.ok()) return s;
  size_t pos = body.find("hash_id=");
  if (pos == std::string::npos) {
    return Status::Corruption("ENGINE meta missing hash_id");
  }
  int hash_id = std::atoi(body.c_str() + pos + 8);
  const HashFunction* hash = FindHashFunction(hash_id);
  if (hash == nullptr) {
    return Status::InvalidArgument("ENGINE meta names unknown hash_id " +
                                   std::to_string(hash_id));
  }
  return hash;
}

struct EngineArgs {
  std::string path;
  std::string config;
  std::string mode;
};

void AddEngineArgs(CLI::App* cmd, EngineArgs* args, bool mode_flag = true) {
  cmd->add_option("--path", args->path, "Store directory")->required();
  cmd->add_option("--config", args->config, "key=value config file");
  if (mode_flag) {
    cmd->add_option("--mode", args->mode, "Engine mode")
        ->check(CLI::IsMember({"metahive", "legacy"}));
  }
}

// Lock, build options, open. Every verb that opens the engine goes through
// here (opening replays the WAL and rewrites the manifest snapshot, so even
// reads need the lock).
int WithEngine(const EngineArgs& args, DirLock* lock,
               std::unique_ptr<Engine>* engine) {
  Status s = lock->Acquire(args.path);
  if (!s.ok()) return Fail(s);
  auto opts = BuildOptions(args.config, args.mode);
  if (!opts.ok()) return Fail(opts.status());
  auto opened = Engine::Open(args.path, *opts);
  if (!opened.ok()) return Fail(opened.status());
  *engine = std::move(opened.value());
  return 0;
}

int CloseEngine(Engine* engine) {
  Status s = engine->Close();
  return s.ok() ? 0 : Fail(s);
}

// ---------------------------------------------------------------------------
// Point ops

int CmdDbPut(const EngineArgs& args, const std::string& key,
             const std::string& value) {
  DirLock lock;
  std::unique_ptr<Engine> engine;
  int rc = WithEngine(args, &lock, &engine);
  if (rc != 0) return rc;
  auto seq = engine->Put(key, value);
  if (!seq.ok()) return Fail(seq.status());
  return CloseEngine(engine.get());
}

int CmdDbGet(const EngineArgs& args, const std::string& key) {
  DirLock lock;
  std::unique_ptr<Engine> engine;
  int rc = WithEngine(args, &lock, &engine);
  if (rc != 0) return rc;
  auto value = engine->Get(key);
  if (!value.ok()) {
    if (value.status().code() == Status::Code::kNotFound) {
      std::fprintf(stderr, "metahive: key not found\n");
      return 1;
    }
    return Fail(value.status());
  }
  std::fwrite(value->data(), 1, value->size(), stdout);
  std::fputc('\n', stdout);
  return CloseEngine(engine.get());
}

int CmdDbDel(const EngineArgs& args, const std::string& key) {
  DirLock lock;
  std::unique_ptr<Engine> engine;
  int rc = WithEngine(args, &lock, &engine);
  if (rc != 0) return rc;
  auto seq = engine->Delete(key);
  if (!seq.ok()) return Fail(seq.status());
  return CloseEngine(engine.get());
}

int CmdDbScan(const EngineArgs& args, const std::string& lo,
              const std::string& hi) {
  DirLock lock;
  std::unique_ptr<Engine> engine;
  int rc = WithEngine(args, &lock, &engine);
  if (rc != 0) return rc;
  auto items = engine->Scan(lo, hi);
  if (!items.ok()) return Fail(items.status());
  for (const Engine::ScanItem& item : *items) {
    std::printf("%s\t%s\n", EscapeBytes(item.key).c_str(),
                EscapeBytes(item.value).c_str());
  }
  return CloseEngine(engine.get());
}

// ---------------------------------------------------------------------------
// Maintenance

int CmdFlush(const EngineArgs& args) {
  DirLock lock;
  std::unique_ptr<Engine> engine;
  int rc = WithEngine(args, &lock, &engine);
  if (rc != 0) return rc;
  Status s = engine->Flush();
  if (!s.ok()) return Fail(s);
  std::printf("flushed; live_files=%zu\n", engine->ListLiveFiles().size());
  return CloseEngine(engine.get());
}

void PrintCompaction(const Engine::CompactionResult& result) {
  std::printf(
      "compacted L%d bottommost=%d inputs=%zu outputs=%zu validated=%llu "
      "regenerated=%llu recovered=%llu quarantined=%llu metadata_created=%llu "
      "orphans_dropped=%llu\n",
      result.input_level, result.bottommost ? 1 : 0,
      result.input_files.size(), result.output_files.size(),
      static_cast<unsigned long long>(result.repair.validated),
      static_cast<unsigned long long>(result.repair.regenerated),
      static_cast<unsigned long long>(result.repair.recovered),
      static_cast<unsigned long long>(result.repair.quarantined),
      static_cast<unsigned long long>(result.repair.metadata_created),
      static_cast<unsigned long long>(result.repair.orphans_dropped));
}

int CmdCompact(const EngineArgs& args, int level) {
  DirLock lock;
  std::unique_ptr<Engine> engine;
  int rc = WithEngine(args, &lock, &engine);
  if (rc != 0) return rc;
  if (level >= 0) {
    auto result = engine->CompactLevel(level);
    if (!result.ok()) return Fail(result.status());
    PrintCompaction(*result);
  } else {
    auto results = engine->CompactAll();
    if (!results.ok()) return Fail(results.status());
    for (const Engine::CompactionResult& result : *results) {
      PrintCompaction(result);
    }
    if (results->empty()) std::printf("nothing to compact\n");
  }
  return CloseEngine(engine.get());
}

// ---------------------------------------------------------------------------
// verify: read-only integrity pass over every live SST

struct VerifyTotals {
  uint64_t files = 0;
  uint64_t clusters = 0;
  uint64_t validated = 0;
  uint64_t regenerate = 0;
  uint64_t corrupted_kv = 0;
  uint64_t corrupted_both = 0;
  uint64_t bare_puts = 0;
  uint64_t deletions = 0;
  uint64_t orphans = 0;

  uint64_t findings() const {
    return regenerate + corrupted_kv + corrupted_both + orphans;
  }
};

Status VerifyFile(const std::string& path, const HashFunction& hash,
                  VerifyTotals* totals, std::string* line) {
  auto reader = TableReader::Open(path);
  if (!reader.ok()) return reader.status();
  std::vector<KVEntry> entries;
  Status s = (*reader)->ReadAllEntries(&entries);
  if (!s.ok()) return s;

  VerifyTotals file;
  size_t i = 0;
  while (i < entries.size()) {
    // One cluster = the contiguous run sharing a cluster key (the file is
    // sorted, and metadata sorts directly after its partner's versions).
    std::string cluster_key(ClusterKey(entries[i].key));
    std::vector<SourcedEntry> cluster;
    while (i < entries.size() &&
           ClusterKey(entries[i].key) == cluster_key) {
      cluster.push_back(SourcedEntry{entries[i], -1, 0});
      i++;
    }
    ClusterPairing pairing = CorrespondCluster(cluster, hash);
    file.clusters++;
    for (const PairedEntry& pair : pairing.pairs) {
      Verdict verdict =
          pair.meta.well_formed
              ? VerdictFromChecksum(pair.kv_checksum, pair.meta.payload, hash)
              : Verdict::kCorruptedBoth;
      switch (verdict) {
        case Verdict::kValidated:
          file.validated++;
          break;
        case Verdict::kValidatedRegenerateMeta:
          file.regenerate++;
          break;
        case Verdict::kCorruptedKV:
          file.corrupted_kv++;
          break;
        case Verdict::kCorruptedBoth:
          file.corrupted_both++;
          break;
      }
    }
    for (const SourcedEntry& bare : pairing.bare_kvs) {
      if (bare.entry.key.type == EntryType::kPut) {
        file.bare_puts++;
      } else {
        file.deletions++;
      }
    }
    file.orphans += pairing.orphans.size();
  }

  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "clusters=%llu validated=%llu regenerate=%llu "
                "corrupted_kv=%llu corrupted_both=%llu bare_puts=%llu "
                "deletions=%llu orphans=%llu",
                static_cast<unsigned long long>(file.clusters),
                static_cast<unsigned long long>(file.validated),
                static_cast<unsigned long long>(file.regenerate),
                static_cast<unsigned long long>(file.corrupted_kv),
                static_cast<unsigned long long>(file.corrupted_both),
                static_cast<unsigned long long>(file.bare_puts),
                static_cast<unsigned long long>(file.deletions),
                static_cast<unsigned long long>(file.orphans));
  *line = buf;

  totals->files++;
  totals->clusters += file.clusters;
  totals->validated += file.validated;
  totals->regenerate += file.regenerate;
  totals->corrupted_kv += file.corrupted_kv;
  totals->corrupted_both += file.corrupted_both;
  totals->bare_puts += file.bare_puts;
  totals->deletions += file.deletions;
  totals->orphans += file.orphans;
  return Status::OK();
}

int CmdVerify(const std::string& path) {
  // Deliberately lock-free and engine-free: nothing here writes a byte.
  auto hash = HashFromEngineMeta(path);
  if (!hash.ok()) return Fail(hash.status());
  std::vector<FileMeta> files;
  Status s = ListFilesFromManifest(path, &files);
  if (!s.ok()) return Fail(s);

  VerifyTotals totals;
  for (const FileMeta& meta : files) {
    std::string line;
    s = VerifyFile(path + "/" + SstFileName(meta.file_no), **hash, &totals,
                   &line);
    if (!s.ok()) return Fail(s);
    std::printf("file %s level=%d %s\n", SstFileName(meta.file_no).c_str(),
                meta.level, line.c_str());
  }
  std::printf(
      "total files=%llu clusters=%llu validated=%llu regenerate=%llu "
      "corrupted_kv=%llu corrupted_both=%llu bare_puts=%llu deletions=%llu "
      "orphans=%llu findings=%llu\n",
      static_cast<unsigned long long>(totals.files),
      static_cast<unsigned long long>(totals.clusters),
      static_cast<unsigned long long>(totals.validated),
      static_cast<unsigned long long>(totals.regenerate),
      static_cast<unsigned long long>(totals.corrupted_kv),
      static_cast<unsigned long long>(totals.corrupted_both),
      static_cast<unsigned long long>(totals.bare_puts),
      static_cast<unsigned long long>(totals.deletions),
      static_cast<unsigned long long>(totals.orphans),
      static_cast<unsigned long long>(totals.findings()));
  if (totals.findings() > 0) {
    std::fprintf(stderr, "metahive: verify found %llu problem(s)\n",
                 static_cast<unsigned long long>(totals.findings()));
    return 1;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// sst-dump

int CmdSstDump(const std::string& path) {
  auto reader = TableReader::Open(path);
  if (!reader.ok()) return Fail(reader.status());
  const TableReader& table = **reader;
  std::printf("file %s size=%llu blocks=%zu data_bytes=%llu\n", path.c_str(),
              static_cast<unsigned long long>(table.file_size()),
              table.num_blocks(),
              static_cast<unsigned long long>(table.footer().index_offset));

  uint64_t puts = 0, tombstones = 0, metadata = 0, paired = 0, unpaired = 0,
           total = 0;
  for (size_t b = 0; b < table.num_blocks(); b++) {
    std::string bytes;
    Status s = table.ReadBlock(b, &bytes);
    if (!s.ok()) return Fail(s);
    std::vector<KVEntry> entries;
    s = TableReader::ParseBlock(bytes, &entries);
    if (!s.ok()) return Fail(s);
    const IndexEntry& index = table.index()[b];
    std::printf("block %zu offset=%llu size=%llu entries=%zu\n", b,
                static_cast<unsigned long long>(index.offset),
                static_cast<unsigned long long>(index.length), entries.size());

    for (size_t e = 0; e < entries.size(); e++) {
      const KVEntry& entry = entries[e];
      total++;
      if (IsMetadataEntry(entry)) {
        metadata++;
        std::string user_key = entry.key.user_key.substr(
            0, entry.key.user_key.size() - 1);
        MetadataPayload payload;
        bool well_formed = ParseMetadataPayload(entry.value, &payload);
        // Co-location audit: the partner Put must sit in this same block.
        SequenceNumber want_seq =
            well_formed ? payload.orig_seq : entry.key.seq;
        bool found = false;
        for (const KVEntry& other : entries) {
          if (other.key.type == EntryType::kPut &&
              !IsMetadataEntry(other) && other.key.seq == want_seq &&
              other.key.user_key == user_key) {
            found = true;
            break;
          }
        }
        found ? paired++ : unpaired++;
        if (well_formed) {
          std::printf(
              "  %zu meta key=%s seq=%llu orig_seq=%llu checksum=%016llx "
              "coc=%016llx %s\n",
              e, EscapeBytes(user_key).c_str(),
              static_cast<unsigned long long>(entry.key.seq),
              static_cast<unsigned long long>(payload.orig_seq),
              static_cast<unsigned long long>(payload.checksum),
              static_cast<unsigned long long>(payload.checksum_of_checksum),
              found ? "paired" : "UNPAIRED");
        } else {
          std::printf("  %zu meta key=%s seq=%llu MALFORMED(vlen=%zu) %s\n",
                      e, EscapeBytes(user_key).c_str(),
                      static_cast<unsigned long long>(entry.key.seq),
                      entry.value.size(), found ? "paired" : "UNPAIRED");
        }
      } else if (entry.key.type == EntryType::kPut) {
        puts++;
        std::printf("  %zu put key=%s seq=%llu vlen=%zu\n", e,
                    EscapeBytes(entry.key.user_key).c_str(),
                    static_cast<unsigned long long>(entry.key.seq),
                    entry.value.size());
      } else {
        tombstones++;
        std::printf("  %zu del key=%s seq=%llu\n", e,
                    EscapeBytes(entry.key.user_key).c_str(),
                    static_cast<unsigned long long>(entry.key.seq));
      }
    }
  }
  std::printf(
      "summary entries=%llu puts=%llu tombstones=%llu metadata=%llu "
      "paired=%llu unpaired=%llu\n",
      static_cast<unsigned long long>(total),
      static_cast<unsigned long long>(puts),
      static_cast<unsigned long long>(tombstones),
      static_cast<unsigned long long>(metadata),
      static_cast<unsigned long long>(paired),
      static_cast<unsigned long long>(unpaired));
  return 0;
}

// ---------------------------------------------------------------------------
// inject

int CmdInject(const std::string& path, const std::string& field_name,
              double probability, uint64_t seed) {
  sim::FaultField field;
  Status s = sim::ParseFaultField(field_name, &field);
  if (!s.ok()) return Fail(s);

  DirLock lock;  // mutates SST bytes in place
  s = lock.Acquire(path);
  if (!s.ok()) return Fail(s);
  std::vector<FileMeta> files;
  s = ListFilesFromManifest(path, &files);
  if (!s.ok()) return Fail(s);
  std::sort(files.begin(), files.end(),
            [](const FileMeta& a, const FileMeta& b) {
              return a.file_no < b.file_no;
            });

  std::mt19937_64 rng(seed);
  uint64_t injected = 0, eligible = 0, entries = 0;
  for (const FileMeta& meta : files) {
    auto stats =
        sim::InjectFaults(path + "/" + SstFileName(meta.file_no), "cli",
                          meta.file_no, field, probability, rng);
    if (!stats.ok()) return Fail(stats.status());
    eligible += stats->eligible;
    entries += stats->entries;
    for (const sim::FaultRecord& fault : stats->faults) {
      injected++;
      std::printf(
          "fault file=%llu block=%u entry=%u field=%s bit=%u offset=%llu "
          "key=%s seq=%llu detectable=%d\n",
          static_cast<unsigned long long>(fault.file_no), fault.block_idx,
          fault.entry_idx, sim::FaultFieldName(fault.field), fault.bit,
          static_cast<unsigned long long>(fault.file_offset),
          EscapeBytes(fault.cluster_key).c_str(),
          static_cast<unsigned long long>(fault.seq),
          fault.detectable ? 1 : 0);
    }
  }
  std::printf("injected=%llu eligible=%llu entries=%llu files=%zu\n",
              static_cast<unsigned long long>(injected),
              static_cast<unsigned long long>(eligible),
              static_cast<unsigned long long>(entries), files.size());
  return 0;
}

// ---------------------------------------------------------------------------
// bench

nlohmann::json BenchReportJson(const BenchReport& report) {
  nlohmann::json j;
  j["mode"] = BenchModeName(report.mode);
  j["ops"] = report.ops;
  j["gets"] = report.gets;
  j["puts"] = report.puts;
  j["get_misses"] = report.get_misses;
  j["verify_failures"] = report.verify_failures;
  j["get_median_ns"] = report.get_ns.median_ns;
  j["get_p99_ns"] = report.get_ns.p99_ns;
  j["get_mean_ns"] = report.get_ns.mean_ns;
  j["put_median_ns"] = report.put_ns.median_ns;
  j["put_p99_ns"] = report.put_ns.p99_ns;
  j["put_mean_ns"] = report.put_ns.mean_ns;
  j["wall_ns"] = report.wall_ns;
  j["data_bytes"] = report.data_bytes;
  j["file_count"] = report.file_count;
  return j;
}

struct BenchArgs {
  std::string path;
  std::string config;
  std::string bench_mode = "metahive";
  uint64_t ops = 10000;
  uint64_t keys = 10000;
  size_t key_size = 20;
  size_t value_size = 100;
  double theta = 0.99;
  double read_fraction = 0.5;
  uint64_t seed = 42;
  std::string latency_log;
  bool json = false;
  bool no_preload = false;
};

int CmdBench(const BenchArgs& args) {
  BenchConfig cfg;
  cfg.dir = args.path;
  Status s = ParseBenchMode(args.bench_mode, &cfg.mode);
  if (!s.ok()) return Fail(s);
  if (!args.config.empty()) {
    s = LoadConfigFile(args.config, &cfg.engine);
    if (!s.ok()) return Fail(s);
  }
  cfg.ops = args.ops;
  cfg.preload = !args.no_preload;
  cfg.latency_log = args.latency_log;
  cfg.workload.key_count = args.keys;
  cfg.workload.key_size = args.key_size;
  cfg.workload.value_size = args.value_size;
  cfg.workload.zipf_theta = args.theta;
  cfg.workload.read_fraction = args.read_fraction;
  cfg.workload.seed = args.seed;

  DirLock lock;
  s = lock.Acquire(args.path);
  if (!s.ok()) return Fail(s);
  auto report = RunBench(cfg);
  if (!report.ok()) return Fail(report.status());
  if (args.json) {
    std::printf("%s\n", BenchReportJson(*report).dump(2).c_str());
  } else {
    std::fputs(FormatBenchReport(*report).c_str(), stdout);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// sim

struct SimArgs {
  std::string script;
  std::string scenario;
  std::string root;
  uint64_t seed = 42;
  bool json = false;
};

int CmdSim(const SimArgs& args) {
  std::string text;
  if (!args.scenario.empty()) {
    std::string_view canned = sim::FindCannedScenario(args.scenario);
    if (canned.empty()) {
      return Fail("unknown scenario: " + args.scenario +
                  " (available: hetero3)");
    }
    text = std::string(canned);
  } else {
    Status s = ReadFileToString(args.script, &text);
    if (!s.ok()) return Fail(s);
  }

  sim::ScenarioRunner runner(args.root, args.seed);
  auto report = runner.Run(text);
  if (!report.ok()) return Fail(report.status());
  if (args.json) {
    std::fputs(sim::ScenarioReportJson(*report).c_str(), stdout);
  } else {
    std::fputs(sim::ScenarioReportText(*report).c_str(), stdout);
  }
  if (!report->ok()) {
    for (const std::string& failure : report->failures) {
      std::fprintf(stderr, "metahive: scenario failure: %s\n",
                   failure.c_str());
    }
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "metahive: an LSM key-value store whose per-key checksum metadata "
      "lives in hidden sibling entries, verified and repaired at "
      "compaction"};
  app.require_subcommand(1);
  int rc = 0;

  // db-put / db-get / db-del / db-scan
  EngineArgs put_args;
  std::string put_key, put_value;
  CLI::App* put = app.add_subcommand("db-put", "Write one key");
  AddEngineArgs(put, &put_args);
  put->add_option("key", put_key)->required();
  put->add_option("value", put_value)->required();
  put->callback([&] { rc = CmdDbPut(put_args, put_key, put_value); });

  EngineArgs get_args;
  std::string get_key;
  CLI::App* get = app.add_subcommand("db-get", "Read one key");
  AddEngineArgs(get, &get_args);
  get->add_option("key", get_key)->required();
  get->callback([&] { rc = CmdDbGet(get_args, get_key); });

  EngineArgs del_args;
  std::string del_key;
  CLI::App* del = app.add_subcommand("db-del", "Delete one key");
  AddEngineArgs(del, &del_args);
  del->add_option("key", del_key)->required();
  del->callback([&] { rc = CmdDbDel(del_args, del_key); });

  EngineArgs scan_args;
  std::string scan_lo, scan_hi;
  CLI::App* scan = app.add_subcommand(
      "db-scan", "List live keys in [--lo, --hi), escaped key<TAB>value");
  AddEngineArgs(scan, &scan_args);
  scan->add_option("--lo", scan_lo, "Inclusive lower bound");
  scan->add_option("--hi", scan_hi, "Exclusive upper bound (empty = end)");
  scan->callback([&] { rc = CmdDbScan(scan_args, scan_lo, scan_hi); });

  // flush / compact
  EngineArgs flush_args;
  CLI::App* flush = app.add_subcommand("flush", "Flush memtables to SSTs");
  AddEngineArgs(flush, &flush_args);
  flush->callback([&] { rc = CmdFlush(flush_args); });

  EngineArgs compact_args;
  int compact_level = -1;
  CLI::App* compact = app.add_subcommand(
      "compact", "Compact (repairs en route in metahive mode)");
  AddEngineArgs(compact, &compact_args);
  compact->add_option("--level", compact_level,
                      "Compact one level instead of everything");
  compact->callback([&] { rc = CmdCompact(compact_args, compact_level); });

  // verify
  std::string verify_path;
  CLI::App* verify = app.add_subcommand(
      "verify", "Read-only integrity check of every live SST");
  verify->add_option("--path", verify_path, "Store directory")->required();
  verify->callback([&] { rc = CmdVerify(verify_path); });

  // sst-dump
  std::string dump_path;
  CLI::App* dump = app.add_subcommand(
      "sst-dump", "Decode one SST: entries, payloads, co-location audit");
  dump->add_option("file", dump_path, "SST file path")->required();
  dump->callback([&] { rc = CmdSstDump(dump_path); });

  // inject
  std::string inject_path, inject_field = "meta_checksum";
  double inject_p = 0.01;
  uint64_t inject_seed = 42;
  CLI::App* inject = app.add_subcommand(
      "inject", "Flip bits in live SSTs (fault-injection testing)");
  inject->add_option("--path", inject_path, "Store directory")->required();
  inject->add_option("--field", inject_field, "Target field")
      ->check(CLI::IsMember({"value", "meta_checksum", "meta_coc"}));
  inject->add_option("--probability", inject_p, "Per-entry flip probability")
      ->check(CLI::Range(0.0, 1.0));
  inject->add_option("--seed", inject_seed, "RNG seed");
  inject->callback(
      [&] { rc = CmdInject(inject_path, inject_field, inject_p, inject_seed); });

  // bench
  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand(
      "bench", "Zipfian workload benchmark against a fresh store");
  bench->add_option("--path", bench_args.path, "Bench store directory")
      ->required();
  bench->add_option("--config", bench_args.config, "Engine config file");
  bench->add_option("--bench-mode", bench_args.bench_mode,
                    "legacy | metahive | embed")
      ->check(CLI::IsMember({"legacy", "metahive", "embed"}));
  bench->add_option("--ops", bench_args.ops, "Timed operations");
  bench->add_option("--keys", bench_args.keys, "Key-space size");
  bench->add_option("--key-size", bench_args.key_size, "Key bytes");
  bench->add_option("--value-size", bench_args.value_size, "Value bytes");
  bench->add_option("--theta", bench_args.theta, "Zipf skew, 0 = uniform")
      ->check(CLI::Range(0.0, 0.9999));
  bench->add_option("--read-fraction", bench_args.read_fraction,
                    "GET share of ops")
      ->check(CLI::Range(0.0, 1.0));
  bench->add_option("--seed", bench_args.seed, "Workload seed");
  bench->add_option("--latency-log", bench_args.latency_log,
                    "Binary per-op latency log path");
  bench->add_flag("--json", bench_args.json, "JSON report");
  bench->add_flag("--no-preload", bench_args.no_preload,
                  "Skip the preload/settle phase");
  bench->callback([&] { rc = CmdBench(bench_args); });

  // sim
  SimArgs sim_args;
  CLI::App* sim_cmd = app.add_subcommand(
      "sim", "Run a cluster scenario script (or a canned one)");
  CLI::Option* script_opt =
      sim_cmd->add_option("--script", sim_args.script, "Scenario file");
  sim_cmd->add_option("--scenario", sim_args.scenario,
                      "Canned scenario name (hetero3)")
      ->excludes(script_opt);
  sim_cmd->add_option("--root", sim_args.root, "Cluster working directory")
      ->required();
  sim_cmd->add_option("--seed", sim_args.seed, "Injection RNG seed");
  sim_cmd->add_flag("--json", sim_args.json, "JSON report");
  sim_cmd->callback([&] {
    if (sim_args.script.empty() && sim_args.scenario.empty()) {
      std::fprintf(stderr, "metahive: sim needs --script or --scenario\n");
      rc = 2;
      return;
    }
    rc = CmdSim(sim_args);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help exits clean; usage errors exit 2
  }
  return rc;
}
