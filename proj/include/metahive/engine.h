// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "metahive/integrity.h"
#include "metahive/manifest.h"
#include "metahive/memtable.h"
#include "metahive/options.h"
#include "metahive/status.h"
#include "metahive/table_reader.h"
#include "metahive/types.h"
#include "metahive/wal.h"

namespace metahive {

// The storage engine: WAL + memtables + leveled SSTs. In MetaHive mode,
// flush injects per-KV checksum metadata and compaction verifies/repairs
// it; in legacy mode both paths are metadata-unaware and bottommost
// compaction purges every tombstone-typed entry — including any migrated
// metadata, which is the automatic-cleanup behavior.
//
// Concurrency: one logical writer (callers serialize mutating calls);
// readers may run concurrently against snapshots. With background_jobs set,
// flush/compaction run on an internal worker thread and results publish via
// an atomic manifest-state swap.
class Engine {
 public:
  static Result<std::unique_ptr<Engine>> Open(const std::string& path,
                                              const Options& options);
  ~Engine();

  // Flushes pending data, stops background work, releases files.
  Status Close();

  Result<SequenceNumber> Put(std::string_view key, std::string_view value);
  Result<SequenceNumber> Delete(std::string_view key);
  Result<std::string> Get(std::string_view key);

  struct ScanItem {
    std::string key;
    std::string value;
  };
  // Latest visible versions in [lo, hi), ascending; tombstone-typed entries
  // (metadata included) never surface. Empty hi means unbounded.
  Result<std::vector<ScanItem>> Scan(std::string_view lo, std::string_view hi);

  struct VerifiedGet {
    std::string value;
    Verdict verdict = Verdict::kValidated;
    size_t blocks_read = 0;
    bool had_metadata = false;
  };
  // Read-plus-verify: fetches the KV, locates its metadata in the already
  // loaded block (co-location makes that one block read), and runs the
  // verdict cascade. A memtable hit verifies trivially with zero block
  // reads; a KV with no metadata on disk reports had_metadata == false.
  Result<VerifiedGet> GetVerified(std::string_view key);

  // Seals the active memtable (if non-empty) and flushes everything sealed.
  Status Flush();

  struct CompactionResult {
    int input_level = 0;
    bool bottommost = false;
    std::vector<uint64_t> input_files;
    std::vector<uint64_t> output_files;
    RepairReport repair;  // zero-valued in legacy mode
  };
  // Merges the oldest file of `level` with every overlapping file one level
  // down. Fails on an empty level.
  Result<CompactionResult> CompactLevel(int level);
  // Repeats level compactions until all data sits in a single level (always
  // at least one pass when L0 holds files, so a lone L0 file still gets the
  // full bottommost treatment).
  Result<std::vector<CompactionResult>> CompactAll();

  struct IngestResult {
    uint64_t file_no = 0;  // number assigned in this engine
    uint64_t file_bytes = 0;
    uint64_t entry_count = 0;
    uint64_t metadata_count = 0;
    uint64_t put_count = 0;
  };
  // Copies a foreign SST into L0 byte-identically (migration receive path).
  Result<IngestResult> IngestSst(const std::string& external_path);

  struct LiveFile {
    uint64_t file_no = 0;
    int level = 0;
    std::string path;
  };
  std::vector<LiveFile> ListLiveFiles();
  // Removes a live file from the manifest and deletes it (migration send
  // path). Fails if the file is unknown.
  Status DropFile(uint64_t file_no);

  const Options& options() const { return options_; }
  const std::string& path() const { return dir_; }
  const HashFunction& hash() const { return *hash_; }
  std::string QuarantineLogPath() const;
  SequenceNumber last_seq();
  size_t NumFilesAtLevel(int level);
  // Aggregated over all compactions since open.
  RepairReport TotalRepairReport();
  // Test hook: called for every cluster processed by compaction repair.
  void SetClusterObserver(ClusterObserver observer);

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

 private:
  Engine(std::string dir, Options options, const HashFunction* hash);

  struct ReadSnapshot {
    std::shared_ptr<MemTable> active;
    std::shared_ptr<MemTable> immutable;
    std::vector<std::vector<FileMeta>> levels;
    SequenceNumber seq = 0;
    bool closed = false;
  };

  Status Recover();
  Status NewWalSegment();
  Result<SequenceNumber> Write(std::string_view key, EntryType type,
                               std::string_view value);
  // Seals the active memtable when over budget and schedules or performs
  // the flush. Caller holds mu_.
  Status MakeRoomForWrite(std::unique_lock<std::mutex>* lock);
  Status SealActiveLocked(std::unique_lock<std::mutex>* lock);
  // Flushes the immutable memtable. Caller holds work_mu_, not mu_.
  Status FlushImmutable();
  Status MaybeScheduleCompaction();
  Result<CompactionResult> CompactLevelInternal(int level);
  ReadSnapshot TakeSnapshot();
  Result<std::shared_ptr<TableReader>> GetReader(uint64_t file_no);
  Status LookupInFiles(const ReadSnapshot& snap, std::string_view key,
                       KVEntry* out, bool* found, uint64_t* file_no,
                       size_t* block_idx, std::vector<KVEntry>* block_entries,
                       size_t* blocks_read, bool keep_block);
  void BackgroundWorker();
  Status WriteManifestEdit(const VersionEdit& edit);

  const std::string dir_;
  const Options options_;
  const HashFunction* hash_;

  // work_mu_ serializes flush/compaction/ingest; acquired before mu_.
  std::mutex work_mu_;
  // mu_ guards all fields below.
  std::mutex mu_;
  std::condition_variable cv_;
  std::shared_ptr<MemTable> active_;
  std::shared_ptr<MemTable> immutable_;
  VersionState version_;
  SequenceNumber seq_ = 0;
  uint64_t next_file_no_ = 1;
  uint64_t active_wal_no_ = 0;
  uint64_t immutable_wal_no_ = 0;
  std::map<uint64_t, std::shared_ptr<TableReader>> readers_;
  RepairReport total_repair_;
  ClusterObserver cluster_observer_;
  Status bg_error_;
  bool closed_ = false;

  WalWriter wal_;
  ManifestWriter manifest_;

  std::thread worker_;
  bool worker_shutdown_ = false;
  bool flush_pending_ = false;
};

// Recursively deletes an engine directory (test/tool helper).
Status DestroyEngineDir(const std::string& path);

}  // namespace metahive
