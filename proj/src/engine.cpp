// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "metahive/engine.h"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <utility>

#include "metahive/entry_codec.h"
#include "metahive/env.h"
#include "metahive/log_record.h"
#include "metahive/metadata.h"
#include "metahive/sst_format.h"
#include "metahive/table_builder.h"

namespace metahive {
namespace {

constexpr char kManifestName[] = "MANIFEST";
constexpr char kEngineMetaName[] = "ENGINE";
constexpr char kQuarantineName[] = "quarantine.log";

std::string JoinPath(const std::string& dir, const std::string& name) {
  return dir + "/" + name;
}

bool ParseNumberBefore(const std::string& name, std::string_view prefix,
                       std::string_view suffix, uint64_t* no) {
  if (name.size() <= prefix.size() + suffix.size()) return false;
  if (name.compare(0, prefix.size(), prefix) != 0) return false;
  if (name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0) {
    return false;
  }
  const char* begin = name.data() + prefix.size();
  const char* end = name.data() + name.size() - suffix.size();
  auto [ptr, ec] = std::from_chars(begin, end, *no);
  return ec == std::errc() && ptr == end;
}

bool ParseSstName(const std::string& name, uint64_t* no) {
  return ParseNumberBefore(name, "", ".sst", no);
}

bool ParseWalName(const std::string& name, uint64_t* no) {
  return ParseNumberBefore(name, "wal-", ".log", no);
}

bool UserRangesOverlap(const std::string& a_lo, const std::string& a_hi,
                       const std::string& b_lo, const std::string& b_hi) {
  return a_lo <= b_hi && b_lo <= a_hi;
}

// The ENGINE file pins store identity that must not drift across opens:
// the on-disk format version and the checksum hash. Mode is deliberately
// not pinned — reopening a store in the other mode is the migration story.
Status CheckOrWriteEngineMeta(const std::string& dir, int hash_id) {
  const std::string path = JoinPath(dir, kEngineMetaName);
  if (!FileExists(path)) {
    std::string body = "format_version=1\nhash_id=" + std::to_string(hash_id) +
                       "\n";
    return WriteFileAtomic(path, body);
  }
  std::string body;
  Status s = ReadFileToString(path, &body);
  if (!s.ok()) return s;
  size_t pos = body.find("hash_id=");
  if (pos == std::string::npos) {
    return Status::Corruption("engine meta file missing hash_id");
  }
  int persisted = 0;
  const char* begin = body.data() + pos + 8;
  const char* end = body.data() + body.size();
  auto [ptr, ec] = std::from_chars(begin, end, persisted);
  if (ec != std::errc() || ptr == begin) {
    return Status::Corruption("engine meta file has unparsable hash_id");
  }
  if (persisted != hash_id) {
    return Status::InvalidArgument(
        "store was created with hash_id=" + std::to_string(persisted) +
        "; reopen with a matching hash_id");
  }
  return Status::OK();
}

}  // namespace

Engine::Engine(std::string dir, Options options, const HashFunction* hash)
    : dir_(std::move(dir)), options_(std::move(options)), hash_(hash) {}

Engine::~Engine() { Close(); }

Result<std::unique_ptr<Engine>> Engine::Open(const std::string& path,
                                             const Options& options) {
  Status s = options.Validate();
  if (!s.ok()) return s;
  const HashFunction* hash = FindHashFunction(options.hash_id);
  if (hash == nullptr) {
    return Status::InvalidArgument("unknown hash_id " +
                                   std::to_string(options.hash_id));
  }
  std::unique_ptr<Engine> engine(new Engine(path, options, hash));
  s = engine->Recover();
  if (!s.ok()) return s;
  return engine;
}

Status Engine::Recover() {
  Status s = CreateDirIfMissing(dir_);
  if (!s.ok()) return s;
  s = CheckOrWriteEngineMeta(dir_, options_.hash_id);
  if (!s.ok()) return s;

  const std::string manifest_path = JoinPath(dir_, kManifestName);
  if (FileExists(manifest_path)) {
    s = LoadManifest(manifest_path, &version_);
    if (!s.ok()) return s;
  }
  seq_ = version_.last_seq();
  next_file_no_ = version_.max_file_no() + 1;

  // Directory sweep: collect WAL segments, delete SSTs the manifest does
  // not reference (uncommitted builds from a crash), and advance the file
  // counter past every number ever used so numbers are never recycled.
  auto listing = ListDir(dir_);
  if (!listing.ok()) return listing.status();
  std::vector<uint64_t> wal_nos;
  for (const std::string& name : *listing) {
    uint64_t no = 0;
    if (ParseSstName(name, &no)) {
      next_file_no_ = std::max(next_file_no_, no + 1);
      if (!version_.contains(no)) {
        s = RemoveFile(JoinPath(dir_, name));
        if (!s.ok()) return s;
      }
    } else if (ParseWalName(name, &no)) {
      next_file_no_ = std::max(next_file_no_, no + 1);
      wal_nos.push_back(no);
    }
  }
  std::sort(wal_nos.begin(), wal_nos.end());

  // Replay the valid prefix of every WAL segment, oldest first. A torn or
  // corrupt tail truncates that segment; what parsed is kept.
  auto recovered = std::make_shared<MemTable>();
  for (uint64_t no : wal_nos) {
    auto replay = ReadWalSegment(JoinPath(dir_, WalFileName(no)));
    if (!replay.ok()) return replay.status();
    for (const KVEntry& e : replay->entries) {
      recovered->Add(e.key, e.value);
      seq_ = std::max(seq_, e.key.seq);
    }
  }

  // Collapse the manifest to a single snapshot edit and reopen for append.
  // The atomic rewrite bounds manifest growth and drops any torn tail.
  VersionEdit snapshot = version_.ToSnapshotEdit();
  snapshot.seq_high_water = seq_;
  std::string payload;
  snapshot.EncodeTo(&payload);
  std::string framed;
  AppendLogRecord(&framed, payload);
  s = WriteFileAtomic(manifest_path, framed);
  if (!s.ok()) return s;
  s = manifest_.Open(manifest_path, /*truncate=*/false);
  if (!s.ok()) return s;

  // Flush recovered writes immediately so the replayed segments can go.
  if (!recovered->empty()) {
    recovered->Seal();
    immutable_ = std::move(recovered);
    immutable_wal_no_ = 0;  // segments are removed below, all at once
    s = FlushImmutable();
    if (!s.ok()) return s;
  }
  for (uint64_t no : wal_nos) {
    s = RemoveFile(JoinPath(dir_, WalFileName(no)));
    if (!s.ok()) return s;
  }

  active_ = std::make_shared<MemTable>();
  if (options_.wal) {
    s = NewWalSegment();
    if (!s.ok()) return s;
  }
  if (options_.background_jobs) {
    worker_ = std::thread(&Engine::BackgroundWorker, this);
  }
  return Status::OK();
}

Status Engine::NewWalSegment() {
  active_wal_no_ = next_file_no_++;
  return wal_.Open(JoinPath(dir_, WalFileName(active_wal_no_)));
}

Status Engine::Close() {
  {
    std::lock_guard<std::mutex> lk(mu_);
    if (closed_) return Status::OK();
    worker_shutdown_ = true;
    cv_.notify_all();
  }
  if (worker_.joinable()) worker_.join();

  // Drain: flush a leftover immutable first (the worker is gone), then
  // seal and flush whatever the active memtable holds.
  Status out;
  {
    std::lock_guard<std::mutex> work(work_mu_);
    out = FlushImmutable();
  }
  if (out.ok()) {
    std::unique_lock<std::mutex> lk(mu_);
    out = SealActiveLocked(&lk);
  }
  if (out.ok()) {
    std::lock_guard<std::mutex> work(work_mu_);
    out = FlushImmutable();
  }

  uint64_t final_wal = 0;
  {
    std::lock_guard<std::mutex> lk(mu_);
    final_wal = active_wal_no_;
    closed_ = true;
  }
  if (options_.wal) {
    Status s = wal_.Close();
    if (out.ok()) out = s;
    // Everything is flushed; the live segment holds nothing unrecovered.
    if (out.ok() && final_wal != 0) {
      const std::string wp = JoinPath(dir_, WalFileName(final_wal));
      if (FileExists(wp)) {
        Status rs = RemoveFile(wp);
        if (out.ok()) out = rs;
      }
    }
  }
  Status ms = manifest_.Close();
  if (out.ok()) out = ms;
  return out;
}

Result<SequenceNumber> Engine::Put(std::string_view key,
                                   std::string_view value) {
  return Write(key, EntryType::kPut, value);
}

Result<SequenceNumber> Engine::Delete(std::string_view key) {
  return Write(key, EntryType::kTombstone, std::string_view());
}

Result<SequenceNumber> Engine::Write(std::string_view key, EntryType type,
                                     std::string_view value) {
  Status s = ValidateUserKey(key);
  if (!s.ok()) return s;
  if (value.size() > kMaxValueLen) {
    return Status::InvalidArgument("value exceeds size cap");
  }

  std::unique_lock<std::mutex> lk(mu_);
  if (closed_) return Status::Closed();
  if (!bg_error_.ok()) return bg_error_;
  if (seq_ >= kMaxSequenceNumber) {
    return Status::InvalidArgument("sequence space exhausted");
  }
  const SequenceNumber seq = ++seq_;

  KVEntry entry;
  entry.key.user_key.assign(key);
  entry.key.seq = seq;
  entry.key.type = type;
  entry.value.assign(value);

  if (options_.wal) {
    s = wal_.AddEntry(entry);
    if (s.ok() && options_.sync_wal) s = wal_.Sync();
    if (!s.ok()) return s;
  }
  active_->Add(entry.key, entry.value);

  if (active_->ApproximateMemoryUsage() >= options_.memtable_budget) {
    s = MakeRoomForWrite(&lk);
    if (!s.ok()) return s;
  }
  return seq;
}

Status Engine::MakeRoomForWrite(std::unique_lock<std::mutex>* lock) {
  Status s = SealActiveLocked(lock);
  if (!s.ok()) return s;
  if (options_.background_jobs) {
    flush_pending_ = true;
    cv_.notify_all();
    return Status::OK();
  }
  // Inline mode: run the flush (and any due compactions) right here.
  // work_mu_ must be taken without holding mu_.
  lock->unlock();
  {
    std::lock_guard<std::mutex> work(work_mu_);
    s = FlushImmutable();
    if (s.ok()) s = MaybeScheduleCompaction();
  }
  lock->lock();
  return s;
}

Status Engine::SealActiveLocked(std::unique_lock<std::mutex>* lock) {
  // Open can fail before recovery builds the memtable; Close still runs.
  if (active_ == nullptr) return Status::OK();
  while (immutable_ != nullptr) {
    if (!bg_error_.ok()) return bg_error_;
    if (worker_shutdown_ && !options_.background_jobs) {
      return Status::FlushError("immutable memtable stuck without worker");
    }
    cv_.wait(*lock);
  }
  if (active_->empty()) return Status::OK();

  immutable_ = active_;
  immutable_->Seal();
  immutable_wal_no_ = active_wal_no_;
  active_ = std::make_shared<MemTable>();
  if (options_.wal) {
    Status s = wal_.Close();
    if (s.ok()) s = NewWalSegment();
    if (!s.ok()) return s;
  } else {
    active_wal_no_ = 0;
  }
  return Status::OK();
}

Status Engine::FlushImmutable() {
  std::shared_ptr<MemTable> imm;
  uint64_t wal_no = 0;
  uint64_t file_no = 0;
  SequenceNumber seq_hw = 0;
  {
    std::lock_guard<std::mutex> lk(mu_);
    imm = immutable_;
    if (imm == nullptr) return Status::OK();
    wal_no = immutable_wal_no_;
    file_no = next_file_no_++;
    seq_hw = seq_;
  }

  if (!imm->empty()) {
    TableBuilder builder(JoinPath(dir_, SstFileName(file_no)),
                         options_.block_size_target,
                         options_.mode == EngineMode::kMetaHive
                             ? PackerMode::kColocate
                             : PackerMode::kLegacy);
    auto add = [&builder](const KVEntry& e) { return builder.Add(e); };

    Status s;
    if (options_.mode == EngineMode::kMetaHive) {
      MetadataInjector injector(*hash_, add);
      imm->ForEach([&](const InternalKey& k, const std::string& v) {
        KVEntry e;
        e.key = k;
        e.value = v;
        s = injector.Push(e);
        return s.ok();
      });
      if (s.ok()) s = injector.Finish();
    } else {
      imm->ForEach([&](const InternalKey& k, const std::string& v) {
        KVEntry e;
        e.key = k;
        e.value = v;
        s = add(e);
        return s.ok();
      });
    }
    if (s.ok()) s = builder.Finish();
    if (!s.ok()) {
      builder.Abandon();
      return Status::FlushError(s.message());
    }

    FileMeta meta;
    meta.file_no = file_no;
    meta.level = 0;
    meta.smallest = builder.smallest();
    meta.largest = builder.largest();
    VersionEdit edit;
    edit.added.push_back(meta);
    edit.seq_high_water = seq_hw;
    s = WriteManifestEdit(edit);
    if (!s.ok()) {
      RemoveFile(builder.path());
      return Status::FlushError(s.message());
    }
    {
      std::lock_guard<std::mutex> lk(mu_);
      Status as = version_.Apply(edit);
      if (!as.ok()) return as;
    }
  }

  {
    std::lock_guard<std::mutex> lk(mu_);
    immutable_ = nullptr;
    immutable_wal_no_ = 0;
    cv_.notify_all();
  }
  if (wal_no != 0) {
    const std::string wp = JoinPath(dir_, WalFileName(wal_no));
    if (FileExists(wp)) {
      Status s = RemoveFile(wp);
      if (!s.ok()) return s;
    }
  }
  return Status::OK();
}

Status Engine::Flush() {
  {
    std::unique_lock<std::mutex> lk(mu_);
    if (closed_) return Status::Closed();
    if (!bg_error_.ok()) return bg_error_;
    Status s = SealActiveLocked(&lk);
    if (!s.ok()) return s;
  }
  std::lock_guard<std::mutex> work(work_mu_);
  return FlushImmutable();
}

Status Engine::MaybeScheduleCompaction() {
  // Caller holds work_mu_. One forward sweep: compact any level over its
  // file-count threshold; spill lands one level down, which is checked
  // next. L0 triggers at l0_trigger files, level N at level_ratio^N.
  for (int level = 0; level + 1 < kNumLevels; level++) {
    uint64_t allowed = static_cast<uint64_t>(options_.l0_trigger);
    if (level > 0) {
      allowed = 1;
      for (int i = 0; i < level; i++) {
        allowed *= static_cast<uint64_t>(options_.level_ratio);
      }
    }
    for (;;) {
      size_t count;
      {
        std::lock_guard<std::mutex> lk(mu_);
        count = version_.level(level).size();
      }
      if (count < allowed || count == 0) break;
      auto r = CompactLevelInternal(level);
      if (!r.ok()) return r.status();
    }
  }
  return Status::OK();
}

void Engine::BackgroundWorker() {
  std::unique_lock<std::mutex> lk(mu_);
  for (;;) {
    while (!worker_shutdown_ && immutable_ == nullptr) cv_.wait(lk);
    if (immutable_ == nullptr && worker_shutdown_) return;
    flush_pending_ = false;
    lk.unlock();
    Status s;
    {
      std::lock_guard<std::mutex> work(work_mu_);
      s = FlushImmutable();
      if (s.ok()) s = MaybeScheduleCompaction();
    }
    lk.lock();
    if (!s.ok()) {
      bg_error_ = s;
      cv_.notify_all();
    }
  }
}

Engine::ReadSnapshot Engine::TakeSnapshot() {
  std::lock_guard<std::mutex> lk(mu_);
  ReadSnapshot snap;
  snap.closed = closed_;
  snap.active = active_;
  snap.immutable = immutable_;
  snap.levels.reserve(kNumLevels);
  for (int l = 0; l < kNumLevels; l++) {
    snap.levels.push_back(version_.level(l));
  }
  snap.seq = seq_;
  return snap;
}

Result<std::shared_ptr<TableReader>> Engine::GetReader(uint64_t file_no) {
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = readers_.find(file_no);
    if (it != readers_.end()) return it->second;
  }
  auto r = TableReader::Open(JoinPath(dir_, SstFileName(file_no)));
  if (!r.ok()) return r.status();
  std::shared_ptr<TableReader> reader(std::move(*r));
  std::lock_guard<std::mutex> lk(mu_);
  auto [it, inserted] = readers_.emplace(file_no, std::move(reader));
  return it->second;
}

Status Engine::LookupInFiles(const ReadSnapshot& snap, std::string_view key,
                             KVEntry* out, bool* found, uint64_t* file_no,
                             size_t* block_idx,
                             std::vector<KVEntry>* block_entries,
                             size_t* blocks_read, bool keep_block) {
  *found = false;
  KVEntry best;
  uint64_t best_file = 0;
  size_t best_block = 0;
  std::vector<KVEntry> best_entries;

  // Every file that may hold the key gets probed and the winner is the
  // entry that sorts first (highest sequence). That stays correct even
  // when ingested files carry sequence numbers out of step with flush
  // order, which a newest-file-first early return would not.
  auto consider = [&](const FileMeta& fm) -> Status {
    if (key < fm.smallest.user_key || key > fm.largest.user_key) {
      return Status::OK();
    }
    auto reader = GetReader(fm.file_no);
    if (!reader.ok()) return reader.status();
    auto lookup = (*reader)->GetNewest(key, snap.seq, keep_block);
    if (!lookup.ok()) return lookup.status();
    *blocks_read += lookup->blocks_read;
    if (lookup->found &&
        (!*found || CompareInternal(lookup->entry.key, best.key) < 0)) {
      *found = true;
      best = std::move(lookup->entry);
      best_file = fm.file_no;
      best_block = lookup->block_idx;
      best_entries = std::move(lookup->block_entries);
    }
    return Status::OK();
  };

  const auto& l0 = snap.levels[0];
  for (auto it = l0.rbegin(); it != l0.rend(); ++it) {
    Status s = consider(*it);
    if (!s.ok()) return s;
  }
  for (int level = 1; level < kNumLevels; level++) {
    const auto& files = snap.levels[level];
    if (files.empty()) continue;
    // Disjoint and sorted by smallest key within the level.
    auto it = std::lower_bound(files.begin(), files.end(), key,
                               [](const FileMeta& f, std::string_view k) {
                                 return std::string_view(f.largest.user_key) <
                                        k;
                               });
    if (it == files.end() || key < it->smallest.user_key) continue;
    Status s = consider(*it);
    if (!s.ok()) return s;
  }

  if (*found) {
    *out = std::move(best);
    *file_no = best_file;
    *block_idx = best_block;
    *block_entries = std::move(best_entries);
  }
  return Status::OK();
}

Result<std::string> Engine::Get(std::string_view key) {
  Status s = ValidateUserKey(key);
  if (!s.ok()) return s;
  ReadSnapshot snap = TakeSnapshot();
  if (snap.closed) return Status::Closed();

  for (const auto& mt : {snap.active, snap.immutable}) {
    if (!mt) continue;
    auto r = mt->Get(key, snap.seq);
    if (r.kind == MemTable::LookupResult::Kind::kValue) {
      return std::move(r.value);
    }
    if (r.kind == MemTable::LookupResult::Kind::kDeletion) {
      return Status::NotFound();
    }
  }

  KVEntry entry;
  bool found = false;
  uint64_t file_no = 0;
  size_t block_idx = 0;
  size_t blocks_read = 0;
  std::vector<KVEntry> block_entries;
  s = LookupInFiles(snap, key, &entry, &found, &file_no, &block_idx,
                    &block_entries, &blocks_read, /*keep_block=*/false);
  if (!s.ok()) return s;
  if (!found || entry.key.type == EntryType::kTombstone) {
    return Status::NotFound();
  }
  if (entry.key.type != EntryType::kPut) {
    return Status::Corruption("unexpected entry type in lookup");
  }
  return std::move(entry.value);
}

Result<Engine::VerifiedGet> Engine::GetVerified(std::string_view key) {
  Status s = ValidateUserKey(key);
  if (!s.ok()) return s;
  ReadSnapshot snap = TakeSnapshot();
  if (snap.closed) return Status::Closed();

  // Memtable hits verify trivially: metadata exists only from flush on.
  for (const auto& mt : {snap.active, snap.immutable}) {
    if (!mt) continue;
    auto r = mt->Get(key, snap.seq);
    if (r.kind == MemTable::LookupResult::Kind::kValue) {
      VerifiedGet out;
      out.value = std::move(r.value);
      out.verdict = Verdict::kValidated;
      out.blocks_read = 0;
      out.had_metadata = false;
      return out;
    }
    if (r.kind == MemTable::LookupResult::Kind::kDeletion) {
      return Status::NotFound();
    }
  }

  KVEntry entry;
  bool found = false;
  uint64_t file_no = 0;
  size_t block_idx = 0;
  size_t blocks_read = 0;
  std::vector<KVEntry> block_entries;
  s = LookupInFiles(snap, key, &entry, &found, &file_no, &block_idx,
                    &block_entries, &blocks_read, /*keep_block=*/true);
  if (!s.ok()) return s;
  if (!found || entry.key.type == EntryType::kTombstone) {
    return Status::NotFound();
  }

  VerifiedGet out;
  out.value = entry.value;
  out.blocks_read = blocks_read;

  // The sibling lives at (key || 0x01, same seq, Tombstone). Co-location
  // puts it in the block just read; the fallback seeks within the same
  // file (repair and flush always emit the pair into one file).
  InternalKey meta_key;
  meta_key.user_key = MakeMetadataKey(key);
  meta_key.seq = entry.key.seq;
  meta_key.type = EntryType::kTombstone;

  KVEntry meta_entry;
  bool have_meta =
      TableReader::FindInBlock(block_entries, meta_key, &meta_entry);
  if (!have_meta) {
    auto reader = GetReader(file_no);
    if (!reader.ok()) return reader.status();
    size_t b = (*reader)->SeekBlock(meta_key);
    if (b < (*reader)->num_blocks() && b != block_idx) {
      std::string bytes;
      s = (*reader)->ReadBlock(b, &bytes);
      if (!s.ok()) return s;
      out.blocks_read++;
      std::vector<KVEntry> entries;
      s = TableReader::ParseBlock(bytes, &entries);
      if (!s.ok()) return s;
      have_meta = TableReader::FindInBlock(entries, meta_key, &meta_entry);
    }
  }

  if (have_meta) {
    out.had_metadata = true;
    MetadataPayload payload;
    if (!ParseMetadataPayload(meta_entry.value, &payload)) {
      out.verdict = Verdict::kCorruptedBoth;
    } else {
      out.verdict = DataIntegrity(entry, payload, *hash_);
    }
  } else {
    out.had_metadata = false;
    out.verdict = Verdict::kValidated;
  }
  return out;
}

Result<std::vector<Engine::ScanItem>> Engine::Scan(std::string_view lo,
                                                   std::string_view hi) {
  if (!hi.empty() && lo >= hi) {
    return std::vector<ScanItem>();
  }
  ReadSnapshot snap = TakeSnapshot();
  if (snap.closed) return Status::Closed();

  std::vector<KVEntry> all;
  auto scan_memtable = [&](const std::shared_ptr<MemTable>& mt) {
    if (!mt) return;
    for (auto it = mt->SeekUserKey(lo); it != mt->end(); ++it) {
      const InternalKey& k = it->first;
      if (!hi.empty() && k.user_key >= hi) break;
      if (k.seq > snap.seq) continue;
      KVEntry e;
      e.key = k;
      e.value = it->second;
      all.push_back(std::move(e));
    }
  };
  scan_memtable(snap.active);
  scan_memtable(snap.immutable);

  for (int level = 0; level < kNumLevels; level++) {
    for (const FileMeta& fm : snap.levels[level]) {
      if (fm.largest.user_key < lo) continue;
      if (!hi.empty() && fm.smallest.user_key >= hi) continue;
      auto reader = GetReader(fm.file_no);
      if (!reader.ok()) return reader.status();
      Status s = (*reader)->ScanRange(lo, hi, &all);
      if (!s.ok()) return s;
    }
  }

  // Order by internal key; value bytes break exact-duplicate ties so the
  // result is deterministic regardless of source order.
  std::sort(all.begin(), all.end(), [](const KVEntry& a, const KVEntry& b) {
    int c = CompareInternal(a.key, b.key);
    if (c != 0) return c < 0;
    return a.value < b.value;
  });

  std::vector<ScanItem> items;
  std::string_view last_user;
  bool has_last = false;
  for (KVEntry& e : all) {
    if (e.key.seq > snap.seq) continue;
    if (has_last && e.key.user_key == last_user) continue;
    last_user = e.key.user_key;
    has_last = true;
    // The newest version decides: only a Put surfaces. Tombstone-typed
    // entries — deletions and metadata alike — suppress the key.
    if (e.key.type == EntryType::kPut) {
      ScanItem item;
      item.key = e.key.user_key;
      item.value = std::move(e.value);
      items.push_back(std::move(item));
    }
  }
  return items;
}

Result<Engine::CompactionResult> Engine::CompactLevel(int level) {
  std::lock_guard<std::mutex> work(work_mu_);
  {
    std::lock_guard<std::mutex> lk(mu_);
    if (closed_) return Status::Closed();
  }
  return CompactLevelInternal(level);
}

Result<std::vector<Engine::CompactionResult>> Engine::CompactAll() {
  std::lock_guard<std::mutex> work(work_mu_);
  {
    std::lock_guard<std::mutex> lk(mu_);
    if (closed_) return Status::Closed();
  }
  std::vector<CompactionResult> results;
  for (;;) {
    int lowest = -1;
    int nonempty = 0;
    {
      std::lock_guard<std::mutex> lk(mu_);
      for (int l = 0; l < kNumLevels; l++) {
        if (!version_.level(l).empty()) {
          nonempty++;
          if (lowest < 0) lowest = l;
        }
      }
    }
    if (nonempty == 0) break;
    // Settled: one non-L0 level holds everything. L0 always compacts at
    // least once so a lone flushed file still gets bottommost treatment.
    if (nonempty == 1 && lowest != 0) break;
    auto r = CompactLevelInternal(lowest);
    if (!r.ok()) return r.status();
    results.push_back(std::move(*r));
  }
  return results;
}

Result<Engine::CompactionResult> Engine::CompactLevelInternal(int level) {
  if (level < 0 || level + 1 >= kNumLevels) {
    return Status::InvalidArgument("level out of range");
  }

  CompactionResult result;
  result.input_level = level;

  // Pick the oldest file of the level plus every next-level file whose
  // user-key range overlaps it.
  std::vector<FileMeta> inputs;
  bool bottommost = true;
  {
    std::lock_guard<std::mutex> lk(mu_);
    const auto& level_files = version_.level(level);
    if (level_files.empty()) {
      return Status::InvalidArgument("level " + std::to_string(level) +
                                     " is empty");
    }
    const FileMeta* pick = &level_files[0];
    for (const FileMeta& f : level_files) {
      if (f.file_no < pick->file_no) pick = &f;
    }
    inputs.push_back(*pick);
    for (const FileMeta& f : version_.level(level + 1)) {
      if (UserRangesOverlap(pick->smallest.user_key, pick->largest.user_key,
                            f.smallest.user_key, f.largest.user_key)) {
        inputs.push_back(f);
      }
    }
    for (int l = level + 2; l < kNumLevels; l++) {
      if (!version_.level(l).empty()) {
        bottommost = false;
        break;
      }
    }
  }
  result.bottommost = bottommost;
  for (const FileMeta& f : inputs) result.input_files.push_back(f.file_no);

  // Load every input block into per-file sourced streams. Each entry
  // remembers its file and block so a repair retry can re-read the
  // exact bytes it came from.
  std::vector<std::vector<SourcedEntry>> streams(inputs.size());
  for (size_t i = 0; i < inputs.size(); i++) {
    auto reader = GetReader(inputs[i].file_no);
    if (!reader.ok()) return reader.status();
    for (size_t b = 0; b < (*reader)->num_blocks(); b++) {
      std::string bytes;
      Status s = (*reader)->ReadBlock(b, &bytes);
      if (!s.ok()) return Status::CompactionError(s.message());
      std::vector<KVEntry> entries;
      s = TableReader::ParseBlock(bytes, &entries);
      if (!s.ok()) return Status::CompactionError(s.message());
      for (KVEntry& e : entries) {
        SourcedEntry se;
        se.entry = std::move(e);
        se.source_id = static_cast<int>(i);
        se.block_idx = b;
        streams[i].push_back(std::move(se));
      }
    }
  }

  // K-way merge; on an exact internal-key tie the upper-level stream
  // (index 0) wins and the duplicate is skipped below.
  std::vector<size_t> pos(streams.size(), 0);
  auto next_entry = [&]() -> SourcedEntry* {
    int best = -1;
    for (size_t i = 0; i < streams.size(); i++) {
      if (pos[i] >= streams[i].size()) continue;
      if (best < 0 ||
          CompareInternal(streams[i][pos[i]].entry.key,
                          streams[best][pos[best]].entry.key) < 0) {
        best = static_cast<int>(i);
      }
    }
    if (best < 0) return nullptr;
    return &streams[best][pos[best]++];
  };

  const PackerMode pmode = options_.mode == EngineMode::kMetaHive
                               ? PackerMode::kColocate
                               : PackerMode::kLegacy;

  // Output chain: one builder at a time, rolling to a new file once the
  // size cap is reached — but only where the group changes, so a KV and
  // its metadata never straddle files.
  std::vector<FileMeta> output_metas;
  uint64_t cur_no = 0;
  std::unique_ptr<TableBuilder> cur;
  std::string last_emit_group;
  bool has_emit = false;

  auto emit = [&](const KVEntry& e) -> Status {
    std::string_view group = pmode == PackerMode::kColocate
                                 ? ClusterKey(e.key)
                                 : std::string_view(e.key.user_key);
    if (cur && cur->pending_bytes() >= options_.max_output_file_bytes &&
        has_emit && group != last_emit_group) {
      Status s = cur->Finish();
      if (!s.ok()) return s;
      FileMeta m;
      m.file_no = cur_no;
      m.level = level + 1;
      m.smallest = cur->smallest();
      m.largest = cur->largest();
      output_metas.push_back(std::move(m));
      cur.reset();
    }
    if (!cur) {
      {
        std::lock_guard<std::mutex> lk(mu_);
        cur_no = next_file_no_++;
      }
      cur = std::make_unique<TableBuilder>(
          JoinPath(dir_, SstFileName(cur_no)), options_.block_size_target,
          pmode);
    }
    last_emit_group.assign(group);
    has_emit = true;
    return cur->Add(e);
  };

  // Repair plumbing (MetaHive mode only).
  std::unique_ptr<RepairPass> repair;
  if (options_.mode == EngineMode::kMetaHive) {
    RepairConfig rcfg;
    rcfg.max_retries = options_.max_retries;
    rcfg.on_persistent = options_.on_persistent;
    RetrySource retry = [this, &inputs](
                            const SourcedEntry& se) -> Result<KVEntry> {
      if (se.source_id < 0 ||
          se.source_id >= static_cast<int>(inputs.size())) {
        return Status::InvalidArgument("entry has no readable source");
      }
      // Fresh open + fresh block read: nothing between this and the disk.
      auto reader = TableReader::Open(
          JoinPath(dir_, SstFileName(inputs[se.source_id].file_no)));
      if (!reader.ok()) return reader.status();
      std::string bytes;
      Status s = (*reader)->ReadBlock(se.block_idx, &bytes);
      if (!s.ok()) return s;
      std::vector<KVEntry> entries;
      s = TableReader::ParseBlock(bytes, &entries);
      if (!s.ok()) return s;
      KVEntry out;
      if (!TableReader::FindInBlock(entries, se.entry.key, &out)) {
        return Status::NotFound("entry missing on re-read");
      }
      return out;
    };
    QuarantineSink sink = [this](const QuarantineRecord& rec) -> Status {
      std::string payload;
      rec.EncodeTo(&payload);
      std::string framed;
      AppendLogRecord(&framed, payload);
      AppendFile f;
      Status s = f.Open(QuarantineLogPath(), /*truncate=*/false);
      if (!s.ok()) return s;
      s = f.Append(framed);
      if (s.ok()) s = f.Sync();
      Status c = f.Close();
      return s.ok() ? c : s;
    };
    ClusterObserver observer;
    {
      std::lock_guard<std::mutex> lk(mu_);
      observer = cluster_observer_;
    }
    repair = std::make_unique<RepairPass>(*hash_, rcfg, std::move(retry),
                                          std::move(sink), emit,
                                          std::move(observer));
  }

  // Merge → shadow → (repair →) emit. Shadowing keeps the newest version
  // per user key. MetaHive mode exempts metadata entries (the repair
  // correspondence prunes the stale ones as orphans); legacy mode treats
  // every key uniformly, which is what purges migrated metadata at the
  // bottommost level.
  auto cleanup_outputs = [&]() {
    if (cur) cur->Abandon();
    for (const FileMeta& m : output_metas) {
      RemoveFile(JoinPath(dir_, SstFileName(m.file_no)));
    }
  };
  auto fail = [&](const Status& s) -> Status {
    cleanup_outputs();
    if (s.code() == Status::Code::kCompactionError) return s;
    return Status::CompactionError(s.message());
  };

  std::string last_user_key;
  bool has_user = false;
  InternalKey last_popped;
  bool first_popped = true;
  SourcedEntry* se = nullptr;
  while ((se = next_entry()) != nullptr) {
    if (!first_popped && CompareInternal(se->entry.key, last_popped) == 0) {
      continue;  // exact duplicate from a recovery re-flush
    }
    last_popped = se->entry.key;
    first_popped = false;

    Status es;
    if (options_.mode == EngineMode::kMetaHive) {
      if (IsMetadataEntry(se->entry.key)) {
        es = repair->Push(std::move(*se));
      } else {
        if (has_user && se->entry.key.user_key == last_user_key) continue;
        last_user_key = se->entry.key.user_key;
        has_user = true;
        if (bottommost && se->entry.key.type == EntryType::kTombstone) {
          continue;  // deletion fulfilled: nothing below to shadow
        }
        es = repair->Push(std::move(*se));
      }
    } else {
      if (has_user && se->entry.key.user_key == last_user_key) continue;
      last_user_key = se->entry.key.user_key;
      has_user = true;
      if (bottommost && se->entry.key.type == EntryType::kTombstone) {
        continue;  // drops deletions and any migrated metadata alike
      }
      es = emit(se->entry);
    }
    if (!es.ok()) return fail(es);
  }
  if (repair) {
    Status es = repair->Finish();
    if (!es.ok()) return fail(es);
    result.repair = repair->report();
  }
  if (cur) {
    Status es = cur->Finish();
    if (!es.ok()) return fail(es);
    FileMeta m;
    m.file_no = cur_no;
    m.level = level + 1;
    m.smallest = cur->smallest();
    m.largest = cur->largest();
    output_metas.push_back(std::move(m));
    cur.reset();
  }

  VersionEdit edit;
  edit.removed.emplace_back(level, inputs[0].file_no);
  for (size_t i = 1; i < inputs.size(); i++) {
    edit.removed.emplace_back(level + 1, inputs[i].file_no);
  }
  for (const FileMeta& m : output_metas) {
    edit.added.push_back(m);
    result.output_files.push_back(m.file_no);
  }
  Status cs = WriteManifestEdit(edit);
  if (!cs.ok()) return fail(cs);
  {
    std::lock_guard<std::mutex> lk(mu_);
    Status as = version_.Apply(edit);
    if (!as.ok()) return as;
    for (const FileMeta& f : inputs) readers_.erase(f.file_no);
    total_repair_.MergeFrom(result.repair);
  }
  for (const FileMeta& f : inputs) {
    Status rs = RemoveFile(JoinPath(dir_, SstFileName(f.file_no)));
    if (!rs.ok()) return rs;
  }
  return result;
}

Result<Engine::IngestResult> Engine::IngestSst(
    const std::string& external_path) {
  std::lock_guard<std::mutex> work(work_mu_);
  {
    std::lock_guard<std::mutex> lk(mu_);
    if (closed_) return Status::Closed();
  }

  auto reader = TableReader::Open(external_path);
  if (!reader.ok()) {
    Status s = reader.status();
    if (s.code() == Status::Code::kRejectFile) return s;
    return Status::RejectFile(s.message());
  }

  // Full validation scan: framing, ordering, and the stats the caller
  // gets back. A file that fails any of it is refused outright.
  IngestResult res;
  SequenceNumber max_seq = 0;
  InternalKey smallest, largest, prev;
  bool first = true;
  for (size_t b = 0; b < (*reader)->num_blocks(); b++) {
    std::string bytes;
    Status s = (*reader)->ReadBlock(b, &bytes);
    if (!s.ok()) return Status::RejectFile(s.message());
    std::vector<KVEntry> entries;
    s = TableReader::ParseBlock(bytes, &entries);
    if (!s.ok()) return Status::RejectFile(s.message());
    for (const KVEntry& e : entries) {
      if (!first && CompareInternal(prev, e.key) >= 0) {
        return Status::RejectFile("entries out of order");
      }
      if (first) smallest = e.key;
      largest = e.key;
      prev = e.key;
      first = false;
      res.entry_count++;
      if (IsMetadataEntry(e.key)) {
        res.metadata_count++;
      } else if (e.key.type == EntryType::kPut) {
        res.put_count++;
      }
      max_seq = std::max(max_seq, e.key.seq);
    }
  }
  if (first) return Status::RejectFile("table holds no entries");

  std::string bytes;
  Status s = ReadFileToString(external_path, &bytes);
  if (!s.ok()) return s;
  uint64_t file_no;
  {
    std::lock_guard<std::mutex> lk(mu_);
    file_no = next_file_no_++;
  }
  res.file_no = file_no;
  res.file_bytes = bytes.size();
  const std::string dest = JoinPath(dir_, SstFileName(file_no));
  s = WriteFileAtomic(dest, bytes);
  if (!s.ok()) return s;

  FileMeta meta;
  meta.file_no = file_no;
  meta.level = 0;
  meta.smallest = smallest;
  meta.largest = largest;
  VersionEdit edit;
  edit.added.push_back(meta);
  edit.seq_high_water = max_seq;
  s = WriteManifestEdit(edit);
  if (!s.ok()) {
    RemoveFile(dest);
    return s;
  }
  {
    std::lock_guard<std::mutex> lk(mu_);
    Status as = version_.Apply(edit);
    if (!as.ok()) return as;
    seq_ = std::max(seq_, max_seq);
  }
  return res;
}

std::vector<Engine::LiveFile> Engine::ListLiveFiles() {
  std::lock_guard<std::mutex> lk(mu_);
  std::vector<LiveFile> out;
  for (int l = 0; l < kNumLevels; l++) {
    for (const FileMeta& f : version_.level(l)) {
      LiveFile lf;
      lf.file_no = f.file_no;
      lf.level = l;
      lf.path = JoinPath(dir_, SstFileName(f.file_no));
      out.push_back(std::move(lf));
    }
  }
  return out;
}

Status Engine::DropFile(uint64_t file_no) {
  std::lock_guard<std::mutex> work(work_mu_);
  int level = -1;
  {
    std::lock_guard<std::mutex> lk(mu_);
    if (closed_) return Status::Closed();
    for (int l = 0; l < kNumLevels && level < 0; l++) {
      for (const FileMeta& f : version_.level(l)) {
        if (f.file_no == file_no) {
          level = l;
          break;
        }
      }
    }
  }
  if (level < 0) {
    return Status::NotFound("file " + std::to_string(file_no) +
                            " not in live set");
  }
  VersionEdit edit;
  edit.removed.emplace_back(level, file_no);
  Status s = WriteManifestEdit(edit);
  if (!s.ok()) return s;
  {
    std::lock_guard<std::mutex> lk(mu_);
    Status as = version_.Apply(edit);
    if (!as.ok()) return as;
    readers_.erase(file_no);
  }
  return RemoveFile(JoinPath(dir_, SstFileName(file_no)));
}

std::string Engine::QuarantineLogPath() const {
  return JoinPath(dir_, kQuarantineName);
}

SequenceNumber Engine::last_seq() {
  std::lock_guard<std::mutex> lk(mu_);
  return seq_;
}

size_t Engine::NumFilesAtLevel(int level) {
  std::lock_guard<std::mutex> lk(mu_);
  if (level < 0 || level >= kNumLevels) return 0;
  return version_.level(level).size();
}

RepairReport Engine::TotalRepairReport() {
  std::lock_guard<std::mutex> lk(mu_);
  return total_repair_;
}

void Engine::SetClusterObserver(ClusterObserver observer) {
  std::lock_guard<std::mutex> lk(mu_);
  cluster_observer_ = std::move(observer);
}

Status Engine::WriteManifestEdit(const VersionEdit& edit) {
  return manifest_.Append(edit);
}

Status DestroyEngineDir(const std::string& path) {
  std::error_code ec;
  std::filesystem::remove_all(path, ec);
  if (ec) {
    return Status::IOError("remove_all " + path + ": " + ec.message());
  }
  return Status::OK();
}

}  // namespace metahive
