// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "metahive/engine.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "metahive/entry_codec.h"
#include "metahive/env.h"
#include "metahive/metadata.h"
#include "metahive/sst_format.h"
#include "metahive/table_builder.h"
#include "metahive/table_reader.h"
#include "test_util.h"

namespace metahive {
namespace {

using testing::ScopedTempDir;
using testing::TestEntry;

Options TestOptions(EngineMode mode = EngineMode::kMetaHive) {
  Options opts;
  opts.mode = mode;
  // Large budget: tests drive flushes explicitly unless they say otherwise.
  opts.memtable_budget = 8 * 1024 * 1024;
  opts.l0_trigger = 100;
  return opts;
}

std::unique_ptr<Engine> MustOpen(const std::string& dir, const Options& opts) {
  auto db = Engine::Open(dir, opts);
  EXPECT_TRUE(db.ok()) << db.status().message();
  return db.ok() ? std::move(*db) : nullptr;
}

// Flips `mask` bits of the byte at `byte_in_value` inside the stored value
// of the entry matching `target`, in place on disk.
Status FlipValueByte(const std::string& sst_path, const InternalKey& target,
                     size_t byte_in_value, uint8_t mask) {
  auto reader = TableReader::Open(sst_path);
  if (!reader.ok()) return reader.status();
  for (size_t b = 0; b < (*reader)->num_blocks(); b++) {
    std::string bytes;
    Status s = (*reader)->ReadBlock(b, &bytes);
    if (!s.ok()) return s;
    size_t pos = 0;
    while (pos < bytes.size()) {
      KVEntry e;
      EntryLayout layout;
      s = DecodeEntryAt(bytes, &pos, &e, &layout);
      if (!s.ok()) return s;
      if (CompareInternal(e.key, target) != 0) continue;
      if (byte_in_value >= layout.value_size) {
        return Status::InvalidArgument("byte offset outside value");
      }
      uint64_t abs = (*reader)->index()[b].offset + layout.value_offset +
                     byte_in_value;
      std::string cur;
      s = ReadFileRange(sst_path, abs, 1, &cur);
      if (!s.ok()) return s;
      cur[0] = static_cast<char>(cur[0] ^ mask);
      return OverwriteFileRange(sst_path, abs, cur);
    }
  }
  return Status::NotFound("target entry not present in table");
}

std::string OnlySstPath(Engine& db) {
  std::vector<Engine::LiveFile> files = db.ListLiveFiles();
  EXPECT_EQ(files.size(), 1u);
  return files.empty() ? std::string() : files[0].path;
}

// Copies a live engine directory, byte for byte, to simulate the on-disk
// state a crash would leave behind (no Close, no final flush).
void SnapshotDir(const std::string& from, const std::string& to) {
  std::filesystem::copy(from, to,
                        std::filesystem::copy_options::recursive |
                            std::filesystem::copy_options::overwrite_existing);
}

TEST(Engine, OpenCreatesLayoutAndClosesCleanly) {
  ScopedTempDir dir("engine");
  const std::string root = dir.file("db");
  {
    auto db = MustOpen(root, TestOptions());
    ASSERT_NE(db, nullptr);
    ASSERT_TRUE(db->Put("hello", "world").ok());
    EXPECT_TRUE(FileExists(root + "/ENGINE"));
    EXPECT_TRUE(FileExists(root + "/MANIFEST"));
    EXPECT_TRUE(db->Close().ok());
    EXPECT_TRUE(db->Close().ok());  // double close is a no-op
  }
  // Closed engines refuse work.
  auto db = MustOpen(root, TestOptions());
  ASSERT_TRUE(db->Close().ok());
  EXPECT_EQ(db->Put("k", "v").status().code(), Status::Code::kClosed);
  EXPECT_EQ(db->Get("hello").status().code(), Status::Code::kClosed);
}

TEST(Engine, ReadYourWrites) {
  ScopedTempDir dir("engine");
  auto db = MustOpen(dir.file("db"), TestOptions());

  ASSERT_TRUE(db->Put("k", "v1").ok());
  auto g = db->Get("k");
  ASSERT_TRUE(g.ok());
  EXPECT_EQ(*g, "v1");

  ASSERT_TRUE(db->Put("k", "v2").ok());
  EXPECT_EQ(*db->Get("k"), "v2");

  ASSERT_TRUE(db->Delete("k").ok());
  EXPECT_EQ(db->Get("k").status().code(), Status::Code::kNotFound);

  ASSERT_TRUE(db->Put("k", "v3").ok());
  EXPECT_EQ(*db->Get("k"), "v3");

  EXPECT_EQ(db->Get("never-written").status().code(),
            Status::Code::kNotFound);
}

TEST(Engine, RejectsInvalidUserKeys) {
  ScopedTempDir dir("engine");
  auto db = MustOpen(dir.file("db"), TestOptions());

  const std::string marker_key = "k" + std::string(1, '\x01');
  const std::string nul_key = std::string("a\x00b", 3);
  EXPECT_EQ(db->Put("", "v").status().code(), Status::Code::kInvalidKey);
  EXPECT_EQ(db->Put(marker_key, "v").status().code(),
            Status::Code::kInvalidKey);
  EXPECT_EQ(db->Put(nul_key, "v").status().code(), Status::Code::kInvalidKey);
  EXPECT_EQ(db->Delete(marker_key).status().code(),
            Status::Code::kInvalidKey);
  EXPECT_EQ(db->Get(marker_key).status().code(), Status::Code::kInvalidKey);
  EXPECT_EQ(db->GetVerified(marker_key).status().code(),
            Status::Code::kInvalidKey);

  // Interior marker bytes are legal.
  const std::string inner = "a" + std::string(1, '\x01') + "b";
  ASSERT_TRUE(db->Put(inner, "v").ok());
  EXPECT_EQ(*db->Get(inner), "v");
}

TEST(Engine, FlushInjectsVerifiableMetadataSiblings) {
  ScopedTempDir dir("engine");
  auto db = MustOpen(dir.file("db"), TestOptions());

  const int n = 10;
  for (int i = 0; i < n; i++) {
    ASSERT_TRUE(
        db->Put("key" + std::to_string(i), "value" + std::to_string(i)).ok());
  }
  ASSERT_TRUE(db->Flush().ok());
  EXPECT_EQ(db->NumFilesAtLevel(0), 1u);

  auto reader = TableReader::Open(OnlySstPath(*db));
  ASSERT_TRUE(reader.ok());
  std::vector<KVEntry> entries;
  ASSERT_TRUE((*reader)->ReadAllEntries(&entries).ok());
  ASSERT_EQ(entries.size(), static_cast<size_t>(2 * n));

  // Entries come in adjacent (KV, metadata) pairs per user key, and every
  // payload verifies clean against its partner.
  for (size_t i = 0; i < entries.size(); i += 2) {
    const KVEntry& kv = entries[i];
    const KVEntry& meta = entries[i + 1];
    EXPECT_FALSE(IsMetadataEntry(kv));
    ASSERT_TRUE(IsMetadataEntry(meta));
    EXPECT_EQ(meta.key.user_key, MakeMetadataKey(kv.key.user_key));
    EXPECT_EQ(meta.key.seq, kv.key.seq);
    MetadataPayload p;
    ASSERT_TRUE(ParseMetadataPayload(meta.value, &p));
    EXPECT_EQ(p.orig_seq, kv.key.seq);
    EXPECT_EQ(DataIntegrity(kv, p, db->hash()), Verdict::kValidated);
  }
}

TEST(Engine, LegacyFlushStaysBare) {
  ScopedTempDir dir("engine");
  auto db = MustOpen(dir.file("db"), TestOptions(EngineMode::kLegacy));
  for (int i = 0; i < 10; i++) {
    ASSERT_TRUE(db->Put("key" + std::to_string(i), "v").ok());
  }
  ASSERT_TRUE(db->Flush().ok());

  auto reader = TableReader::Open(OnlySstPath(*db));
  ASSERT_TRUE(reader.ok());
  std::vector<KVEntry> entries;
  ASSERT_TRUE((*reader)->ReadAllEntries(&entries).ok());
  EXPECT_EQ(entries.size(), 10u);
  for (const KVEntry& e : entries) EXPECT_FALSE(IsMetadataEntry(e));
}

TEST(Engine, ShadowingAcrossMemtableAndFiles) {
  ScopedTempDir dir("engine");
  auto db = MustOpen(dir.file("db"), TestOptions());

  ASSERT_TRUE(db->Put("k", "old").ok());
  ASSERT_TRUE(db->Flush().ok());
  ASSERT_TRUE(db->Put("k", "new").ok());
  EXPECT_EQ(*db->Get("k"), "new");  // memtable shadows the file

  ASSERT_TRUE(db->Delete("k").ok());
  EXPECT_EQ(db->Get("k").status().code(), Status::Code::kNotFound);
  ASSERT_TRUE(db->Flush().ok());
  EXPECT_EQ(db->Get("k").status().code(), Status::Code::kNotFound);

  // Two files now hold k=old and the newer tombstone; newest wins.
  EXPECT_EQ(db->NumFilesAtLevel(0), 2u);
}

TEST(Engine, ScanMatchesReferenceAndHidesInternals) {
  ScopedTempDir dir("engine");
  auto db = MustOpen(dir.file("db"), TestOptions());
  std::map<std::string, std::string> ref;

  auto put = [&](const std::string& k, const std::string& v) {
    ASSERT_TRUE(db->Put(k, v).ok());
    ref[k] = v;
  };
  auto del = [&](const std::string& k) {
    ASSERT_TRUE(db->Delete(k).ok());
    ref.erase(k);
  };

  for (char c = 'a'; c <= 'e'; c++) put(std::string(1, c), "v1");
  del("c");
  ASSERT_TRUE(db->Flush().ok());
  put("f", "v2");
  put("b", "v2");  // overwrite: memtable over file

  auto all = db->Scan("", "");
  ASSERT_TRUE(all.ok());
  ASSERT_EQ(all->size(), ref.size());
  size_t i = 0;
  for (const auto& [k, v] : ref) {
    EXPECT_EQ((*all)[i].key, k);
    EXPECT_EQ((*all)[i].value, v);
    // No metadata key ever surfaces.
    EXPECT_FALSE(HasMetadataSuffix((*all)[i].key));
    i++;
  }

  auto range = db->Scan("b", "e");
  ASSERT_TRUE(range.ok());
  ASSERT_EQ(range->size(), 2u);  // b, d (c deleted, e excluded)
  EXPECT_EQ((*range)[0].key, "b");
  EXPECT_EQ((*range)[0].value, "v2");
  EXPECT_EQ((*range)[1].key, "d");

  auto empty = db->Scan("x", "b");
  ASSERT_TRUE(empty.ok());
  EXPECT_TRUE(empty->empty());
}

TEST(Engine, CrashRecoveryReplaysWal) {
  ScopedTempDir dir("engine");
  const std::string live = dir.file("db");
  const std::string crashed = dir.file("crashed");
  {
    auto db = MustOpen(live, TestOptions());
    ASSERT_TRUE(db->Put("flushed", "on-disk").ok());
    ASSERT_TRUE(db->Flush().ok());
    ASSERT_TRUE(db->Put("wal-only-1", "v1").ok());
    ASSERT_TRUE(db->Put("wal-only-2", "v2").ok());
    ASSERT_TRUE(db->Delete("flushed").ok());
    SnapshotDir(live, crashed);  // crash point: nothing sealed or flushed
    ASSERT_TRUE(db->Close().ok());
  }
  auto db = MustOpen(crashed, TestOptions());
  EXPECT_EQ(*db->Get("wal-only-1"), "v1");
  EXPECT_EQ(*db->Get("wal-only-2"), "v2");
  EXPECT_EQ(db->Get("flushed").status().code(), Status::Code::kNotFound);
  // The replayed writes keep their sequence numbers: new writes go above.
  EXPECT_EQ(db->last_seq(), 4u);
  auto s = db->Put("after", "v");
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(*s, 5u);
}

TEST(Engine, TornWalTailRecoversValidPrefix) {
  ScopedTempDir dir("engine");
  const std::string live = dir.file("db");
  const std::string crashed = dir.file("crashed");
  {
    auto db = MustOpen(live, TestOptions());
    for (int i = 1; i <= 5; i++) {
      ASSERT_TRUE(db->Put("key" + std::to_string(i), "v").ok());
    }
    SnapshotDir(live, crashed);
    ASSERT_TRUE(db->Close().ok());
  }
  // Tear one byte off the WAL segment: the final record dies, the rest
  // replays.
  std::string wal_path;
  for (const auto& entry : std::filesystem::directory_iterator(crashed)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("wal-", 0) == 0) wal_path = entry.path().string();
  }
  ASSERT_FALSE(wal_path.empty());
  std::filesystem::resize_file(wal_path,
                               std::filesystem::file_size(wal_path) - 1);

  auto db = MustOpen(crashed, TestOptions());
  for (int i = 1; i <= 4; i++) {
    EXPECT_EQ(*db->Get("key" + std::to_string(i)), "v") << i;
  }
  EXPECT_EQ(db->Get("key5").status().code(), Status::Code::kNotFound);
  EXPECT_EQ(db->last_seq(), 4u);
}

TEST(Engine, CleanReopenPreservesDataAndSequence) {
  ScopedTempDir dir("engine");
  const std::string root = dir.file("db");
  {
    auto db = MustOpen(root, TestOptions());
    for (int i = 0; i < 20; i++) {
      ASSERT_TRUE(db->Put("key" + std::to_string(i), std::to_string(i)).ok());
    }
    ASSERT_TRUE(db->Flush().ok());
    for (int i = 20; i < 30; i++) {
      ASSERT_TRUE(db->Put("key" + std::to_string(i), std::to_string(i)).ok());
    }
    // No explicit flush for the last ten: Close drains them.
    ASSERT_TRUE(db->Close().ok());
  }
  {
    auto db = MustOpen(root, TestOptions());
    for (int i = 0; i < 30; i++) {
      EXPECT_EQ(*db->Get("key" + std::to_string(i)), std::to_string(i)) << i;
    }
    EXPECT_EQ(db->last_seq(), 30u);
    auto s = db->Put("key30", "30");
    ASSERT_TRUE(s.ok());
    EXPECT_EQ(*s, 31u);
    ASSERT_TRUE(db->Close().ok());
  }
  // A second reopen must not resurface duplicates or lose the tail write.
  auto db = MustOpen(root, TestOptions());
  EXPECT_EQ(*db->Get("key30"), "30");
  EXPECT_EQ(db->last_seq(), 31u);
  auto scan = db->Scan("", "");
  ASSERT_TRUE(scan.ok());
  EXPECT_EQ(scan->size(), 31u);
}

TEST(Engine, DeletionChainAcrossLevels) {
  ScopedTempDir dir("engine");
  auto db = MustOpen(dir.file("db"), TestOptions());

  // Park unrelated data at L2 so the first k-compaction is not bottommost.
  ASSERT_TRUE(db->Put("x", "keep").ok());
  ASSERT_TRUE(db->Flush().ok());
  ASSERT_TRUE(db->CompactLevel(0).ok());
  ASSERT_TRUE(db->CompactLevel(1).ok());
  ASSERT_EQ(db->NumFilesAtLevel(2), 1u);

  ASSERT_TRUE(db->Put("k", "doomed").ok());
  ASSERT_TRUE(db->Flush().ok());
  auto first = db->CompactLevel(0);
  ASSERT_TRUE(first.ok());
  EXPECT_FALSE(first->bottommost);
  ASSERT_TRUE(db->Delete("k").ok());
  ASSERT_TRUE(db->Flush().ok());

  // Tombstone meets the Put below the top: the Put is shadowed away, its
  // metadata orphans and drops, but the tombstone itself must survive a
  // non-bottommost pass.
  auto mid = db->CompactLevel(0);
  ASSERT_TRUE(mid.ok());
  EXPECT_FALSE(mid->bottommost);
  EXPECT_EQ(mid->repair.orphans_dropped, 1u);
  EXPECT_EQ(db->Get("k").status().code(), Status::Code::kNotFound);
  ASSERT_EQ(db->NumFilesAtLevel(1), 1u);

  // Bottommost pass: the tombstone has nothing left to shadow and goes too.
  auto last = db->CompactLevel(1);
  ASSERT_TRUE(last.ok());
  EXPECT_TRUE(last->bottommost);
  EXPECT_TRUE(last->output_files.empty());  // nothing survived

  EXPECT_EQ(db->Get("k").status().code(), Status::Code::kNotFound);
  EXPECT_EQ(*db->Get("x"), "keep");
  auto scan = db->Scan("", "");
  ASSERT_TRUE(scan.ok());
  ASSERT_EQ(scan->size(), 1u);
  EXPECT_EQ((*scan)[0].key, "x");
  EXPECT_EQ(db->TotalRepairReport().orphans_dropped, 1u);
}

TEST(Engine, DeleteEverythingCompactsToNothing) {
  ScopedTempDir dir("engine");
  auto db = MustOpen(dir.file("db"), TestOptions());
  ASSERT_TRUE(db->Put("k", "v").ok());
  ASSERT_TRUE(db->Flush().ok());
  ASSERT_TRUE(db->Delete("k").ok());
  ASSERT_TRUE(db->Flush().ok());
  ASSERT_EQ(db->NumFilesAtLevel(0), 2u);

  auto results = db->CompactAll();
  ASSERT_TRUE(results.ok());
  for (int level = 0; level < kNumLevels; level++) {
    EXPECT_EQ(db->NumFilesAtLevel(level), 0u) << "level " << level;
  }
  EXPECT_TRUE(db->ListLiveFiles().empty());
  EXPECT_EQ(db->Get("k").status().code(), Status::Code::kNotFound);

  // CompactLevel on an empty level is an error, CompactAll a no-op.
  EXPECT_FALSE(db->CompactLevel(0).ok());
  auto again = db->CompactAll();
  ASSERT_TRUE(again.ok());
  EXPECT_TRUE(again->empty());
}

TEST(Engine, CompactionRegeneratesCorruptMetadata) {
  ScopedTempDir dir("engine");
  auto db = MustOpen(dir.file("db"), TestOptions());
  for (int i = 0; i < 5; i++) {
    ASSERT_TRUE(db->Put("key" + std::to_string(i), "value").ok());
  }
  ASSERT_TRUE(db->Flush().ok());

  // key2 was the third write: seq 3. Flip a byte inside the stored checksum
  // field (payload bytes 8..15) of its metadata sibling.
  const InternalKey meta_key{MakeMetadataKey("key2"), 3,
                             EntryType::kTombstone};
  ASSERT_TRUE(FlipValueByte(OnlySstPath(*db), meta_key, 10, 0x20).ok());

  auto results = db->CompactAll();
  ASSERT_TRUE(results.ok());
  ASSERT_EQ(results->size(), 1u);
  EXPECT_EQ((*results)[0].repair.regenerated, 1u);
  EXPECT_EQ((*results)[0].repair.validated, 4u);
  EXPECT_EQ((*results)[0].repair.quarantined, 0u);

  // The rebuilt sibling verifies clean.
  auto v = db->GetVerified("key2");
  ASSERT_TRUE(v.ok());
  EXPECT_EQ(v->verdict, Verdict::kValidated);
  EXPECT_TRUE(v->had_metadata);
  EXPECT_EQ(v->value, "value");
}

TEST(Engine, CompactionQuarantinesPersistentValueCorruption) {
  ScopedTempDir dir("engine");
  auto db = MustOpen(dir.file("db"), TestOptions());
  for (int i = 0; i < 5; i++) {
    ASSERT_TRUE(db->Put("key" + std::to_string(i), "value").ok());
  }
  ASSERT_TRUE(db->Flush().ok());

  const InternalKey kv_key{"key2", 3, EntryType::kPut};
  ASSERT_TRUE(FlipValueByte(OnlySstPath(*db), kv_key, 0, 0x01).ok());

  auto results = db->CompactAll();
  ASSERT_TRUE(results.ok());
  ASSERT_EQ(results->size(), 1u);
  const RepairReport& rep = (*results)[0].repair;
  EXPECT_EQ(rep.quarantined, 1u);
  EXPECT_EQ(rep.validated, 4u);
  EXPECT_EQ(rep.retried, static_cast<uint64_t>(TestOptions().max_retries));
  EXPECT_EQ(rep.recovered, 0u);

  // The damaged pair is withheld from the output and preserved in the log.
  EXPECT_EQ(db->Get("key2").status().code(), Status::Code::kNotFound);
  for (int i : {0, 1, 3, 4}) {
    auto v = db->GetVerified("key" + std::to_string(i));
    ASSERT_TRUE(v.ok());
    EXPECT_EQ(v->verdict, Verdict::kValidated);
  }

  std::vector<QuarantineRecord> records;
  ASSERT_TRUE(ReadQuarantineLog(db->QuarantineLogPath(), &records).ok());
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].verdict, Verdict::kCorruptedKV);
  std::string_view bytes = records[0].kv_bytes;
  KVEntry preserved;
  ASSERT_TRUE(DecodeEntry(&bytes, &preserved).ok());
  EXPECT_EQ(preserved.key.user_key, "key2");
  EXPECT_EQ(preserved.value[0], static_cast<char>('v' ^ 0x01));
}

TEST(Engine, CompactionAbortModeSurfacesError) {
  ScopedTempDir dir("engine");
  Options opts = TestOptions();
  opts.on_persistent = RepairConfig::Disposition::kAbort;
  opts.max_retries = 1;
  auto db = MustOpen(dir.file("db"), opts);
  ASSERT_TRUE(db->Put("k", "value").ok());
  ASSERT_TRUE(db->Flush().ok());

  const InternalKey kv_key{"k", 1, EntryType::kPut};
  ASSERT_TRUE(FlipValueByte(OnlySstPath(*db), kv_key, 2, 0x08).ok());

  auto results = db->CompactAll();
  ASSERT_FALSE(results.ok());
  EXPECT_EQ(results.status().code(), Status::Code::kCompactionError);
  // The input is untouched; reads still serve (the corrupted bytes).
  EXPECT_EQ(db->NumFilesAtLevel(0), 1u);
  auto g = db->Get("k");
  ASSERT_TRUE(g.ok());
  EXPECT_EQ((*g)[2], static_cast<char>('l' ^ 0x08));
}

TEST(Engine, GetVerifiedAcrossResidencies) {
  ScopedTempDir dir("engine");
  auto db = MustOpen(dir.file("db"), TestOptions());

  // Memtable residency: trivially valid, zero block reads, no metadata yet.
  ASSERT_TRUE(db->Put("mem", "in-memory").ok());
  auto v = db->GetVerified("mem");
  ASSERT_TRUE(v.ok());
  EXPECT_EQ(v->value, "in-memory");
  EXPECT_EQ(v->verdict, Verdict::kValidated);
  EXPECT_EQ(v->blocks_read, 0u);
  EXPECT_FALSE(v->had_metadata);

  // Disk residency: the sibling sits in the same block — one read total.
  ASSERT_TRUE(db->Flush().ok());
  v = db->GetVerified("mem");
  ASSERT_TRUE(v.ok());
  EXPECT_EQ(v->value, "in-memory");
  EXPECT_EQ(v->verdict, Verdict::kValidated);
  EXPECT_EQ(v->blocks_read, 1u);
  EXPECT_TRUE(v->had_metadata);

  EXPECT_EQ(db->GetVerified("absent").status().code(),
            Status::Code::kNotFound);
}

TEST(Engine, GetVerifiedLegacyDataHasNoMetadata) {
  ScopedTempDir dir("engine");
  auto db = MustOpen(dir.file("db"), TestOptions(EngineMode::kLegacy));
  ASSERT_TRUE(db->Put("k", "v").ok());
  ASSERT_TRUE(db->Flush().ok());
  auto v = db->GetVerified("k");
  ASSERT_TRUE(v.ok());
  EXPECT_EQ(v->value, "v");
  EXPECT_EQ(v->verdict, Verdict::kValidated);
  EXPECT_FALSE(v->had_metadata);
}

TEST(Engine, GetVerifiedDetectsInjectedValueFault) {
  ScopedTempDir dir("engine");
  auto db = MustOpen(dir.file("db"), TestOptions());
  ASSERT_TRUE(db->Put("k", "pristine").ok());
  ASSERT_TRUE(db->Flush().ok());

  const InternalKey kv_key{"k", 1, EntryType::kPut};
  ASSERT_TRUE(FlipValueByte(OnlySstPath(*db), kv_key, 0, 0x10).ok());

  auto v = db->GetVerified("k");
  ASSERT_TRUE(v.ok());
  EXPECT_EQ(v->verdict, Verdict::kCorruptedKV);
  EXPECT_TRUE(v->had_metadata);
  EXPECT_EQ(v->value[0], static_cast<char>('p' ^ 0x10));
  EXPECT_EQ(v->blocks_read, 1u);

  // Plain Get has no idea: it serves the corrupted bytes happily. That gap
  // is exactly what the verified path exists to close.
  EXPECT_EQ((*db->Get("k"))[0], static_cast<char>('p' ^ 0x10));
}

TEST(Engine, GetVerifiedFlagsRegenerableMetadata) {
  ScopedTempDir dir("engine");
  auto db = MustOpen(dir.file("db"), TestOptions());
  ASSERT_TRUE(db->Put("k", "pristine").ok());
  ASSERT_TRUE(db->Flush().ok());

  const InternalKey meta_key{MakeMetadataKey("k"), 1, EntryType::kTombstone};
  ASSERT_TRUE(FlipValueByte(OnlySstPath(*db), meta_key, 12, 0x40).ok());

  auto v = db->GetVerified("k");
  ASSERT_TRUE(v.ok());
  EXPECT_EQ(v->verdict, Verdict::kValidatedRegenerateMeta);
  EXPECT_EQ(v->value, "pristine");  // the KV side is fine
}

TEST(Engine, IngestForeignLegacySst) {
  ScopedTempDir dir("engine");
  const std::string foreign = dir.file("foreign.sst");
  {
    TableBuilder builder(foreign, 4096, PackerMode::kLegacy);
    for (int i = 0; i < 5; i++) {
      ASSERT_TRUE(builder
                      .Add(TestEntry("m" + std::to_string(i),
                                     1001 + i, EntryType::kPut,
                                     "foreign" + std::to_string(i)))
                      .ok());
    }
    ASSERT_TRUE(builder.Finish().ok());
  }

  auto db = MustOpen(dir.file("db"), TestOptions());
  ASSERT_TRUE(db->Put("native", "v").ok());  // seq 1
  auto res = db->IngestSst(foreign);
  ASSERT_TRUE(res.ok()) << res.status().message();
  EXPECT_EQ(res->entry_count, 5u);
  EXPECT_EQ(res->metadata_count, 0u);
  EXPECT_EQ(res->put_count, 5u);
  EXPECT_GT(res->file_bytes, 0u);

  // The foreign sequence numbers advance the engine clock.
  EXPECT_EQ(db->last_seq(), 1005u);
  auto s = db->Put("after", "v");
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(*s, 1006u);

  for (int i = 0; i < 5; i++) {
    EXPECT_EQ(*db->Get("m" + std::to_string(i)),
              "foreign" + std::to_string(i));
  }
  EXPECT_EQ(*db->Get("native"), "v");

  std::vector<Engine::LiveFile> files = db->ListLiveFiles();
  ASSERT_EQ(files.size(), 1u);  // the native Put still sits in the memtable
  EXPECT_EQ(files[0].level, 0);
  EXPECT_EQ(files[0].file_no, res->file_no);
}

TEST(Engine, IngestMetadataBearingSst) {
  ScopedTempDir dir("engine");
  const std::string foreign = dir.file("foreign.sst");
  const HashFunction& hash = DefaultHashFunction();
  {
    TableBuilder builder(foreign, 4096, PackerMode::kColocate);
    for (int i = 0; i < 5; i++) {
      KVEntry kv = TestEntry("m" + std::to_string(i), 10 + i, EntryType::kPut,
                             "v" + std::to_string(i));
      ASSERT_TRUE(builder.Add(kv).ok());
      ASSERT_TRUE(builder.Add(CreateChecksumEntry(kv, hash)).ok());
    }
    ASSERT_TRUE(builder.Finish().ok());
  }

  auto db = MustOpen(dir.file("db"), TestOptions());
  auto res = db->IngestSst(foreign);
  ASSERT_TRUE(res.ok()) << res.status().message();
  EXPECT_EQ(res->entry_count, 10u);
  EXPECT_EQ(res->metadata_count, 5u);
  EXPECT_EQ(res->put_count, 5u);

  auto v = db->GetVerified("m3");
  ASSERT_TRUE(v.ok());
  EXPECT_EQ(v->value, "v3");
  EXPECT_EQ(v->verdict, Verdict::kValidated);
  EXPECT_TRUE(v->had_metadata);
  EXPECT_EQ(v->blocks_read, 1u);
}

TEST(Engine, IngestRejectsDamagedAndMisorderedFiles) {
  ScopedTempDir dir("engine");
  auto db = MustOpen(dir.file("db"), TestOptions());

  // Junk bytes.
  const std::string junk = dir.file("junk.sst");
  ASSERT_TRUE(WriteFileAtomic(junk, "this is not a table").ok());
  EXPECT_EQ(db->IngestSst(junk).status().code(), Status::Code::kRejectFile);

  // Truncated real table.
  const std::string real = dir.file("real.sst");
  {
    TableBuilder builder(real, 4096, PackerMode::kLegacy);
    ASSERT_TRUE(builder.Add(TestEntry("a", 1, EntryType::kPut, "v")).ok());
    ASSERT_TRUE(builder.Finish().ok());
  }
  std::string bytes;
  ASSERT_TRUE(ReadFileToString(real, &bytes).ok());
  const std::string cut = dir.file("cut.sst");
  ASSERT_TRUE(WriteFileAtomic(cut, bytes.substr(0, bytes.size() - 8)).ok());
  EXPECT_EQ(db->IngestSst(cut).status().code(), Status::Code::kRejectFile);

  // Structurally sound file whose entries are out of order: the footer and
  // index parse, the content scan must catch it.
  std::string block;
  ASSERT_TRUE(EncodeEntry(TestEntry("b", 1, EntryType::kPut, "2"), &block).ok());
  ASSERT_TRUE(EncodeEntry(TestEntry("a", 1, EntryType::kPut, "1"), &block).ok());
  std::string index;
  AppendIndexEntry(&index, {{"b", 1, EntryType::kPut}, 0, block.size()});
  std::string file = block + index;
  Footer footer;
  footer.index_offset = block.size();
  footer.index_length = index.size();
  footer.block_size_target = 4096;
  footer.EncodeTo(&file);
  const std::string misordered = dir.file("misordered.sst");
  ASSERT_TRUE(WriteFileAtomic(misordered, file).ok());
  EXPECT_EQ(db->IngestSst(misordered).status().code(),
            Status::Code::kRejectFile);

  // Missing path.
  EXPECT_EQ(db->IngestSst(dir.file("absent.sst")).status().code(),
            Status::Code::kRejectFile);
  EXPECT_TRUE(db->ListLiveFiles().empty());
}

TEST(Engine, DropFileRemovesDataAndBytes) {
  ScopedTempDir dir("engine");
  auto db = MustOpen(dir.file("db"), TestOptions());
  ASSERT_TRUE(db->Put("a", "1").ok());
  ASSERT_TRUE(db->Put("b", "2").ok());
  ASSERT_TRUE(db->Flush().ok());
  ASSERT_TRUE(db->Put("c", "3").ok());
  ASSERT_TRUE(db->Flush().ok());

  std::vector<Engine::LiveFile> files = db->ListLiveFiles();
  ASSERT_EQ(files.size(), 2u);
  const Engine::LiveFile* first = nullptr;
  for (const auto& f : files) {
    if (f.file_no == files[0].file_no) first = &files[0];
  }
  ASSERT_NE(first, nullptr);
  const std::string dropped_path = first->path;

  ASSERT_TRUE(db->DropFile(first->file_no).ok());
  EXPECT_FALSE(FileExists(dropped_path));
  EXPECT_EQ(db->Get("a").status().code(), Status::Code::kNotFound);
  EXPECT_EQ(db->Get("b").status().code(), Status::Code::kNotFound);
  EXPECT_EQ(*db->Get("c"), "3");
  EXPECT_EQ(db->ListLiveFiles().size(), 1u);

  EXPECT_EQ(db->DropFile(9999).code(), Status::Code::kNotFound);

  // The drop persists across reopen.
  ASSERT_TRUE(db->Close().ok());
  db = MustOpen(dir.file("db"), TestOptions());
  EXPECT_EQ(db->Get("a").status().code(), Status::Code::kNotFound);
  EXPECT_EQ(*db->Get("c"), "3");
}

TEST(Engine, LegacyModeHidesThenPurgesForeignMetadata) {
  ScopedTempDir dir("engine");
  const std::string root = dir.file("db");
  {
    auto db = MustOpen(root, TestOptions());
    for (int i = 0; i < 10; i++) {
      ASSERT_TRUE(db->Put("key" + std::to_string(i), "v").ok());
    }
    ASSERT_TRUE(db->Flush().ok());
    ASSERT_TRUE(db->Close().ok());
  }

  // The same directory, driven by a metadata-unaware engine.
  auto db = MustOpen(root, TestOptions(EngineMode::kLegacy));
  for (int i = 0; i < 10; i++) {
    EXPECT_EQ(*db->Get("key" + std::to_string(i)), "v");
  }
  auto scan = db->Scan("", "");
  ASSERT_TRUE(scan.ok());
  EXPECT_EQ(scan->size(), 10u);
  for (const auto& item : *scan) EXPECT_FALSE(HasMetadataSuffix(item.key));

  // Bottommost legacy compaction purges the tombstone-typed siblings.
  auto results = db->CompactAll();
  ASSERT_TRUE(results.ok());
  std::vector<Engine::LiveFile> files = db->ListLiveFiles();
  ASSERT_EQ(files.size(), 1u);
  auto reader = TableReader::Open(files[0].path);
  ASSERT_TRUE(reader.ok());
  std::vector<KVEntry> entries;
  ASSERT_TRUE((*reader)->ReadAllEntries(&entries).ok());
  EXPECT_EQ(entries.size(), 10u);
  for (const KVEntry& e : entries) {
    EXPECT_EQ(e.key.type, EntryType::kPut);
    EXPECT_FALSE(IsMetadataEntry(e));
  }
  for (int i = 0; i < 10; i++) {
    EXPECT_EQ(*db->Get("key" + std::to_string(i)), "v");
  }
}

TEST(Engine, MetahiveCompactionAdoptsLegacyData) {
  ScopedTempDir dir("engine");
  const std::string root = dir.file("db");
  {
    auto db = MustOpen(root, TestOptions(EngineMode::kLegacy));
    for (int i = 0; i < 10; i++) {
      ASSERT_TRUE(db->Put("key" + std::to_string(i), "v").ok());
    }
    ASSERT_TRUE(db->Flush().ok());
    ASSERT_TRUE(db->Close().ok());
  }

  auto db = MustOpen(root, TestOptions(EngineMode::kMetaHive));
  auto before = db->GetVerified("key0");
  ASSERT_TRUE(before.ok());
  EXPECT_FALSE(before->had_metadata);

  auto results = db->CompactAll();
  ASSERT_TRUE(results.ok());
  ASSERT_EQ(results->size(), 1u);
  EXPECT_EQ((*results)[0].repair.metadata_created, 10u);

  for (int i = 0; i < 10; i++) {
    auto v = db->GetVerified("key" + std::to_string(i));
    ASSERT_TRUE(v.ok());
    EXPECT_TRUE(v->had_metadata);
    EXPECT_EQ(v->verdict, Verdict::kValidated);
    EXPECT_EQ(v->blocks_read, 1u);
  }
}

TEST(Engine, HashIdIsPinnedAtCreation) {
  ScopedTempDir dir("engine");
  const std::string root = dir.file("db");
  {
    auto db = MustOpen(root, TestOptions());  // hash_id 1
    ASSERT_TRUE(db->Put("k", "v").ok());
    ASSERT_TRUE(db->Close().ok());
  }
  Options other = TestOptions();
  other.hash_id = 2;
  auto reopened = Engine::Open(root, other);
  ASSERT_FALSE(reopened.ok());
  EXPECT_EQ(reopened.status().code(), Status::Code::kInvalidArgument);

  auto db = MustOpen(root, TestOptions());
  EXPECT_EQ(*db->Get("k"), "v");
}

TEST(Engine, InlineAutoFlushAndCompaction) {
  ScopedTempDir dir("engine");
  Options opts = TestOptions();
  opts.memtable_budget = 4 * 1024;
  opts.l0_trigger = 2;
  opts.level_ratio = 2;
  auto db = MustOpen(dir.file("db"), opts);

  std::map<std::string, std::string> ref;
  char key[16], value[64];
  for (int i = 0; i < 400; i++) {
    std::snprintf(key, sizeof(key), "key%05d", i % 120);
    std::snprintf(value, sizeof(value), "val%08d----------------------", i);
    ASSERT_TRUE(db->Put(key, value).ok());
    ref[key] = value;
  }
  size_t total_files = 0;
  for (int level = 0; level < kNumLevels; level++) {
    total_files += db->NumFilesAtLevel(level);
  }
  EXPECT_GT(total_files, 0u);  // budget pressure flushed without being asked

  auto scan = db->Scan("", "");
  ASSERT_TRUE(scan.ok());
  ASSERT_EQ(scan->size(), ref.size());
  size_t i = 0;
  for (const auto& [k, v] : ref) {
    EXPECT_EQ((*scan)[i].key, k);
    EXPECT_EQ((*scan)[i].value, v);
    i++;
  }
}

TEST(Engine, BackgroundJobsFlushAndServe) {
  ScopedTempDir dir("engine");
  const std::string root = dir.file("db");
  Options opts = TestOptions();
  opts.background_jobs = true;
  opts.memtable_budget = 4 * 1024;
  opts.l0_trigger = 4;
  {
    auto db = MustOpen(root, opts);
    char key[16];
    for (int i = 0; i < 500; i++) {
      std::snprintf(key, sizeof(key), "key%05d", i);
      ASSERT_TRUE(db->Put(key, "payload-" + std::to_string(i)).ok());
    }
    // Reads race the worker but must always see their writes.
    for (int i = 0; i < 500; i += 37) {
      std::snprintf(key, sizeof(key), "key%05d", i);
      EXPECT_EQ(*db->Get(key), "payload-" + std::to_string(i));
    }
    ASSERT_TRUE(db->Close().ok());
  }
  // Everything must have reached disk by the end of Close.
  Options reopen = TestOptions();
  auto db = MustOpen(root, reopen);
  char key[16];
  for (int i = 0; i < 500; i++) {
    std::snprintf(key, sizeof(key), "key%05d", i);
    ASSERT_TRUE(db->Get(key).ok()) << key;
  }
  EXPECT_EQ(db->last_seq(), 500u);
}

TEST(Engine, RandomizedOpsAgreeWithReferenceModel) {
  ScopedTempDir dir("engine");
  auto db = MustOpen(dir.file("db"), TestOptions());
  std::map<std::string, std::string> ref;
  std::mt19937_64 rng(987651234);

  char key[16];
  for (int op = 0; op < 3000; op++) {
    std::snprintf(key, sizeof(key), "fz%03d", static_cast<int>(rng() % 200));
    uint64_t dice = rng() % 100;
    if (dice < 60) {
      std::string value = "v" + std::to_string(rng() % 100000);
      ASSERT_TRUE(db->Put(key, value).ok());
      ref[key] = value;
    } else if (dice < 80) {
      ASSERT_TRUE(db->Delete(key).ok());
      ref.erase(key);
    } else {
      auto got = db->Get(key);
      auto want = ref.find(key);
      if (want == ref.end()) {
        EXPECT_EQ(got.status().code(), Status::Code::kNotFound) << key;
      } else {
        ASSERT_TRUE(got.ok()) << key;
        EXPECT_EQ(*got, want->second) << key;
      }
    }
    if (op % 250 == 249) {
      ASSERT_TRUE(db->Flush().ok());
    }
    if (op % 900 == 899) {
      ASSERT_TRUE(db->CompactAll().ok());
    }
  }
  ASSERT_TRUE(db->Flush().ok());
  ASSERT_TRUE(db->CompactAll().ok());

  auto scan = db->Scan("", "");
  ASSERT_TRUE(scan.ok());
  ASSERT_EQ(scan->size(), ref.size());
  size_t i = 0;
  for (const auto& [k, v] : ref) {
    EXPECT_EQ((*scan)[i].key, k);
    EXPECT_EQ((*scan)[i].value, v);
    i++;
  }
  // After full compaction every surviving pair verifies clean.
  for (const auto& [k, v] : ref) {
    auto ver = db->GetVerified(k);
    ASSERT_TRUE(ver.ok()) << k;
    EXPECT_EQ(ver->verdict, Verdict::kValidated);
    EXPECT_TRUE(ver->had_metadata);
  }
}

}  // namespace
}  // namespace metahive
