// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "metahive/wal.h"

#include "metahive/entry_codec.h"
#include "metahive/log_record.h"

namespace metahive {

Status WalWriter::Open(const std::string& path) {
  return file_.Open(path, /*truncate=*/true);
}

Status WalWriter::AddEntry(const KVEntry& entry) {
  std::string record;
  Status s = EncodeEntry(entry, &record);
  if (!s.ok()) return s;
  scratch_.clear();
  AppendLogRecord(&scratch_, record);
  return file_.Append(scratch_);
}

Status WalWriter::Sync() { return file_.Sync(); }

Status WalWriter::Close() { return file_.Close(); }

Result<WalReplay> ReadWalSegment(const std::string& path) {
  std::string data;
  Status s = ReadFileToString(path, &data);
  if (!s.ok()) return s;

  std::vector<std::string> records;
  size_t valid_prefix = 0;
  LogTail tail = ReadLogRecords(data, &records, &valid_prefix);

  WalReplay replay;
  replay.clean = (tail == LogTail::kClean);
  replay.entries.reserve(records.size());
  for (const std::string& record : records) {
    std::string_view rest = record;
    KVEntry entry;
    s = DecodeEntry(&rest, &entry);
    if (!s.ok() || !rest.empty()) {
      // Framing was intact but the payload is not a well-formed entry;
      // treat like a bad frame and stop replay here.
      replay.clean = false;
      break;
    }
    replay.entries.push_back(std::move(entry));
  }
  return replay;
}

}  // namespace metahive
