// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "metahive/sim/fault.h"

#include "metahive/entry_codec.h"
#include "metahive/env.h"
#include "metahive/metadata.h"
#include "metahive/table_reader.h"

namespace metahive::sim {

namespace {

double U01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

const char* FaultFieldName(FaultField field) {
  switch (field) {
    case FaultField::kValue:
      return "value";
    case FaultField::kMetaChecksum:
      return "meta_checksum";
    case FaultField::kMetaCoc:
      return "meta_coc";
  }
  return "unknown";
}

Status ParseFaultField(std::string_view name, FaultField* field) {
  if (name == "value") {
    *field = FaultField::kValue;
  } else if (name == "meta_checksum") {
    *field = FaultField::kMetaChecksum;
  } else if (name == "meta_coc") {
    *field = FaultField::kMetaCoc;
  } else {
    return Status::InvalidArgument("unknown fault field: " +
                                   std::string(name));
  }
  return Status::OK();
}

Result<InjectStats> InjectFaults(const std::string& path,
                                 const std::string& node, uint64_t file_no,
                                 FaultField field, double probability,
                                 std::mt19937_64& rng) {
  if (probability < 0.0 || probability > 1.0) {
    return Status::InvalidArgument("fault probability must be in [0, 1]");
  }
  auto reader = TableReader::Open(path);
  if (!reader.ok()) return reader.status();

  InjectStats stats;
  for (size_t b = 0; b < (*reader)->num_blocks(); b++) {
    const IndexEntry& index = (*reader)->index()[b];
    std::string block;
    Status s = (*reader)->ReadBlock(b, &block);
    if (!s.ok()) return s;

    size_t pos = 0;
    uint32_t entry_idx = 0;
    while (pos < block.size()) {
      KVEntry entry;
      EntryLayout layout;
      s = DecodeEntryAt(block, &pos, &entry, &layout);
      if (!s.ok()) return s;
      stats.entries++;

      // Locate the targeted field within this entry, if it carries one.
      bool eligible = false;
      size_t field_offset = 0;  // relative to the block
      size_t field_size = 0;
      std::string cluster_key;
      SequenceNumber seq = 0;
      const bool is_metadata = IsMetadataEntry(entry);
      if (field == FaultField::kValue) {
        if (!is_metadata && entry.key.type == EntryType::kPut &&
            layout.value_size > 0) {
          eligible = true;
          field_offset = layout.value_offset;
          field_size = layout.value_size;
          cluster_key = entry.key.user_key;
          seq = entry.key.seq;
        }
      } else if (is_metadata && layout.value_size == kMetadataPayloadSize) {
        MetadataPayload payload;
        if (ParseMetadataPayload(entry.value, &payload)) {
          eligible = true;
          field_offset = layout.value_offset +
                         (field == FaultField::kMetaChecksum ? 8 : 16);
          field_size = 8;
          cluster_key = entry.key.user_key.substr(
              0, entry.key.user_key.size() - 1);
          seq = payload.orig_seq;
        }
      }

      if (eligible) {
        stats.eligible++;
        if (U01(rng) < probability) {
          uint32_t bit =
              static_cast<uint32_t>(rng() % (field_size * 8));
          uint64_t offset = index.offset + field_offset + bit / 8;
          std::string byte;
          s = ReadFileRange(path, offset, 1, &byte);
          if (!s.ok()) return s;
          byte[0] = static_cast<char>(byte[0] ^ (1u << (bit % 8)));
          s = OverwriteFileRange(path, offset, byte);
          if (!s.ok()) return s;

          FaultRecord record;
          record.node = node;
          record.file_no = file_no;
          record.block_idx = static_cast<uint32_t>(b);
          record.entry_idx = entry_idx;
          record.field = field;
          record.bit = bit;
          record.file_offset = offset;
          record.cluster_key = std::move(cluster_key);
          record.seq = seq;
          record.detectable = field != FaultField::kMetaCoc;
          stats.faults.push_back(std::move(record));
        }
      }
      entry_idx++;
    }
  }
  return stats;
}

}  // namespace metahive::sim
