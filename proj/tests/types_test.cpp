// Copyright 2026 the metahive-kv authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "metahive/types.h"

#include <gtest/gtest.h>

#include <string>

namespace metahive {
namespace {

InternalKey IK(std::string key, SequenceNumber seq,
               EntryType type = EntryType::kPut) {
  InternalKey k;
  k.user_key = std::move(key);
  k.seq = seq;
  k.type = type;
  return k;
}

TEST(InternalKeyOrder, HigherSeqSortsFirstWithinKey) {
  EXPECT_LT(CompareInternal(IK("a", 5), IK("a", 3)), 0);
  EXPECT_GT(CompareInternal(IK("a", 3), IK("a", 5)), 0);
}

TEST(InternalKeyOrder, KeyBytesDominateSeq) {
  // "a" at any seq sorts before "a\x01" at any seq: key bytes first.
  EXPECT_LT(CompareInternal(IK("a", 1), IK(std::string("a\x01"), 1)), 0);
  EXPECT_LT(CompareInternal(IK("a", 1), IK(std::string("a\x01"), 9)), 0);
  // and the metadata key still sorts before the next user key.
  EXPECT_LT(CompareInternal(IK(std::string("a\x01"), 9), IK("b", 1)), 0);
}

TEST(InternalKeyOrder, TypeCodeBreaksSeqTies) {
  EXPECT_LT(CompareInternal(IK("a", 5, EntryType::kTombstone),
                            IK("a", 5, EntryType::kPut)),
            0);
  EXPECT_EQ(CompareInternal(IK("a", 5), IK("a", 5)), 0);
}

TEST(InternalKeyOrder, LessFunctorAgrees) {
  InternalKeyLess less;
  EXPECT_TRUE(less(IK("a", 5), IK("a", 3)));
  EXPECT_FALSE(less(IK("a", 3), IK("a", 5)));
  EXPECT_FALSE(less(IK("a", 5), IK("a", 5)));
}

TEST(Trailer, PackUnpackRoundTrip) {
  const SequenceNumber seq = (1ull << 56) - 1;
  uint64_t t = PackTrailer(seq, EntryType::kMerge);
  SequenceNumber out_seq = 0;
  EntryType out_type = EntryType::kTombstone;
  UnpackTrailer(t, &out_seq, &out_type);
  EXPECT_EQ(out_seq, seq);
  EXPECT_EQ(out_type, EntryType::kMerge);

  EXPECT_EQ(PackTrailer(1, EntryType::kPut), 0x0101u);
  EXPECT_EQ(PackTrailer(0, EntryType::kTombstone), 0u);
}

TEST(Trailer, TypeCodeValidation) {
  EXPECT_TRUE(IsValidEntryTypeCode(0));
  EXPECT_TRUE(IsValidEntryTypeCode(1));
  EXPECT_TRUE(IsValidEntryTypeCode(2));
  EXPECT_FALSE(IsValidEntryTypeCode(3));
  EXPECT_FALSE(IsValidEntryTypeCode(0xff));
}

TEST(ValidateUserKey, AcceptsOrdinaryKeys) {
  EXPECT_TRUE(ValidateUserKey("a").ok());
  EXPECT_TRUE(ValidateUserKey("user12345").ok());
  EXPECT_TRUE(ValidateUserKey(std::string(4096, 'k')).ok());
  // 0x01 is fine anywhere except the last byte.
  EXPECT_TRUE(ValidateUserKey(std::string("a\x01m")).ok());
  // High bytes are fine.
  EXPECT_TRUE(ValidateUserKey(std::string("\xff\xfe")).ok());
}

TEST(ValidateUserKey, RejectsEmptyAndOversized) {
  EXPECT_FALSE(ValidateUserKey("").ok());
  EXPECT_FALSE(ValidateUserKey(std::string(4097, 'k')).ok());
}

TEST(ValidateUserKey, RejectsMetadataMarkerSuffix) {
  EXPECT_FALSE(ValidateUserKey(std::string("a\x01")).ok());
  EXPECT_FALSE(ValidateUserKey(std::string("\x01", 1)).ok());
}

// A key containing 0x00 could sort strictly between some key k and its
// metadata key k||0x01 ("a" < "a\x00b" < "a\x01"), breaking cluster
// adjacency. The validator must close that hole everywhere, not just at
// the last byte.
TEST(ValidateUserKey, RejectsNulAnywhere) {
  EXPECT_FALSE(ValidateUserKey(std::string("a\x00", 2)).ok());
  EXPECT_FALSE(ValidateUserKey(std::string("a\x00b", 3)).ok());
  EXPECT_FALSE(ValidateUserKey(std::string("\x00""ab", 3)).ok());
}

TEST(ValidateUserKey, ErrorsAreInvalidKeyCode) {
  EXPECT_EQ(ValidateUserKey("").code(), Status::Code::kInvalidKey);
  EXPECT_EQ(ValidateUserKey(std::string("a\x01")).code(),
            Status::Code::kInvalidKey);
  EXPECT_EQ(ValidateUserKey(std::string("a\x00b", 3)).code(),
            Status::Code::kInvalidKey);
}

}  // namespace
}  // namespace metahive
