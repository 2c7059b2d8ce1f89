// Copyright 2026 The mfft Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mfft/domain.hpp"

#include <gtest/gtest.h>

#include <vector>

namespace mfft {
namespace {

TEST(OwnerOf, Example) {
  const PencilGrid g(8, 2, 2);
  EXPECT_EQ(owner_of(5, 1, 6, g, Phase::x), (NodeCoord{0, 1}));
  EXPECT_EQ(owner_of(5, 1, 6, g, Phase::y), (NodeCoord{1, 1}));
  EXPECT_EQ(owner_of(5, 1, 6, g, Phase::z), (NodeCoord{1, 0}));
}

TEST(OwnerOf, OutOfRangeRejected) {
  const PencilGrid g(8, 2, 2);
  EXPECT_THROW(owner_of(8, 0, 0, g, Phase::x), std::invalid_argument);
  EXPECT_THROW(owner_of(0, 0, 9, g, Phase::z), std::invalid_argument);
}

TEST(PencilGrid, RejectsNonDividingProcessCounts) {
  EXPECT_THROW(PencilGrid(8, 3, 1), std::invalid_argument);
  EXPECT_THROW(PencilGrid(8, 2, 0), std::invalid_argument);
}

class Partition : public ::testing::TestWithParam<std::tuple<std::size_t, std::size_t, std::size_t>> {};

TEST_P(Partition, EveryPointHasExactlyOneOwner) {
  const auto [n, pu, pv] = GetParam();
  const PencilGrid g(n, pu, pv);
  for (Phase phase : {Phase::x, Phase::y, Phase::z}) {
    std::vector<std::size_t> owned(g.p(), 0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
          const NodeCoord c = owner_of(i, j, k, g, phase);
          ++owned[g.rank(c)];
          std::size_t holders = 0;
          for (std::size_t r = 0; r < g.p(); ++r) holders += g.pencil(g.coord(r), phase).contains(i, j, k);
          ASSERT_EQ(holders, 1u);
          ASSERT_TRUE(g.pencil(c, phase).contains(i, j, k));
        }
    for (std::size_t r = 0; r < g.p(); ++r) EXPECT_EQ(owned[r], n * n * n / g.p()) << to_string(phase);
  }
}

INSTANTIATE_TEST_SUITE_P(Grids, Partition,
                         ::testing::Values(std::make_tuple(8, 1, 1), std::make_tuple(8, 2, 2),
                                           std::make_tuple(8, 4, 4), std::make_tuple(16, 1, 1),
                                           std::make_tuple(16, 2, 2), std::make_tuple(16, 4, 4),
                                           std::make_tuple(16, 4, 1)));

TEST(TransposeMap, FoldsStayInRowOrColumn) {
  const PencilGrid g(16, 4, 2);
  for (const auto& t : transpose_map(g, Fold::xy).transfers) EXPECT_EQ(t.src.v, t.dst.v);
  for (const auto& t : transpose_map(g, Fold::yz).transfers) EXPECT_EQ(t.src.u, t.dst.u);
}

TEST(TransposeMap, KeptFraction) {
  const PencilGrid g(16, 2, 4);
  const std::size_t per_node = 16 * 16 * 16 / 8;
  for (const auto& t : transpose_map(g, Fold::xy).kept) EXPECT_EQ(t.points.points(), per_node / 2);
  for (const auto& t : transpose_map(g, Fold::yz).kept) EXPECT_EQ(t.points.points(), per_node / 4);
  std::vector<std::size_t> sent(g.p(), 0);
  for (const auto& t : transpose_map(g, Fold::xy).transfers) sent[g.rank(t.src)] += t.points.points();
  for (auto s : sent) EXPECT_EQ(s, per_node / 2);
}

TEST(TransposeMap, SingleColumnFoldIsEmpty) {
  const PencilGrid g(8, 1, 4);
  EXPECT_TRUE(transpose_map(g, Fold::xy).transfers.empty());
  EXPECT_EQ(transpose_map(g, Fold::xy).kept.size(), 4u);
}

TEST(TransposeMap, TransfersAndKeptCoverGridOnce) {
  const PencilGrid g(8, 2, 2);
  for (Fold f : {Fold::xy, Fold::yz}) {
    const auto plan = transpose_map(g, f);
    std::vector<int> hits(512, 0);
    auto mark = [&](const Transfer& t) {
      for (std::size_t k = 0; k < 8; ++k)
        for (std::size_t j = 0; j < 8; ++j)
          for (std::size_t i = 0; i < 8; ++i)
            if (t.points.contains(i, j, k)) ++hits[(k * 8 + j) * 8 + i];
      // Every moved point really is on the source before and the destination after.
      const Phase before = f == Fold::xy ? Phase::x : Phase::y;
      const Phase after = f == Fold::xy ? Phase::y : Phase::z;
      const auto& r = t.points.range;
      EXPECT_EQ(owner_of(r[0].begin, r[1].begin, r[2].begin, g, before), t.src);
      EXPECT_EQ(owner_of(r[0].begin, r[1].begin, r[2].begin, g, after), t.dst);
    };
    for (const auto& t : plan.transfers) mark(t);
    for (const auto& t : plan.kept) mark(t);
    for (int h : hits) ASSERT_EQ(h, 1);
  }
}

TEST(Volumes, SmallGridByHand) {
  const auto v = volumes(PencilGrid(8, 2, 2));
  EXPECT_EQ(v.v, 1024u);
  EXPECT_EQ(v.v_prime, 1280u);
  EXPECT_EQ(v.ram_per_node, 2048u);
}

TEST(Volumes, RamPerNodeAnchors) {
  EXPECT_EQ(volumes(PencilGrid(256, 1, 1)).ram_per_node, std::uint64_t{1} << 28);  // 0.25 GiB
  EXPECT_EQ(volumes(PencilGrid(4096, 1, 1)).ram_per_node, std::uint64_t{1024} << 30);
}

TEST(MemoryOccupancy, DeviceLimitExamples) {
  const double big = static_cast<double>(memory_occupancy(PencilGrid(1024, 1, 1), MemoryModel::pipelined_streaming));
  EXPECT_NEAR(big / 1e9, 17.2, 0.05);
  EXPECT_GT(big, 8.0 * (1u << 30));
  const double ok = static_cast<double>(memory_occupancy(PencilGrid(4096, 16, 16), MemoryModel::pipelined_streaming));
  EXPECT_NEAR(ok / 1e9, 4.3, 0.05);
  EXPECT_LE(ok, 8.0 * (1u << 30));
}

TEST(MemoryOccupancy, ModelsOrdered) {
  for (std::size_t n : {16u, 256u, 4096u})
    for (std::size_t pu : {1u, 4u, 16u}) {
      const PencilGrid g(n, pu, pu);
      EXPECT_LE(memory_occupancy(g, MemoryModel::sequential), memory_occupancy(g, MemoryModel::pipelined_streaming));
      EXPECT_LE(memory_occupancy(g, MemoryModel::pipelined), memory_occupancy(g, MemoryModel::pipelined_streaming));
      EXPECT_EQ(memory_occupancy(g, MemoryModel::sequential), 2 * volumes(g).v_prime);
    }
}

}  // namespace
}  // namespace mfft
