#include <algorithm>
#include <memory>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "cliqueloop/descriptor.hpp"
#include "cliqueloop/error.hpp"
#include "cliqueloop/hamming_tree.hpp"

using namespace cliqueloop;

namespace {

std::vector<bool> random_bits(std::mt19937_64& rng, std::size_t n) {
  std::bernoulli_distribution coin(0.5);
  std::vector<bool> bits(n);
  for (std::size_t i = 0; i < n; ++i) bits[i] = coin(rng);
  return bits;
}

BinaryDescriptor make(const std::vector<bool>& bits) {
  const auto raw = std::make_unique<bool[]>(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) raw[i] = bits[i];
  return BinaryDescriptor::from_bits({raw.get(), bits.size()});
}

BinaryDescriptor random_descriptor(std::mt19937_64& rng, std::size_t n = 256) {
  return make(random_bits(rng, n));
}

BinaryDescriptor flip_random(std::mt19937_64& rng, BinaryDescriptor d, int flips) {
  std::vector<std::size_t> idx(d.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::shuffle(idx.begin(), idx.end(), rng);
  for (int k = 0; k < flips; ++k) {
    const std::size_t bit = idx[static_cast<std::size_t>(k)];
    d.set(bit, !d.test(bit));
  }
  return d;
}

bool contains(const std::vector<DescriptorMatch>& big, const DescriptorMatch& m) {
  return std::any_of(big.begin(), big.end(), [&](const DescriptorMatch& x) {
    return x.entry == m.entry && x.distance == m.distance;
  });
}

}  // namespace

TEST(Hamming, IdentityAndComplement) {
  std::mt19937_64 rng(1);
  const auto a = random_descriptor(rng);
  EXPECT_EQ(hamming(a, a), 0);
  EXPECT_EQ(hamming(a, a.complement()), 256);
  const auto b = random_descriptor(rng, 352);
  EXPECT_EQ(hamming(b, b.complement()), 352);
}

TEST(Hamming, MatchesPerBitOracle) {
  std::mt19937_64 rng(2);
  for (std::size_t len : {8u, 64u, 256u, 352u, 520u}) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto x = random_bits(rng, len);
      const auto y = random_bits(rng, len);
      int expected = 0;
      for (std::size_t i = 0; i < len; ++i) expected += x[i] != y[i];
      EXPECT_EQ(hamming(make(x), make(y)), expected);
    }
  }
}

TEST(Hamming, MetricAxioms) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = random_descriptor(rng);
    const auto b = flip_random(rng, a, static_cast<int>(rng() % 40));
    const auto c = flip_random(rng, b, static_cast<int>(rng() % 40));
    EXPECT_EQ(hamming(a, b), hamming(b, a));
    EXPECT_EQ(hamming(a, b) == 0, a == b);
    EXPECT_LE(hamming(a, c), hamming(a, b) + hamming(b, c));
  }
}

TEST(Hamming, LengthMismatch) {
  try {
    hamming(BinaryDescriptor(256), BinaryDescriptor(352));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LengthMismatch);
  }
}

TEST(BinaryDescriptor, HexRoundTripAndBitOrder) {
  const auto d = BinaryDescriptor::from_hex("80ff01");
  EXPECT_EQ(d.size(), 24u);
  EXPECT_TRUE(d.test(0));
  EXPECT_FALSE(d.test(1));
  EXPECT_TRUE(d.test(8));
  EXPECT_TRUE(d.test(23));
  EXPECT_FALSE(d.test(22));
  EXPECT_EQ(d.to_hex(), "80ff01");
  EXPECT_EQ(BinaryDescriptor::from_hex("ABcd").to_hex(), "abcd");
  EXPECT_THROW(BinaryDescriptor::from_hex("abc"), Error);
  EXPECT_THROW(BinaryDescriptor::from_hex("zz"), Error);
  EXPECT_THROW(BinaryDescriptor(12), Error);
}

TEST(BinarizeMedian, Examples) {
  const std::vector<double> flat{1, 1, 1, 1};
  EXPECT_EQ(binarize_median(flat).to_hex(), "00");
  // median 5 -> bits 0011, padded to one byte
  const std::vector<double> step{0, 0, 10, 10};
  EXPECT_EQ(binarize_median(step).to_hex(), "30");
  // median 2 -> bits 100
  const std::vector<double> three{3, 1, 2};
  EXPECT_EQ(binarize_median(three).to_hex(), "80");
  EXPECT_EQ(binarize_median(three).size(), 8u);
}

TEST(BinarizeMedian, AtMostHalfSet) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> len(1, 400);
  std::uniform_int_distribution<int> val(-5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(static_cast<std::size_t>(len(rng)));
    for (auto& x : v) x = val(rng);
    const auto d = binarize_median(v);
    std::size_t set = 0;
    for (std::size_t i = 0; i < v.size(); ++i) set += d.test(i);
    EXPECT_LE(set, (v.size() + 1) / 2);
    for (std::size_t i = v.size(); i < d.size(); ++i) EXPECT_FALSE(d.test(i));
  }
}

TEST(BinarizeMedian, Errors) {
  try {
    binarize_median(std::vector<double>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyVector);
  }
  try {
    binarize_median(std::vector<double>{1.0, INFINITY});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFiniteValue);
  }
}

TEST(HammingTree, InsertThenExactQuery) {
  std::mt19937_64 rng(5);
  HammingTree tree(256);
  const auto d = random_descriptor(rng);
  tree.insert({d, 7, 0});
  const auto hits = tree.query(d, 0);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].entry->keypoint_id, 7u);
  EXPECT_EQ(hits[0].distance, 0);
  EXPECT_TRUE(tree.query(d.complement(), 0).empty());
}

TEST(HammingTree, SplitsOnTheOnlySeparatingBit) {
  std::mt19937_64 rng(6);
  const std::size_t capacity = 8;
  HammingTree tree(256, capacity);
  const auto base = random_descriptor(rng);
  for (std::size_t i = 0; i < capacity + 1; ++i) {
    auto d = base;
    d.set(7, i % 2 == 1);
    tree.insert({d, static_cast<std::uint32_t>(i), 0});
  }
  ASSERT_FALSE(tree.nodes()[0].leaf());
  EXPECT_EQ(tree.nodes()[0].split_bit, 7);
  EXPECT_EQ(tree.leaf_count(), 2u);
}

TEST(HammingTree, IdenticalDescriptorsNeverSplit) {
  std::mt19937_64 rng(7);
  HammingTree tree(256, 4);
  const auto d = random_descriptor(rng);
  for (std::uint32_t i = 0; i < 50; ++i) tree.insert({d, i, 0});
  EXPECT_EQ(tree.nodes().size(), 1u);
  EXPECT_EQ(tree.nodes()[0].residents.size(), 50u);
  const auto hits = tree.query(d, 0);
  ASSERT_EQ(hits.size(), 50u);
  for (std::size_t i = 0; i < hits.size(); ++i) EXPECT_EQ(hits[i].sequence, i);
}

TEST(HammingTree, StructuralInvariants) {
  std::mt19937_64 rng(8);
  HammingTree tree(256, 10);
  for (std::uint32_t i = 0; i < 500; ++i) tree.insert({random_descriptor(rng), i, 0});

  std::vector<int> seen(tree.size(), 0);
  struct Frame {
    std::size_t node;
    std::vector<std::pair<int, bool>> path;
  };
  std::vector<Frame> stack{{0, {}}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    const auto& node = tree.nodes()[f.node];
    if (node.leaf()) {
      for (std::size_t idx : node.residents) {
        ++seen[idx];
        for (auto [bit, side] : f.path) {
          EXPECT_EQ(tree.entries()[idx].descriptor.test(static_cast<std::size_t>(bit)), side);
        }
      }
      continue;
    }
    for (auto [bit, side] : f.path) EXPECT_NE(bit, node.split_bit);
    for (int side = 0; side < 2; ++side) {
      Frame child{node.child[side], f.path};
      child.path.emplace_back(node.split_bit, side == 1);
      stack.push_back(child);
    }
  }
  for (int s : seen) EXPECT_EQ(s, 1);
}

TEST(HammingTree, SoundAndSortedOnRandomCorpora) {
  std::mt19937_64 rng(9);
  for (int corpus = 0; corpus < 20; ++corpus) {
    std::vector<DescriptorEntry> entries;
    std::vector<BinaryDescriptor> centers;
    for (int c = 0; c < 10; ++c) centers.push_back(random_descriptor(rng));
    for (std::uint32_t i = 0; i < 300; ++i) {
      entries.push_back({flip_random(rng, centers[rng() % centers.size()], static_cast<int>(rng() % 30)), i, 0});
    }
    for (int order = 0; order < 3; ++order) {
      std::shuffle(entries.begin(), entries.end(), rng);
      HammingTree tree(256, 1 + rng() % 40);
      for (const auto& e : entries) tree.insert(e);
      for (int q = 0; q < 30; ++q) {
        const auto query = flip_random(rng, centers[rng() % centers.size()], static_cast<int>(rng() % 30));
        const int tau = static_cast<int>(rng() % 60);
        const auto fast = tree.query(query, tau);
        const auto exact = linear_scan(tree.entries(), query, tau);
        for (const auto& m : fast) {
          EXPECT_LE(m.distance, tau);
          EXPECT_TRUE(contains(exact, m));
        }
        EXPECT_TRUE(std::is_sorted(fast.begin(), fast.end(), [](auto& a, auto& b) {
          return a.distance != b.distance ? a.distance < b.distance : a.sequence < b.sequence;
        }));
        const auto exhaustive = tree.query(query, tau, true);
        ASSERT_EQ(exhaustive.size(), exact.size());
      }
    }
  }
}

TEST(HammingTree, RecallOnPerturbedCorpus) {
  std::mt19937_64 rng(10);
  HammingTree tree(256);
  std::vector<BinaryDescriptor> corpus;
  for (std::uint32_t i = 0; i < 1000; ++i) {
    corpus.push_back(random_descriptor(rng));
    tree.insert({corpus.back(), i, 0});
  }
  std::size_t found = 0;
  std::size_t relevant = 0;
  for (int q = 0; q < 1000; ++q) {
    const auto query = flip_random(rng, corpus[rng() % corpus.size()], static_cast<int>(rng() % 11));
    const auto exact = linear_scan(tree.entries(), query, 50);
    const auto fast = tree.query(query, 50);
    relevant += exact.size();
    for (const auto& m : exact) found += contains(fast, m);
  }
  EXPECT_GE(static_cast<double>(found) / static_cast<double>(relevant), 0.9);
}

TEST(LinearScan, EdgeCases) {
  std::mt19937_64 rng(11);
  const auto a = random_descriptor(rng);
  EXPECT_TRUE(linear_scan({}, a, 256).empty());
  const std::vector<DescriptorEntry> one{{a, 0, 0}};
  const auto hits = linear_scan(one, a.complement(), 256);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].distance, 256);
}

TEST(HammingTree, LengthMismatch) {
  HammingTree tree(256);
  EXPECT_THROW(tree.insert({BinaryDescriptor(352), 0, 0}), Error);
  EXPECT_THROW(tree.query(BinaryDescriptor(352), 10), Error);
}
