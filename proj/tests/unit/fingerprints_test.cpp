#include <gtest/gtest.h>

#include "molrl/chem.hpp"
#include "molrl/fingerprints.hpp"
#include "molrl/stable_hash.hpp"
#include "test_support.hpp"

namespace {

using namespace molrl;

chem::MolGraph mol(const char* s) { return chem::parse_smiles(s); }

std::vector<std::size_t> positions(const fp::BitVector& v) { return v.positions(); }

// Bit positions below come from tests/oracles/fingerprint_oracle.py.

TEST(StableHash, KnownDigests) {
  EXPECT_EQ(stable_hash("C-C") % 2048, 484u);
  EXPECT_EQ(stable_hash("C-O") % 2048, 1403u);
  EXPECT_EQ(stable_hash("C=O") % 2048, 1238u);
}

TEST(Circular, MethaneBits) { EXPECT_EQ(positions(fp::circular_fp(mol("C"))), (std::vector<std::size_t>{540, 850, 1523})); }

TEST(Circular, EthanolBits) {
  EXPECT_EQ(positions(fp::circular_fp(mol("CCO"))),
            (std::vector<std::size_t>{154, 228, 476, 706, 904, 1034, 1081, 1130, 1315}));
}

TEST(Circular, PropanolBits) {
  EXPECT_EQ(positions(fp::circular_fp(mol("CCCO"))),
            (std::vector<std::size_t>{71, 228, 367, 706, 904, 1081, 1315, 1336, 1496, 1693, 2047}));
}

TEST(Circular, RadiusZeroDistinguishesEthanolAtoms) {
  const auto ids = fp::circular_identifiers(chem::normalize(mol("CCO")), 0);
  ASSERT_EQ(ids.size(), 3u);
  EXPECT_EQ(std::set<std::uint64_t>(ids.begin(), ids.end()).size(), 3u);
}

TEST(Path, EthanolSequencesAndBits) {
  EXPECT_EQ(fp::path_sequences(chem::normalize(mol("CCO"))), (std::set<std::string>{"C-C", "C-C-O", "C-O"}));
  EXPECT_EQ(positions(fp::path_fp(mol("CCO"))), (std::vector<std::size_t>{484, 1403, 1779}));
  EXPECT_EQ(positions(fp::path_fp(mol("CCCO"))), (std::vector<std::size_t>{484, 497, 1403, 1751, 1779}));
}

TEST(Path, SingleAtomHasNoPaths) { EXPECT_EQ(fp::path_fp(mol("C")).count(), 0u); }

TEST(Path, SameInputSameBitsDifferentInputDifferentBits) {
  EXPECT_EQ(fp::path_fp(mol("CC")), fp::path_fp(mol("CC")));
  EXPECT_NE(fp::path_fp(mol("CC")), fp::path_fp(mol("CO")));
}

TEST(Path, ResonantBondsUseColon) {
  const auto seqs = fp::path_sequences(chem::normalize(mol("c1ccccc1")));
  EXPECT_TRUE(seqs.count("C:C"));
  EXPECT_EQ(seqs, fp::path_sequences(chem::normalize(mol("C1=CC=CC=C1"))));
}

TEST(Path, LengthCappedAtSevenBonds) {
  for (const auto& s : fp::path_sequences(chem::normalize(mol("CCCCCCCCCCCC")))) {
    EXPECT_LE(std::count(s.begin(), s.end(), '-'), 7) << s;
  }
}

TEST(Keyset, EthanolBits) { EXPECT_EQ(positions(fp::keyset_fp(mol("CCO"))), (std::vector<std::size_t>{0, 2, 41, 57})); }

TEST(Keyset, TableHas64Predicates) {
  const auto& table = fp::keyset_predicates();
  ASSERT_EQ(table.size(), 64u);
  for (std::size_t i = 0; i < table.size(); ++i) EXPECT_EQ(table[i].bit, i);
  EXPECT_EQ(fp::keyset_table_version(), 1);
}

TEST(Keyset, FunctionalGroups) {
  const auto aspirin = fp::keyset_fp(mol("CC(=O)Oc1ccccc1C(=O)O"));
  for (std::size_t bit : {0u, 2u, 12u, 13u, 14u, 16u, 23u, 26u, 33u, 34u, 40u, 48u, 49u, 57u, 58u}) {
    EXPECT_TRUE(aspirin.test(bit)) << bit;
  }
  EXPECT_FALSE(aspirin.test(1));
  EXPECT_FALSE(aspirin.test(55));
  const auto pyridine = fp::keyset_fp(mol("c1ccncc1"));
  EXPECT_TRUE(pyridine.test(36));
  EXPECT_TRUE(pyridine.test(37));
  EXPECT_TRUE(fp::keyset_fp(mol("CC#N")).test(52));
  EXPECT_TRUE(fp::keyset_fp(mol("CC(=O)C")).test(55));
  EXPECT_TRUE(fp::keyset_fp(mol("CC=O")).test(54));
  EXPECT_TRUE(fp::keyset_fp(mol("C[N+](=O)[O-]")).test(46));
  EXPECT_TRUE(fp::keyset_fp(mol("C[N+](=O)[O-]")).test(61));
}

TEST(Similarity, TanimotoExamples) {
  fp::BitVector a(8), b(8), c(8);
  for (std::size_t i : {1u, 2u, 3u}) a.set(i);
  for (std::size_t i : {2u, 3u, 4u}) b.set(i);
  for (std::size_t i : {6u, 7u}) c.set(i);
  EXPECT_DOUBLE_EQ(fp::tanimoto(a, a), 1.0);
  EXPECT_DOUBLE_EQ(fp::tanimoto(a, b), 0.5);
  EXPECT_DOUBLE_EQ(fp::tanimoto(a, c), 0.0);
  EXPECT_THROW(fp::tanimoto(a, fp::BitVector(16)), fp::WidthMismatch);
}

TEST(Similarity, TanimotoMatchesSetArithmetic) {
  Rng rng(42);
  for (int i = 0; i < 500; ++i) {
    const std::size_t width = i % 2 ? 64 : 2048;
    const double density = rng.uniform() * 0.6;
    const fp::BitVector a = test::random_bits(rng, width, density);
    const fp::BitVector b = rng.below(10) == 0 ? a : test::random_bits(rng, width, density);
    const double t = fp::tanimoto(a, b);
    EXPECT_EQ(t, test::set_tanimoto(a, b));
    EXPECT_EQ(t, fp::tanimoto(b, a));
    EXPECT_GE(t, 0.0);
    EXPECT_LE(t, 1.0);
    EXPECT_EQ(t == 1.0, a == b);
  }
}

TEST(Similarity, LevenshteinExamples) {
  EXPECT_EQ(fp::levenshtein_ratio("abc", "abc"), 1.0);
  EXPECT_EQ(fp::levenshtein_ratio("", ""), 1.0);
  EXPECT_EQ(fp::edit_distance("kitten", "sitting"), 3u);
  EXPECT_DOUBLE_EQ(fp::levenshtein_ratio("kitten", "sitting"), 1.0 - 3.0 / 7.0);
  EXPECT_EQ(fp::levenshtein_ratio("abc", ""), 0.0);
}

TEST(Similarity, EditDistanceMatchesNaiveDp) {
  Rng rng(8);
  for (int i = 0; i < 500; ++i) {
    const std::string_view alphabet = i % 2 ? "ab" : "CNOc1()=#[]";
    const std::string a = test::random_string(rng, 64, alphabet);
    const std::string b = test::random_string(rng, 64, alphabet);
    EXPECT_EQ(fp::edit_distance(a, b), test::naive_edit_distance(a, b));
    EXPECT_EQ(fp::levenshtein_ratio(a, b), fp::levenshtein_ratio(b, a));
    EXPECT_EQ(fp::levenshtein_ratio(a, b) == 1.0, a == b);
  }
}

TEST(Fingerprints, InvariantUnderRelabeling) {
  Rng rng(31);
  for (int m = 0; m < 60; ++m) {
    const chem::MolGraph g = test::random_molecule(rng, 4 + rng.below(16));
    const auto k = fp::keyset_fp(g);
    const auto p = fp::path_fp(g);
    const auto c = fp::circular_fp(g);
    for (int r = 0; r < 5; ++r) {
      const chem::MolGraph h = test::random_relabeling(g, rng);
      EXPECT_EQ(fp::keyset_fp(h), k);
      EXPECT_EQ(fp::path_fp(h), p);
      EXPECT_EQ(fp::circular_fp(h), c);
    }
  }
}

TEST(Fingerprints, WidthsAndRanges) {
  Rng rng(12);
  for (int m = 0; m < 40; ++m) {
    const chem::MolGraph g = test::random_molecule(rng, 4 + rng.below(20));
    EXPECT_EQ(fp::keyset_fp(g).width(), 64u);
    EXPECT_LE(fp::keyset_fp(g).count(), 64u);
    for (const auto bit : fp::path_fp(g).positions()) EXPECT_LT(bit, 2048u);
    for (const auto bit : fp::circular_fp(g).positions()) EXPECT_LT(bit, 2048u);
  }
}

TEST(BitVector, SetTestCount) {
  fp::BitVector v(130);
  v.set(0);
  v.set(64);
  v.set(129);
  EXPECT_EQ(v.count(), 3u);
  EXPECT_TRUE(v.test(129));
  EXPECT_FALSE(v.test(1));
  EXPECT_THROW(v.set(130), std::out_of_range);
}

}  // namespace
