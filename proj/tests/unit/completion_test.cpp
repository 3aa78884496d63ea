#include <gtest/gtest.h>

#include "molrl/chem.hpp"
#include "molrl/completion.hpp"
#include "test_support.hpp"

namespace {

using namespace molrl;
using completion::ExtractionPath;

TEST(Split, DelimiterSemantics) {
  auto s = completion::split_completion("<think>steps</think>\n\n{...}");
  EXPECT_EQ(s.reasoning, "steps");
  EXPECT_EQ(s.answer, "\n\n{...}");
  s = completion::split_completion("{\"molecule\":\"CCO\"}");
  EXPECT_EQ(s.reasoning, "");
  EXPECT_EQ(s.answer, "{\"molecule\":\"CCO\"}");
  s = completion::split_completion("<think>a</think>x</think>y");
  EXPECT_EQ(s.reasoning, "a");
  EXPECT_EQ(s.answer, "x</think>y");
}

TEST(Split, CustomDelimiter) {
  const auto s = completion::split_completion("abc<END>def", "<END>");
  EXPECT_EQ(s.reasoning, "abc");
  EXPECT_EQ(s.answer, "def");
  EXPECT_THROW(completion::split_completion("x", ""), std::invalid_argument);
}

TEST(Payload, FirstBalancedObject) {
  EXPECT_EQ(completion::extract_json_payload("Answer: {\"molecule\": \"CCO\"} done"), "{\"molecule\": \"CCO\"}");
  EXPECT_EQ(completion::extract_json_payload("{\"a\": {\"molecule\": \"C\"}}"), "{\"a\": {\"molecule\": \"C\"}}");
  EXPECT_THROW(completion::extract_json_payload("no braces here"), completion::NoPayload);
}

TEST(Payload, FencedBlockFallback) {
  EXPECT_EQ(completion::extract_json_payload("```json\nmolecule: CCO\n```"), "molecule: CCO\n");
}

TEST(Field, Paths) {
  auto f = completion::parse_molecule_field("{\"molecule\": \"CCO\"}");
  EXPECT_EQ(f.smiles, "CCO");
  EXPECT_EQ(f.path, ExtractionPath::PrimaryJson);
  f = completion::parse_molecule_field("{\"smiles\": \"CCO\"}");
  EXPECT_EQ(f.path, ExtractionPath::FallbackKey);
  f = completion::parse_molecule_field("{'molecule': 'CCO',}");
  EXPECT_EQ(f.smiles, "CCO");
  EXPECT_EQ(f.path, ExtractionPath::HeuristicRepair);
  EXPECT_THROW(completion::parse_molecule_field("{\"name\": \"x\"}"), completion::NoMoleculeField);
}

TEST(Field, FallbackOrder) {
  const auto f = completion::parse_molecule_field("{\"output\": \"CCC\", \"smiles\": \"CCO\"}");
  EXPECT_EQ(f.smiles, "CCO");
}

TEST(Parse, WellFormed) {
  const auto p = completion::parse_completion(test::wrap_completion("CCO"));
  EXPECT_FALSE(p.reasoning.empty());
  ASSERT_TRUE(p.molecule.has_value());
  EXPECT_TRUE(chem::graphs_identical(*p.molecule, chem::parse_smiles("OCC")));
  EXPECT_EQ(p.extraction_path, ExtractionPath::PrimaryJson);
  EXPECT_TRUE(p.failure.empty());
}

TEST(Parse, ChemicallyInvalidKeepsSmiles) {
  const auto p = completion::parse_completion(test::wrap_completion("C(C)(C)(C)(C)C"));
  EXPECT_EQ(p.extracted_smiles, "C(C)(C)(C)(C)C");
  EXPECT_FALSE(p.molecule.has_value());
}

TEST(Parse, NoJson) {
  const auto p = completion::parse_completion("<think>x</think> nothing");
  EXPECT_EQ(p.extraction_path, ExtractionPath::Failed);
  EXPECT_FALSE(p.molecule.has_value());
  EXPECT_FALSE(p.extracted_smiles.has_value());
}

TEST(Parse, RawLengthCountsCodePoints) {
  EXPECT_EQ(completion::parse_completion("αβγ").raw_length, 3u);
}

TEST(Parse, FrozenFixtureCorpus) {
  const auto fixtures = test::load_completion_fixtures();
  ASSERT_EQ(fixtures.size(), 50u);
  for (const auto& f : fixtures) EXPECT_EQ(test::check_completion_fixture(f), "") << f.file;
}

TEST(Parse, FixtureCorpusCoversEveryCategory) {
  std::map<std::string, int> by_prefix;
  for (const auto& f : test::load_completion_fixtures()) by_prefix[f.file.substr(3, 2)]++;
  for (const char* p : {"wf", "fb", "rp", "fl", "ci"}) EXPECT_GE(by_prefix[p], 5) << p;
}

TEST(Parse, NeverThrowsAndIsDeterministic) {
  Rng rng(77);
  const std::string alphabet = "{}[]\"':,` molecule smiles<think></think>CNO()=#1\n\\";
  for (int i = 0; i < 2000; ++i) {
    const std::string text = test::random_string(rng, i % 50 == 0 ? 4000 : 120, alphabet);
    completion::ParsedCompletion a, b;
    ASSERT_NO_THROW(a = completion::parse_completion(text));
    b = completion::parse_completion(text);
    EXPECT_EQ(a.extraction_path, b.extraction_path);
    EXPECT_EQ(a.extracted_smiles, b.extracted_smiles);
    EXPECT_EQ(a.reasoning, b.reasoning);
    EXPECT_EQ(a.failure, b.failure);
    EXPECT_EQ(a.molecule.has_value(), b.molecule.has_value());
  }
}

TEST(Parse, InvalidUtf8DoesNotThrow) {
  const std::string text = "<think>\xff\xfe</think>{\"molecule\": \"C\xc3\"}";
  EXPECT_NO_THROW(completion::parse_completion(text));
}

}  // namespace
