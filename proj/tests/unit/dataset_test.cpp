#include <gtest/gtest.h>

#include <set>

#include "molrl/chem.hpp"
#include "molrl/completion.hpp"
#include "molrl/dataset.hpp"
#include "molrl/policy.hpp"
#include "test_support.hpp"

namespace {

using namespace molrl;
using dataset::DatasetRecord;
using dataset::Stratum;

std::string line(const std::string& id, const std::string& smiles, bool success = false, int k = 0) {
  std::string examples = "[";
  for (int i = 0; i < k; ++i) {
    examples += std::string(i ? "," : "") + "{\"caption\": \"example " + std::to_string(i) + "\", \"smiles\": \"CC" +
                std::string(i, 'C') + "O\"}";
  }
  examples += "]";
  const std::string cot = success ? ", \"cot\": \"reasoning about it\"" : "";
  return "{\"id\": \"" + id + "\", \"caption\": \"caption " + id + "\", \"ground_truth_smiles\": \"" + smiles +
         "\", \"examples\": " + examples + cot + ", \"success\": " + (success ? "true" : "false") + "}\n";
}

DatasetRecord record(const std::string& id, std::size_t k, bool success, const std::string& smiles = "CCO") {
  DatasetRecord r;
  r.id = id;
  r.caption = "caption " + id;
  r.ground_truth_smiles = smiles;
  for (std::size_t i = 0; i < k; ++i) r.examples.push_back({"example " + std::to_string(i), "CCN"});
  if (success) r.cot = "reasoning for " + id;
  r.success = success;
  return r;
}

std::vector<DatasetRecord> pool(const std::map<Stratum, std::size_t>& sizes) {
  std::vector<DatasetRecord> out;
  for (const auto& [s, count] : sizes) {
    for (std::size_t i = 0; i < count; ++i) {
      out.push_back(record(dataset::to_string(s) + "#" + std::to_string(i), s.k, s.success));
    }
  }
  return out;
}

TEST(Records, ParsesEachLine) {
  const auto r = dataset::parse_records(line("a", "CCO") + "\n" + line("b", "c1ccccc1", true, 1) + line("c", "N", false, 2));
  ASSERT_EQ(r.records.size(), 3u);
  EXPECT_TRUE(r.rejects.empty());
  EXPECT_EQ(r.records[1].examples.size(), 1u);
  EXPECT_TRUE(r.records[1].success);
  EXPECT_EQ(r.records[2].examples[1].smiles, "CCCO");
}

TEST(Records, MissingFieldIsSchemaViolation) {
  try {
    dataset::parse_records(line("a", "CCO") + "{\"id\": \"b\", \"caption\": \"x\", \"examples\": [], \"success\": false}\n");
    FAIL();
  } catch (const dataset::SchemaViolation& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.field(), "ground_truth_smiles");
  }
  EXPECT_THROW(dataset::parse_records("{not json\n"), dataset::MalformedLine);
}

TEST(Records, ChemistryFailuresAreRejectedNotThrown) {
  const auto r = dataset::parse_records(line("a", "CCO") + line("b", "C(C)(C)(C)(C)C") + line("a", "CC") +
                                        line("d", "C1CC"));
  ASSERT_EQ(r.records.size(), 1u);
  ASSERT_EQ(r.rejects.size(), 3u);
  EXPECT_EQ(r.rejects[0].id, "b");
  EXPECT_NE(r.rejects[0].reason.find("valence"), std::string::npos);
  EXPECT_EQ(r.rejects[1].reason, "duplicate id");
}

TEST(Records, JsonRoundTrip) {
  DatasetRecord r = record("x", 2, true);
  r.answer = "{\"molecule\": \"CCO\"}";
  const auto back = dataset::parse_records(dataset::records_to_jsonl({r}));
  ASSERT_EQ(back.records.size(), 1u);
  EXPECT_EQ(back.records[0], r);
}

TEST(Prompts, ZeroExamplesHasNoHeader) {
  const dataset::PromptTemplate tmpl;
  const auto p = dataset::assemble_prompt(record("a", 0, false), tmpl);
  EXPECT_EQ(p.system, tmpl.task_description);
  EXPECT_EQ(p.user, "caption a");
}

TEST(Prompts, ExamplesInOrder) {
  const dataset::PromptTemplate tmpl;
  DatasetRecord r = record("a", 0, false);
  r.examples = {{"first caption", "CCO"}, {"second caption", "CCN"}};
  const auto p = dataset::assemble_prompt(r, tmpl);
  const auto header = p.system.find(tmpl.example_header);
  const auto one = p.system.find("Example 1:\nDescription: first caption\nMolecule: CCO");
  const auto two = p.system.find("Example 2:\nDescription: second caption\nMolecule: CCN");
  ASSERT_NE(header, std::string::npos);
  ASSERT_NE(one, std::string::npos);
  ASSERT_NE(two, std::string::npos);
  EXPECT_LT(header, one);
  EXPECT_LT(one, two);
  EXPECT_EQ(p.system, dataset::assemble_prompt(r, tmpl).system);
}

TEST(Prompts, ShippedTemplateMatchesDefaults) {
  const auto loaded = dataset::PromptTemplate::from_file(
      KeyValueFile::load(std::filesystem::path(MOLRL_CONFIG_DIR) / "template.cfg"));
  const dataset::PromptTemplate defaults;
  EXPECT_EQ(loaded.task_description, defaults.task_description);
  EXPECT_EQ(loaded.example_format, defaults.example_format);
  EXPECT_EQ(loaded.separator, defaults.separator);
}

TEST(English, Whitelist) {
  EXPECT_TRUE(dataset::is_english("A benzene ring with an OH group.\n"));
  EXPECT_TRUE(dataset::is_english("Heated to 80 \xC2\xB0" "C, \xCE\xB1-carbon, 1.5 \xC3\x85, H\xE2\x82\x82O"));
  EXPECT_TRUE(dataset::is_english(""));
  EXPECT_FALSE(dataset::is_english("\xE5\x88\x86\xE5\xAD\x90"));
  EXPECT_FALSE(dataset::is_english("caf\xC3\xA9"));
  EXPECT_FALSE(dataset::is_english("bad \xFF byte"));
}

TEST(Sft, WeightsByReasoningLength) {
  DatasetRecord short_r = record("s", 1, true);
  short_r.cot = std::string(50, 'a');
  DatasetRecord long_r = record("l", 1, true);
  long_r.cot = std::string(500, 'a');
  const auto triples = dataset::export_sft({short_r, long_r, record("f", 1, false)}, {});
  ASSERT_EQ(triples.size(), 2u);
  EXPECT_EQ(triples[0].weight, 0.3);
  EXPECT_EQ(triples[1].weight, 1.0);
  EXPECT_EQ(triples[0].max_len, 4096u);
  EXPECT_THROW(dataset::export_sft({short_r}, {}, {200, 0.0, 4096}), std::invalid_argument);
}

TEST(Sft, AssistantParsesBackToGroundTruth) {
  const auto triples = dataset::export_sft({record("a", 0, true, "c1ccccc1O")}, {});
  ASSERT_EQ(triples.size(), 1u);
  const auto p = completion::parse_completion(triples[0].assistant);
  EXPECT_EQ(p.extraction_path, completion::ExtractionPath::PrimaryJson);
  EXPECT_EQ(p.reasoning, "reasoning for a");
  ASSERT_TRUE(p.molecule);
  EXPECT_TRUE(chem::graphs_identical(*p.molecule, chem::parse_smiles("Oc1ccccc1")));
}

TEST(Sft, SkipsNonEnglishReasoning) {
  DatasetRecord r = record("a", 0, true);
  r.cot = "\xE5\x88\x86\xE5\xAD\x90";
  EXPECT_TRUE(dataset::export_sft({r}, {}).empty());
}

TEST(Rl, PromptDoesNotLeakReference) {
  const auto loaded = dataset::load_records(std::filesystem::path(MOLRL_DEMO_DATA) / "records.jsonl");
  ASSERT_FALSE(loaded.records.empty());
  for (const auto& r : loaded.records) {
    const auto p = dataset::make_rl_prompt(r, {});
    EXPECT_EQ(p.system.find(r.ground_truth_smiles), std::string::npos) << r.id;
    EXPECT_EQ(p.user.find(r.ground_truth_smiles), std::string::npos) << r.id;
    if (r.cot) {
      EXPECT_EQ(p.system.find(*r.cot), std::string::npos) << r.id;
    }
  }
}

TEST(Rl, JsonRoundTrip) {
  const auto p = dataset::make_rl_prompt(record("a", 2, true, "CC(=O)O"), {});
  const auto back = dataset::rl_from_json(dataset::rl_to_json(p));
  EXPECT_EQ(back.id, p.id);
  EXPECT_EQ(back.system, p.system);
  EXPECT_EQ(back.reference.example_smiles, p.reference.example_smiles);
  EXPECT_EQ(back.stratum, p.stratum);
  EXPECT_TRUE(chem::graphs_identical(back.reference.molecule, p.reference.molecule));
}

TEST(Strata, QuotasSplitEvenly) {
  const dataset::StratumTargets targets{{{0, true}, 0.5}, {{5, false}, 0.5}};
  const auto q = dataset::stratum_quotas(targets, 10, 1);
  EXPECT_EQ(q.at({0, true}), 5u);
  EXPECT_EQ(q.at({5, false}), 5u);
  const auto sample = dataset::stratified_sample(pool({{{0, true}, 8}, {{5, false}, 8}}), targets, 10, 1);
  std::map<Stratum, int> seen;
  for (const auto& r : sample) seen[dataset::stratum_of(r)]++;
  EXPECT_EQ(seen[(Stratum{0, true})], 5);
  EXPECT_EQ(seen[(Stratum{5, false})], 5);
}

TEST(Strata, QuotasAlwaysSumToN) {
  const dataset::StratumTargets targets{{{0, false}, 0.1}, {{1, false}, 0.2}, {{1, true}, 0.3}, {{2, true}, 0.4}};
  for (std::size_t n = 0; n < 40; ++n) {
    std::size_t total = 0;
    for (const auto& [s, q] : dataset::stratum_quotas(targets, n, n)) total += q;
    EXPECT_EQ(total, n);
  }
}

TEST(Strata, Errors) {
  const dataset::StratumTargets targets{{{0, true}, 0.5}, {{1, true}, 0.5}};
  EXPECT_THROW(dataset::stratified_sample(pool({{{0, true}, 4}}), targets, 4, 0), dataset::EmptyStratum);
  EXPECT_THROW(dataset::stratified_sample(pool({{{0, true}, 4}, {{1, true}, 1}}), targets, 4, 0),
               dataset::InsufficientStratum);
  EXPECT_THROW(dataset::stratum_quotas({{{0, true}, 0.7}}, 4, 0), std::invalid_argument);
  EXPECT_THROW(dataset::load_strata(KeyValueFile::parse("stratum.x.1 = 1")), ConfigError);
}

TEST(Strata, ShippedConfig) {
  const auto targets = dataset::load_strata(KeyValueFile::load(std::filesystem::path(MOLRL_CONFIG_DIR) / "strata.cfg"));
  EXPECT_EQ(targets.size(), 4u);
}

TEST(Strata, ProportionsOverManyDraws) {
  const dataset::StratumTargets targets{{{0, false}, 0.1}, {{1, false}, 0.2}, {{1, true}, 0.3}, {{2, true}, 0.4}};
  const auto records = pool({{{0, false}, 10}, {{1, false}, 10}, {{1, true}, 10}, {{2, true}, 10}});
  std::map<Stratum, std::size_t> counts;
  std::size_t total = 0;
  // n = 25 leaves two equal remainders, so the seed decides which stratum rounds up.
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    for (const auto& r : dataset::stratified_sample(records, targets, 25, seed)) {
      counts[dataset::stratum_of(r)]++;
      ++total;
    }
  }
  for (const auto& [s, f] : targets) {
    EXPECT_NEAR(static_cast<double>(counts[s]) / static_cast<double>(total), f, 0.02) << dataset::to_string(s);
  }
}

TEST(Strata, SameSeedSameBytes) {
  const auto loaded = dataset::load_records(std::filesystem::path(MOLRL_DEMO_DATA) / "records.jsonl");
  const auto targets = dataset::load_strata(KeyValueFile::load(std::filesystem::path(MOLRL_CONFIG_DIR) / "strata.cfg"));
  auto dump = [&](std::uint64_t seed) {
    std::string out;
    for (const auto& p : dataset::export_rl(loaded.records, {}, targets, 8, seed)) out += dataset::rl_to_json(p) + "\n";
    return out;
  };
  EXPECT_EQ(dump(3), dump(3));
  EXPECT_NE(dump(3), dump(4));
}

class BootstrapTest : public ::testing::Test {
 protected:
  std::vector<DatasetRecord> records;

  void SetUp() override {
    const char* smiles[] = {"CCO", "CCN", "c1ccccc1", "CC(=O)O", "CCCC", "OCCO", "C1CCCCC1", "CC=O", "NCC(=O)O", "CS"};
    for (int i = 0; i < 10; ++i) records.push_back(record("r" + std::to_string(i), 1, false, smiles[i]));
    records.push_back(record("done", 1, true, "CCCl"));
  }

  static std::string completion_for(const std::string& smiles) { return test::wrap_completion(smiles); }
};

TEST_F(BootstrapTest, AllCorrectFlipsEveryFailedRecord) {
  std::map<std::string, std::string> by_caption;
  for (const auto& r : records) by_caption[r.caption] = r.ground_truth_smiles;
  policy::MockPolicy mock([&](const policy::GenerationRequest& req, std::size_t) {
    return completion_for(by_caption.at(req.user));
  });
  const auto before_done = records.back();
  const auto report = dataset::bootstrap(records, mock, {}, {});
  EXPECT_EQ(report.considered, 10u);
  EXPECT_EQ(report.flipped, 10u);
  EXPECT_EQ(report.attempts, 10u);
  for (const auto& r : records) EXPECT_TRUE(r.success);
  EXPECT_EQ(records.back(), before_done);
}

TEST_F(BootstrapTest, WrongMoleculeFlipsNothing) {
  policy::MockPolicy mock = policy::MockPolicy::fixed(completion_for("CCCCCCCCCC"));
  const auto report = dataset::bootstrap(records, mock, {}, {});
  EXPECT_EQ(report.flipped, 0u);
  EXPECT_EQ(report.attempts, 40u);
  EXPECT_EQ(report.failure_reasons.at("wrong_molecule"), 40u);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_FALSE(records[i].success);
    EXPECT_FALSE(records[i].cot);
  }
}

TEST_F(BootstrapTest, ScriptedSubsetFlipsExactly) {
  const std::set<std::string> succeed = {"caption r1", "caption r4", "caption r7"};
  std::map<std::string, std::string> by_caption;
  for (const auto& r : records) by_caption[r.caption] = r.ground_truth_smiles;
  policy::MockPolicy mock([&](const policy::GenerationRequest& req, std::size_t) {
    if (succeed.count(req.user)) return completion_for(by_caption.at(req.user));
    return std::string("<think>no idea</think> {\"molecule\": \"C(C)(C)(C)(C)C\"}");
  });
  const auto report = dataset::bootstrap(records, mock, {}, {});
  EXPECT_EQ(report.flipped_ids, (std::vector<std::string>{"r1", "r4", "r7"}));
  for (const auto& r : records) {
    if (r.id == "done") continue;
    EXPECT_EQ(r.success, succeed.count(r.caption) == 1) << r.id;
    if (!r.success) continue;
    ASSERT_TRUE(r.answer);
    const auto p = completion::parse_completion(*r.answer);
    ASSERT_TRUE(p.molecule);
    EXPECT_EQ(chem::canonical_form(*p.molecule), chem::canonical_form(chem::parse_smiles(r.ground_truth_smiles)));
  }
}

TEST_F(BootstrapTest, NonEnglishReasoningIsNotWrittenBack) {
  policy::MockPolicy mock = policy::MockPolicy::fixed("<think>\xE5\x88\x86\xE5\xAD\x90</think>{\"molecule\": \"CCO\"}");
  const auto report = dataset::bootstrap(records, mock, {}, {});
  EXPECT_EQ(report.flipped, 0u);
  EXPECT_GT(report.failure_reasons.at("non_english_reasoning"), 0u);
}

}  // namespace
