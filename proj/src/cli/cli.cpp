#include "molrl/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <ctime>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "molrl/chem.hpp"
#include "molrl/completion.hpp"
#include "molrl/dataset.hpp"
#include "molrl/evalharness.hpp"
#include "molrl/grpo.hpp"
#include "molrl/policy.hpp"
#include "molrl/reward.hpp"
#include "molrl/text.hpp"
#include "molrl/version.hpp"

namespace molrl::cli {

namespace {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Reported as exit code 1.
struct Findings {
  int code = kExitFindings;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<std::string> non_empty_lines(const std::string& text) {
  std::vector<std::string> out;
  for (auto& line : molrl::text::split(text, '\n')) {
    if (!molrl::text::trim(line).empty()) out.push_back(line);
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Manifest {
  explicit Manifest(std::string name) : subcommand(std::move(name)) {}

  std::string subcommand;
  ojson configs = ojson::object();
  ojson inputs = ojson::object();
  ojson outputs = ojson::object();
  ojson parameters = ojson::object();
  std::optional<std::uint64_t> seed;

  // Writes <output>.manifest.json next to every output.
  void write() const {
    ojson doc;
    doc["subcommand"] = subcommand;
    doc["tool_version"] = kVersion;
    doc["timestamp"] = utc_timestamp();
    doc["seed"] = seed ? ojson(*seed) : ojson(nullptr);
    doc["configs"] = configs;
    doc["inputs"] = inputs;
    doc["outputs"] = outputs;
    doc["parameters"] = parameters;
    for (const auto& [name, path] : outputs.items()) {
      write_text(path.get<std::string>() + ".manifest.json", doc.dump(2) + "\n");
    }
  }
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  bool json = false;
};

dataset::PromptTemplate load_template(const std::string& path) {
  if (path.empty()) return {};
  return dataset::PromptTemplate::from_file(KeyValueFile::load(path));
}

chem::MolGraph require_valid(const std::string& smiles, const std::string& what) {
  chem::MolGraph g = chem::parse_smiles(smiles);
  if (!chem::validate_valence(g).valid) throw UsageError(what + " fails valence validation: " + smiles);
  return g;
}

int cmd_validate(Context& ctx, const std::string& smiles) {
  ojson doc;
  doc["smiles"] = smiles;
  try {
    const chem::MolGraph g = chem::parse_smiles(smiles);
    const chem::ValidationReport report = chem::validate_valence(g);
    doc["valid"] = report.valid;
    doc["violations"] = ojson::array();
    for (const auto& v : report.violations) {
      ojson allowed = ojson::array();
      for (const int a : v.allowed) allowed.push_back(a);
      doc["violations"].push_back({{"atom", v.atom},
                                   {"element", chem::symbol(g.atom(v.atom).element)},
                                   {"observed", v.observed},
                                   {"allowed", allowed}});
    }
    if (ctx.json) {
      ctx.out << doc.dump() << "\n";
    } else if (report.valid) {
      ctx.out << "valid\n";
    } else {
      ctx.out << "invalid\n";
      for (const auto& v : doc["violations"]) {
        ctx.out << "  atom " << v["atom"].get<std::size_t>() << " (" << v["element"].get<std::string>()
                << "): valence " << v["observed"].get<int>() << ", allowed " << v["allowed"].dump() << "\n";
      }
    }
    return report.valid ? kExitOk : kExitFindings;
  } catch (const chem::ParseError& e) {
    doc["valid"] = false;
    doc["error"] = {{"kind", std::string(chem::to_string(e.kind()))}, {"position", e.position()}, {"message", e.what()}};
    if (ctx.json) {
      ctx.out << doc.dump() << "\n";
    } else {
      ctx.out << "invalid\n  parse error: " << e.what() << "\n";
    }
    return kExitFindings;
  }
}

int cmd_canon(Context& ctx, const std::string& smiles) {
  chem::MolGraph g;
  try {
    g = chem::parse_smiles(smiles);
  } catch (const chem::ParseError& e) {
    ctx.err << "parse error: " << e.what() << "\n";
    return kExitFindings;
  }
  if (!chem::validate_valence(g).valid) {
    ctx.err << "invalid molecule: valence check failed\n";
    return kExitFindings;
  }
  const std::string id = chem::canonical_form(g).text;
  const std::string kekule = chem::write_smiles(g);
  if (ctx.json) {
    ctx.out << ojson{{"canonical_id", id}, {"smiles", kekule}, {"discarded_annotations", g.discarded_annotations()}}
                   .dump()
            << "\n";
  } else {
    ctx.out << id << "\n";
  }
  return kExitOk;
}

ojson parsed_json(const completion::ParsedCompletion& p) {
  ojson doc;
  doc["extraction_path"] = std::string(completion::to_string(p.extraction_path));
  doc["extracted_smiles"] = p.extracted_smiles ? ojson(*p.extracted_smiles) : ojson(nullptr);
  doc["molecule_valid"] = p.molecule.has_value();
  doc["canonical_id"] = p.molecule ? ojson(chem::canonical_form(*p.molecule).text) : ojson(nullptr);
  doc["reasoning_chars"] = molrl::text::codepoint_count(p.reasoning);
  doc["raw_length"] = p.raw_length;
  doc["failure"] = p.failure;
  doc["reasoning"] = p.reasoning;
  doc["answer_segment"] = p.answer_segment;
  return doc;
}

int cmd_parse_completion(Context& ctx, const std::string& file) {
  const completion::ParsedCompletion p = completion::parse_completion(read_text(file));
  const ojson doc = parsed_json(p);
  if (ctx.json) {
    ctx.out << doc.dump() << "\n";
  } else {
    ctx.out << "extraction_path  " << doc["extraction_path"].get<std::string>() << "\n";
    ctx.out << "extracted_smiles " << (p.extracted_smiles ? *p.extracted_smiles : "-") << "\n";
    ctx.out << "molecule         " << (p.molecule ? doc["canonical_id"].get<std::string>() : "absent") << "\n";
    ctx.out << "reasoning_chars  " << doc["reasoning_chars"].get<std::size_t>() << "\n";
    ctx.out << "raw_length       " << p.raw_length << "\n";
    if (!p.failure.empty()) ctx.out << "failure          " << p.failure << "\n";
  }
  return p.molecule ? kExitOk : kExitFindings;
}

int cmd_reward(Context& ctx, const std::string& file, const std::string& target, const std::string& examples_file,
               const std::string& config) {
  const reward::RewardConfig cfg = reward::RewardConfig::load(config);
  const chem::MolGraph target_graph = require_valid(target, "target");
  std::vector<chem::MolGraph> examples;
  if (!examples_file.empty()) {
    for (const auto& line : non_empty_lines(read_text(examples_file))) {
      examples.push_back(require_valid(std::string(molrl::text::trim(line)), "example"));
    }
  }
  const completion::ParsedCompletion p = completion::parse_completion(read_text(file));
  const reward::RewardBreakdown b = reward::total_reward(p, target_graph, examples, cfg);
  ojson doc;
  for (std::size_t i = 0; i < reward::kTermCount; ++i) {
    doc["raw"][std::string(reward::kTermNames[i])] = b.raw[i];
    doc["weighted"][std::string(reward::kTermNames[i])] = b.weighted[i];
  }
  doc["total"] = b.total;
  doc["gated_copy"] = b.gated_copy;
  doc["gated_invalid"] = b.gated_invalid;
  if (ctx.json) {
    ctx.out << doc.dump() << "\n";
  } else {
    for (std::size_t i = 0; i < reward::kTermCount; ++i) {
      ctx.out << std::left << std::setw(14) << reward::kTermNames[i] << " raw " << std::fixed << std::setprecision(4)
              << b.raw[i] << "  weighted " << b.weighted[i] << "\n";
    }
    ctx.out << "total " << b.total << (b.gated_copy ? "  (copy of an example)" : "")
            << (b.gated_invalid ? "  (no valid molecule)" : "") << "\n";
  }
  return kExitOk;
}

int cmd_prepare(Context& ctx, const std::string& in, const std::string& rejects, const std::string& out) {
  const dataset::LoadResult loaded = dataset::load_records(in);
  std::string rejects_text;
  for (const auto& r : loaded.rejects) rejects_text += ojson{{"id", r.id}, {"reason", r.reason}}.dump() + "\n";
  write_text(rejects, rejects_text);
  Manifest m{"prepare"};
  m.inputs["in"] = in;
  m.outputs["rejects"] = rejects;
  if (!out.empty()) {
    write_text(out, dataset::records_to_jsonl(loaded.records));
    m.outputs["out"] = out;
  }
  m.write();
  std::map<std::string, std::size_t> strata;
  for (const auto& r : loaded.records) ++strata[dataset::to_string(dataset::stratum_of(r))];
  if (ctx.json) {
    ctx.out << ojson{{"records", loaded.records.size()}, {"rejects", loaded.rejects.size()}, {"strata", strata}}.dump()
            << "\n";
  } else {
    ctx.out << loaded.records.size() << " records accepted, " << loaded.rejects.size() << " rejected\n";
    for (const auto& [s, n] : strata) ctx.out << "  " << s << ": " << n << "\n";
  }
  return loaded.rejects.empty() ? kExitOk : kExitFindings;
}

int cmd_export_sft(Context& ctx, const std::string& in, std::size_t gamma, double w_short, const std::string& out,
                   const std::string& tmpl_path, std::size_t max_len) {
  const dataset::LoadResult loaded = dataset::load_records(in);
  const auto triples = dataset::export_sft(loaded.records, load_template(tmpl_path), {gamma, w_short, max_len});
  std::string text;
  for (const auto& t : triples) text += dataset::sft_to_json(t) + "\n";
  write_text(out, text);
  Manifest m{"export-sft"};
  m.inputs["in"] = in;
  if (!tmpl_path.empty()) m.configs["template"] = tmpl_path;
  m.outputs["out"] = out;
  m.parameters = {{"gamma", gamma}, {"w_short", w_short}, {"max_len", max_len}};
  m.write();
  if (ctx.json) {
    ctx.out << ojson{{"triples", triples.size()}, {"records", loaded.records.size()}}.dump() << "\n";
  } else {
    ctx.out << triples.size() << " SFT triples from " << loaded.records.size() << " records\n";
  }
  return kExitOk;
}

int cmd_export_rl(Context& ctx, const std::string& in, const std::string& strata, std::size_t n, std::uint64_t seed,
                  const std::string& out, const std::string& tmpl_path) {
  const dataset::LoadResult loaded = dataset::load_records(in);
  const dataset::StratumTargets targets = dataset::load_strata(KeyValueFile::load(strata));
  const auto prompts = dataset::export_rl(loaded.records, load_template(tmpl_path), targets, n, seed);
  std::string text;
  for (const auto& p : prompts) text += dataset::rl_to_json(p) + "\n";
  write_text(out, text);
  Manifest m{"export-rl"};
  m.inputs["in"] = in;
  m.configs["strata"] = strata;
  if (!tmpl_path.empty()) m.configs["template"] = tmpl_path;
  m.outputs["out"] = out;
  m.parameters = {{"n", n}};
  m.seed = seed;
  m.write();
  if (ctx.json) {
    ctx.out << ojson{{"prompts", prompts.size()}}.dump() << "\n";
  } else {
    ctx.out << prompts.size() << " RL prompts written\n";
  }
  return kExitOk;
}

int cmd_bootstrap(Context& ctx, const std::string& in, const std::string& policy_cfg, std::size_t attempts,
                  const std::string& out, const std::string& tmpl_path, std::uint64_t seed, double temperature) {
  dataset::LoadResult loaded = dataset::load_records(in);
  const KeyValueFile kv = KeyValueFile::load(policy_cfg);
  const std::string kind = kv.get_or("kind", "http");
  if (kind != "http") throw UsageError("unsupported policy kind '" + kind + "'");
  policy::HttpPolicy pol(policy::EndpointConfig::from_file(kv));
  dataset::BootstrapOptions opts;
  opts.attempts_per_record = attempts;
  opts.seed = seed;
  opts.temperature = temperature;
  const dataset::BootstrapReport report = dataset::bootstrap(loaded.records, pol, load_template(tmpl_path), opts);
  write_text(out, dataset::records_to_jsonl(loaded.records));
  Manifest m{"bootstrap"};
  m.inputs["in"] = in;
  m.configs["policy"] = policy_cfg;
  if (!tmpl_path.empty()) m.configs["template"] = tmpl_path;
  m.outputs["out"] = out;
  m.parameters = {{"attempts", attempts}, {"temperature", temperature}};
  m.seed = seed;
  m.write();
  ojson doc{{"considered", report.considered},
            {"attempts", report.attempts},
            {"flipped", report.flipped},
            {"flipped_ids", report.flipped_ids},
            {"failure_reasons", report.failure_reasons}};
  if (ctx.json) {
    ctx.out << doc.dump() << "\n";
  } else {
    ctx.out << report.flipped << " of " << report.considered << " failed records flipped in " << report.attempts
            << " attempts\n";
    for (const auto& [reason, n] : report.failure_reasons) ctx.out << "  " << reason << ": " << n << "\n";
  }
  return kExitOk;
}

int cmd_train_toy(Context& ctx, const std::string& prompts_path, const std::string& candidates_path,
                  const std::string& grpo_cfg, const std::string& reward_cfg, const std::string& report_path,
                  const std::string& predictions_path) {
  const std::vector<dataset::RlPrompt> prompts = dataset::load_rl_prompts(prompts_path);
  const grpo::GrpoConfig cfg = grpo::GrpoConfig::from_file(KeyValueFile::load(grpo_cfg));
  const reward::RewardConfig rcfg = reward::RewardConfig::load(reward_cfg);

  std::map<std::string, std::vector<std::string>> candidates;
  for (const auto& line : non_empty_lines(read_text(candidates_path))) {
    const ojson doc = ojson::parse(line);
    candidates[doc.at("id").get<std::string>()] = doc.at("candidates").get<std::vector<std::string>>();
  }
  policy::ToyPolicy toy(cfg.seed);
  std::vector<dataset::RlPrompt> used;
  for (const auto& p : prompts) {
    const auto it = candidates.find(p.id);
    if (it == candidates.end()) throw UsageError("no candidates for prompt '" + p.id + "'");
    const std::string key = policy::ToyPolicy::prompt_key(p.system, p.user);
    try {
      toy.prompt_index(key);
      continue;  // repeated prompt from sampling; train it once
    } catch (const policy::UnknownPrompt&) {
    }
    toy.add_prompt(key, it->second);
    used.push_back(p);
  }
  const grpo::TrainingReport report = grpo::train_toy(toy, used, cfg, rcfg);
  write_text(report_path, grpo::report_to_json(report) + "\n");
  Manifest m{"train-toy"};
  m.inputs["prompts"] = prompts_path;
  m.inputs["candidates"] = candidates_path;
  m.configs["grpo"] = grpo_cfg;
  m.configs["reward"] = reward_cfg;
  m.outputs["report"] = report_path;
  m.seed = cfg.seed;
  if (!predictions_path.empty()) {
    std::string text;
    for (const auto& p : prompts) {
      const std::size_t idx = toy.prompt_index(policy::ToyPolicy::prompt_key(p.system, p.user));
      Rng unused(0);
      const policy::Completion c = toy.complete_prompt(idx, 0.0, unused);
      text += ojson{{"id", p.id}, {"completion", c.text}}.dump() + "\n";
    }
    write_text(predictions_path, text);
    m.outputs["predictions"] = predictions_path;
  }
  m.write();
  const auto& last = report.iterations.empty() ? grpo::IterationRecord{} : report.iterations.back();
  if (ctx.json) {
    ctx.out << ojson{{"prompts", used.size()},
                     {"iterations", report.iterations.size()},
                     {"final_mean_reward", last.mean_reward},
                     {"final_validity", last.validity},
                     {"final_exact_probability", last.exact_probability}}
                   .dump()
            << "\n";
  } else {
    ctx.out << "trained " << used.size() << " prompts for " << report.iterations.size() << " iterations\n";
    ctx.out << "final mean reward " << last.mean_reward << ", validity " << last.validity
            << ", exact-match probability " << last.exact_probability << "\n";
  }
  return kExitOk;
}

std::vector<std::string> read_field(const std::string& path, const char* what, bool reference) {
  std::vector<std::string> out;
  for (const auto& line : non_empty_lines(read_text(path))) {
    const ojson doc = ojson::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
      throw UsageError(std::string(what) + " file must be JSONL objects: " + path);
    }
    if (!reference) {
      out.push_back(doc.at("completion").get<std::string>());
    } else if (doc.contains("smiles")) {
      out.push_back(doc.at("smiles").get<std::string>());
    } else {
      out.push_back(doc.at("reference").at("smiles").get<std::string>());
    }
  }
  return out;
}

int cmd_evaluate(Context& ctx, const std::string& pred, const std::string& ref, const std::string& report_path,
                 const std::string& details_path) {
  const auto predictions = read_field(pred, "prediction", false);
  const auto references = read_field(ref, "reference", true);
  const eval::MetricsReport report = eval::evaluate_set(predictions, references);
  write_text(report_path, eval::report_to_json(report) + "\n");
  Manifest m{"evaluate"};
  m.inputs["pred"] = pred;
  m.inputs["ref"] = ref;
  m.outputs["report"] = report_path;
  if (!details_path.empty()) {
    write_text(details_path, eval::details_to_jsonl(report));
    m.outputs["details"] = details_path;
  }
  m.write();
  if (ctx.json) {
    ojson doc = ojson::parse(eval::report_to_json(report, -1));
    doc.erase("records");
    ctx.out << doc.dump() << "\n";
  } else {
    ctx.out << eval::report_to_table(report);
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Text-to-molecule reward, dataset and GRPO toolkit", "molrl"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  Context ctx{out, err};
  std::function<int()> action;

  auto json_flag = [&](CLI::App* sub) { sub->add_flag("--json", ctx.json, "Machine-readable output"); };

  std::string smiles;
  auto* validate = app.add_subcommand("validate", "Check a SMILES string against the valence rules");
  validate->add_option("smiles", smiles)->required();
  json_flag(validate);
  validate->callback([&] { action = [&] { return cmd_validate(ctx, smiles); }; });

  auto* canon = app.add_subcommand("canon", "Print the canonical identifier of a SMILES string");
  canon->add_option("smiles", smiles)->required();
  json_flag(canon);
  canon->callback([&] { action = [&] { return cmd_canon(ctx, smiles); }; });

  std::string file;
  auto* parse = app.add_subcommand("parse-completion", "Extract and validate the molecule in a completion file");
  parse->add_option("file", file)->required()->check(CLI::ExistingFile);
  json_flag(parse);
  parse->callback([&] { action = [&] { return cmd_parse_completion(ctx, file); }; });

  std::string target, examples, config;
  auto* rew = app.add_subcommand("reward", "Score a completion file against a target molecule");
  rew->add_option("completion-file", file)->required()->check(CLI::ExistingFile);
  rew->add_option("--target", target, "Target SMILES")->required();
  rew->add_option("--examples", examples, "File with one in-context example SMILES per line")
      ->check(CLI::ExistingFile);
  rew->add_option("--config", config, "Reward config file")->required()->check(CLI::ExistingFile);
  json_flag(rew);
  rew->callback([&] { action = [&] { return cmd_reward(ctx, file, target, examples, config); }; });

  std::string in, out_path, rejects, tmpl;
  auto* prepare = app.add_subcommand("prepare", "Validate a dataset file and write the rejects report");
  prepare->add_option("--in", in)->required()->check(CLI::ExistingFile);
  prepare->add_option("--rejects", rejects)->required();
  prepare->add_option("--out", out_path, "Also write the accepted records");
  json_flag(prepare);
  prepare->callback([&] { action = [&] { return cmd_prepare(ctx, in, rejects, out_path); }; });

  std::size_t gamma = 200;
  double w_short = 0.3;
  std::size_t max_len = 4096;
  auto* sft = app.add_subcommand("export-sft", "Write weighted SFT triples");
  sft->add_option("--in", in)->required()->check(CLI::ExistingFile);
  sft->add_option("--gamma", gamma, "Reasoning length below which w-short applies")->capture_default_str();
  sft->add_option("--w-short", w_short, "Weight for short reasoning")->capture_default_str();
  sft->add_option("--max-len", max_len, "Sequence length cap recorded with each triple")->capture_default_str();
  sft->add_option("--template", tmpl, "Prompt template file")->check(CLI::ExistingFile);
  sft->add_option("--out", out_path)->required();
  json_flag(sft);
  sft->callback([&] { action = [&] { return cmd_export_sft(ctx, in, gamma, w_short, out_path, tmpl, max_len); }; });

  std::string strata;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  auto* rl = app.add_subcommand("export-rl", "Write stratified RL prompts");
  rl->add_option("--in", in)->required()->check(CLI::ExistingFile);
  rl->add_option("--strata", strata, "Stratum targets file")->required()->check(CLI::ExistingFile);
  rl->add_option("--n", n)->required();
  rl->add_option("--seed", seed)->required();
  rl->add_option("--template", tmpl, "Prompt template file")->check(CLI::ExistingFile);
  rl->add_option("--out", out_path)->required();
  json_flag(rl);
  rl->callback([&] { action = [&] { return cmd_export_rl(ctx, in, strata, n, seed, out_path, tmpl); }; });

  std::string policy_cfg;
  std::size_t attempts = 4;
  double temperature = 0.9;
  auto* boot = app.add_subcommand("bootstrap", "Regenerate failed records through a policy endpoint");
  boot->add_option("--in", in)->required()->check(CLI::ExistingFile);
  boot->add_option("--policy", policy_cfg, "Endpoint config file")->required()->check(CLI::ExistingFile);
  boot->add_option("--attempts", attempts)->capture_default_str();
  boot->add_option("--temperature", temperature)->capture_default_str();
  boot->add_option("--seed", seed)->capture_default_str();
  boot->add_option("--template", tmpl, "Prompt template file")->check(CLI::ExistingFile);
  boot->add_option("--out", out_path)->required();
  json_flag(boot);
  boot->callback([&] {
    action = [&] { return cmd_bootstrap(ctx, in, policy_cfg, attempts, out_path, tmpl, seed, temperature); };
  });

  std::string prompts, candidates, grpo_cfg, reward_cfg, report, predictions;
  auto* train = app.add_subcommand("train-toy", "Run GRPO on the toy categorical policy");
  train->add_option("--prompts", prompts)->required()->check(CLI::ExistingFile);
  train->add_option("--candidates", candidates)->required()->check(CLI::ExistingFile);
  train->add_option("--grpo", grpo_cfg)->required()->check(CLI::ExistingFile);
  train->add_option("--reward", reward_cfg)->required()->check(CLI::ExistingFile);
  train->add_option("--report", report)->required();
  train->add_option("--emit-predictions", predictions, "Write the greedy completion per prompt as JSONL");
  json_flag(train);
  train->callback([&] {
    action = [&] { return cmd_train_toy(ctx, prompts, candidates, grpo_cfg, reward_cfg, report, predictions); };
  });

  std::string pred, ref, details;
  auto* evaluate = app.add_subcommand("evaluate", "Compute metrics for predictions against references");
  evaluate->add_option("--pred", pred, "JSONL with a completion field")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--ref", ref, "JSONL with smiles or reference.smiles")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--report", report)->required();
  evaluate->add_option("--details", details, "Per-record JSONL");
  json_flag(evaluate);
  evaluate->callback([&] { action = [&] { return cmd_evaluate(ctx, pred, ref, report, details); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    return action ? action() : kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const chem::ParseError& e) {
    err << "SMILES error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace molrl::cli
