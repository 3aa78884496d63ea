#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "molrl/chem/smiles.hpp"
#include "molrl/chem/valence.hpp"
#include "molrl/dataset.hpp"
#include "molrl/random.hpp"
#include "molrl/text.hpp"

namespace molrl::dataset {

namespace {

using nlohmann::json;

chem::MolGraph valid_graph(const std::string& smiles) {
  chem::MolGraph g = chem::parse_smiles(smiles);
  if (!chem::validate_valence(g).valid) throw chem::InvalidGraph("valence check failed for " + smiles);
  return g;
}

}  // namespace

StratumTargets load_strata(const KeyValueFile& kv) {
  StratumTargets targets;
  for (const auto& e : kv.entries()) {
    if (e.key == "format" || e.key == "version") continue;
    const auto parts = text::split(e.key, '.');
    if (parts.size() != 3 || parts[0] != "stratum" || (parts[2] != "0" && parts[2] != "1") || parts[1].empty() ||
        !std::all_of(parts[1].begin(), parts[1].end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw ConfigError(kv.source() + ":" + std::to_string(e.line) + ": expected stratum.<K>.<0|1>, got " + e.key);
    }
    const Stratum s{static_cast<std::size_t>(std::stoull(parts[1])), parts[2] == "1"};
    targets[s] = kv.get_double(e.key);
  }
  if (targets.empty()) throw ConfigError(kv.source() + ": no strata");
  return targets;
}

std::map<Stratum, std::size_t> stratum_quotas(const StratumTargets& targets, std::size_t n, std::uint64_t seed) {
  double sum = 0;
  for (const auto& [s, f] : targets) {
    if (!(f >= 0)) throw std::invalid_argument("stratum fraction must be >= 0");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("stratum fractions must sum to 1");

  struct Share {
    Stratum stratum;
    double remainder;
    std::uint64_t tie;
  };
  Rng rng(mix_seed(seed, 0x5157));
  std::map<Stratum, std::size_t> quotas;
  std::vector<Share> shares;
  std::size_t assigned = 0;
  for (const auto& [s, f] : targets) {
    const double exact = static_cast<double>(n) * f;
    const auto whole = static_cast<std::size_t>(std::floor(exact));
    quotas[s] = whole;
    assigned += whole;
    shares.push_back({s, exact - static_cast<double>(whole), rng.next()});
  }
  std::sort(shares.begin(), shares.end(), [](const Share& a, const Share& b) {
    if (a.remainder != b.remainder) return a.remainder > b.remainder;
    return a.tie < b.tie;
  });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++quotas[shares[i % shares.size()].stratum];
  return quotas;
}

std::vector<DatasetRecord> stratified_sample(const std::vector<DatasetRecord>& records,
                                             const StratumTargets& targets, std::size_t n, std::uint64_t seed) {
  const auto quotas = stratum_quotas(targets, n, seed);
  std::map<Stratum, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < records.size(); ++i) members[stratum_of(records[i])].push_back(i);

  Rng rng(seed);
  std::vector<DatasetRecord> out;
  out.reserve(n);
  for (const auto& [s, quota] : quotas) {
    auto it = members.find(s);
    if (it == members.end() || it->second.empty()) throw EmptyStratum("stratum " + to_string(s) + " has no records");
    std::vector<std::size_t>& pool = it->second;
    if (pool.size() < quota) {
      throw InsufficientStratum("stratum " + to_string(s) + " has " + std::to_string(pool.size()) +
                                " records, quota " + std::to_string(quota));
    }
    for (std::size_t i = 0; i < quota; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
      std::swap(pool[i], pool[j]);
      out.push_back(records[pool[i]]);
    }
  }
  return out;
}

RlPrompt make_rl_prompt(const DatasetRecord& r, const PromptTemplate& tmpl) {
  const Prompt p = assemble_prompt(r, tmpl);
  RlPrompt out;
  out.id = r.id;
  out.system = p.system;
  out.user = p.user;
  out.reference.smiles = r.ground_truth_smiles;
  out.reference.molecule = valid_graph(r.ground_truth_smiles);
  for (const auto& e : r.examples) {
    out.reference.example_smiles.push_back(e.smiles);
    out.reference.example_molecules.push_back(valid_graph(e.smiles));
  }
  out.stratum = stratum_of(r);
  return out;
}

std::vector<RlPrompt> export_rl(const std::vector<DatasetRecord>& records, const PromptTemplate& tmpl,
                                const StratumTargets& targets, std::size_t n, std::uint64_t seed) {
  std::vector<RlPrompt> out;
  for (const auto& r : stratified_sample(records, targets, n, seed)) out.push_back(make_rl_prompt(r, tmpl));
  return out;
}

std::string rl_to_json(const RlPrompt& p) {
  nlohmann::ordered_json obj;
  obj["id"] = p.id;
  obj["system"] = p.system;
  obj["user"] = p.user;
  obj["reference"]["smiles"] = p.reference.smiles;
  obj["reference"]["example_smiles"] = p.reference.example_smiles;
  obj["stratum"] = {{"k", p.stratum.k}, {"success", p.stratum.success}};
  return obj.dump();
}

RlPrompt rl_from_json(std::string_view line) {
  const json obj = json::parse(line);
  RlPrompt p;
  p.id = obj.value("id", "");
  p.system = obj.at("system").get<std::string>();
  p.user = obj.at("user").get<std::string>();
  const json& ref = obj.at("reference");
  p.reference.smiles = ref.at("smiles").get<std::string>();
  p.reference.molecule = valid_graph(p.reference.smiles);
  for (const json& s : ref.at("example_smiles")) {
    p.reference.example_smiles.push_back(s.get<std::string>());
    p.reference.example_molecules.push_back(valid_graph(p.reference.example_smiles.back()));
  }
  p.stratum.k = obj.at("stratum").at("k").get<std::size_t>();
  p.stratum.success = obj.at("stratum").at("success").get<bool>();
  return p;
}

std::vector<RlPrompt> load_rl_prompts(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<RlPrompt> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      out.push_back(rl_from_json(line));
    } catch (const std::exception& e) {
      throw MalformedLine(line_no, e.what());
    }
  }
  return out;
}

}  // namespace molrl::dataset
