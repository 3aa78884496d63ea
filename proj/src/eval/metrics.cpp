#include <iomanip>
#include <nlohmann/json.hpp>
#include <sstream>

#include "molrl/chem/canonical.hpp"
#include "molrl/chem/smiles.hpp"
#include "molrl/chem/valence.hpp"
#include "molrl/completion.hpp"
#include "molrl/evalharness.hpp"
#include "molrl/fingerprints.hpp"

namespace molrl::eval {

namespace {

struct Reference {
  chem::MolGraph graph;
  std::string canonical;
  fp::BitVector keyset, path, circular;
};

Reference reference_view(const chem::MolGraph& g) {
  const chem::NormalizedGraph ng = chem::normalize(g);
  return {g, chem::canonical_labeling(ng).text, fp::keyset_fp(ng), fp::path_fp(ng), fp::circular_fp(ng)};
}

nlohmann::ordered_json detail_json(const RecordDetail& d) {
  nlohmann::ordered_json j;
  j["index"] = d.index;
  j["extraction_path"] = d.extraction_path;
  j["extracted_smiles"] = d.extracted_smiles ? nlohmann::ordered_json(*d.extracted_smiles) : nlohmann::ordered_json(nullptr);
  j["valid"] = d.valid;
  j["exact"] = d.exact;
  j["sim_keyset"] = d.sim_keyset;
  j["sim_path"] = d.sim_path;
  j["sim_circular"] = d.sim_circular;
  j["levenshtein"] = d.levenshtein;
  j["failure"] = d.failure;
  return j;
}

}  // namespace

MetricsReport evaluate_set(const std::vector<std::string>& predictions, const std::vector<std::string>& references) {
  if (predictions.size() != references.size()) {
    throw LengthMismatch(std::to_string(predictions.size()) + " predictions for " +
                         std::to_string(references.size()) + " references");
  }
  MetricsReport report;
  report.n_total = predictions.size();
  std::vector<chem::MolGraph> predicted_set;
  std::vector<chem::MolGraph> reference_set;
  std::size_t exact = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    chem::MolGraph ref_graph = chem::parse_smiles(references[i]);
    if (!chem::validate_valence(ref_graph).valid) {
      throw std::invalid_argument("reference " + std::to_string(i) + " fails valence validation");
    }
    const Reference ref = reference_view(ref_graph);
    reference_set.push_back(std::move(ref_graph));

    const completion::ParsedCompletion p = completion::parse_completion(predictions[i]);
    RecordDetail d;
    d.index = i;
    d.extraction_path = std::string(completion::to_string(p.extraction_path));
    d.extracted_smiles = p.extracted_smiles;
    d.parsed = p.extracted_smiles.has_value();
    d.failure = p.failure;
    if (p.molecule) {
      const Reference mine = reference_view(*p.molecule);
      d.valid = true;
      d.exact = mine.canonical == ref.canonical;
      d.sim_keyset = fp::tanimoto(mine.keyset, ref.keyset);
      d.sim_path = fp::tanimoto(mine.path, ref.path);
      d.sim_circular = fp::tanimoto(mine.circular, ref.circular);
      d.levenshtein = fp::levenshtein_ratio(mine.canonical, ref.canonical);
      predicted_set.push_back(*p.molecule);
    }
    report.n_parsed += d.parsed ? 1 : 0;
    report.n_valid += d.valid ? 1 : 0;
    exact += d.exact ? 1 : 0;
    report.mean_sim_keyset += d.sim_keyset;
    report.mean_sim_path += d.sim_path;
    report.mean_sim_circular += d.sim_circular;
    report.mean_levenshtein += d.levenshtein;
    report.records.push_back(std::move(d));
  }
  if (report.n_total > 0) {
    const auto n = static_cast<double>(report.n_total);
    report.validity = static_cast<double>(report.n_valid) / n;
    report.exact_match = static_cast<double>(exact) / n;
    report.mean_sim_keyset /= n;
    report.mean_sim_path /= n;
    report.mean_sim_circular /= n;
    report.mean_levenshtein /= n;
  }
  const std::size_t need = chem::kDescriptorCount + 1;
  if (predicted_set.size() >= need && reference_set.size() >= need) {
    report.frechet_descriptor = frechet_descriptor_distance(predicted_set, reference_set);
  }
  return report;
}

std::string report_to_json(const MetricsReport& r, int indent) {
  nlohmann::ordered_json j;
  j["n_total"] = r.n_total;
  j["n_parsed"] = r.n_parsed;
  j["n_valid"] = r.n_valid;
  j["validity"] = r.validity;
  j["exact_match"] = r.exact_match;
  j["mean_sim_keyset"] = r.mean_sim_keyset;
  j["mean_sim_path"] = r.mean_sim_path;
  j["mean_sim_circular"] = r.mean_sim_circular;
  j["mean_levenshtein"] = r.mean_levenshtein;
  j["frechet_descriptor"] = r.frechet_descriptor ? nlohmann::ordered_json(*r.frechet_descriptor) : nlohmann::ordered_json(nullptr);
  auto& records = j["records"] = nlohmann::ordered_json::array();
  for (const auto& d : r.records) records.push_back(detail_json(d));
  return j.dump(indent);
}

std::string report_to_table(const MetricsReport& r) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  out << "records            " << r.n_total << "\n";
  out << "parsed             " << r.n_parsed << "\n";
  out << "validity           " << r.validity << "\n";
  out << "exact_match        " << r.exact_match << "\n";
  out << "mean_sim_keyset    " << r.mean_sim_keyset << "\n";
  out << "mean_sim_path      " << r.mean_sim_path << "\n";
  out << "mean_sim_circular  " << r.mean_sim_circular << "\n";
  out << "mean_levenshtein   " << r.mean_levenshtein << "\n";
  out << "frechet_descriptor ";
  if (r.frechet_descriptor) {
    out << *r.frechet_descriptor << "\n";
  } else {
    out << "n/a (fewer than " << chem::kDescriptorCount + 1 << " valid molecules)\n";
  }
  return out.str();
}

std::string details_to_jsonl(const MetricsReport& r) {
  std::string out;
  for (const auto& d : r.records) out += detail_json(d).dump() + "\n";
  return out;
}

}  // namespace molrl::eval
