#include "molrl/chem/canonical.hpp"
#include "molrl/chem/smiles.hpp"
#include "molrl/completion.hpp"
#include "molrl/dataset.hpp"
#include "molrl/policy.hpp"
#include "molrl/random.hpp"
#include "molrl/text.hpp"

namespace molrl::dataset {

BootstrapReport bootstrap(std::vector<DatasetRecord>& records, policy::Policy& policy, const PromptTemplate& tmpl,
                          const BootstrapOptions& opts) {
  BootstrapReport report;
  for (std::size_t i = 0; i < records.size(); ++i) {
    DatasetRecord& r = records[i];
    if (r.success) continue;
    ++report.considered;
    const Prompt prompt = assemble_prompt(r, tmpl);
    const chem::CanonicalId target = chem::canonical_form(chem::parse_smiles(r.ground_truth_smiles));
    for (std::size_t a = 0; a < opts.attempts_per_record; ++a) {
      policy::GenerationRequest req{prompt.system, prompt.user, opts.temperature, opts.max_new_chars,
                                    mix_seed(opts.seed, i * opts.attempts_per_record + a)};
      const policy::Completion c = policy.complete(req);
      ++report.attempts;
      const completion::ParsedCompletion p = completion::parse_completion(c.text);
      std::string reason;
      if (p.extraction_path == completion::ExtractionPath::Failed) {
        reason = "no_molecule_field";
      } else if (!p.molecule) {
        reason = "invalid_molecule";
      } else if (chem::canonical_form(*p.molecule) != target) {
        reason = "wrong_molecule";
      } else if (p.reasoning.empty()) {
        reason = "empty_reasoning";
      } else if (!is_english(p.reasoning)) {
        reason = "non_english_reasoning";
      }
      if (!reason.empty()) {
        ++report.failure_reasons[reason];
        continue;
      }
      r.cot = p.reasoning;
      r.answer = std::string(text::trim(p.answer_segment));
      r.success = true;
      ++report.flipped;
      report.flipped_ids.push_back(r.id);
      break;
    }
  }
  return report;
}

}  // namespace molrl::dataset
