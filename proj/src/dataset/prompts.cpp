#include <nlohmann/json.hpp>

#include "molrl/completion.hpp"
#include "molrl/dataset.hpp"
#include "molrl/text.hpp"

namespace molrl::dataset {

namespace {

std::string render_example(const std::string& format, std::size_t index, const ExamplePair& e) {
  std::string out;
  for (std::size_t i = 0; i < format.size();) {
    if (format.compare(i, 7, "{index}") == 0) {
      out += std::to_string(index);
      i += 7;
    } else if (format.compare(i, 9, "{caption}") == 0) {
      out += e.caption;
      i += 9;
    } else if (format.compare(i, 8, "{smiles}") == 0) {
      out += e.smiles;
      i += 8;
    } else {
      out.push_back(format[i++]);
    }
  }
  return out;
}

bool allowed_code_point(char32_t c) {
  if (c == '\t' || c == '\n' || c == '\r') return true;
  if (c >= 0x20 && c <= 0x7E) return true;
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return true;  // Greek capitals
  if (c >= 0x3B1 && c <= 0x3C9) return true;                // Greek small
  if (c >= 0x2080 && c <= 0x208E) return true;              // subscripts
  if (c >= 0x2074 && c <= 0x207E) return true;              // superscripts
  if (c >= 0x2190 && c <= 0x2194) return true;              // arrows
  switch (c) {
    case 0x3D1:   // theta symbol
    case 0x3D5:   // phi symbol
    case 0x3F5:   // lunate epsilon
    case 0xB0:    // degree
    case 0xB1:    // plus-minus
    case 0xB2:    // superscript two
    case 0xB3:    // superscript three
    case 0xB5:    // micro
    case 0xB7:    // middle dot
    case 0xB9:    // superscript one
    case 0xC5:    // A with ring (angstrom)
    case 0xD7:    // multiplication
    case 0x2070:  // superscript zero
    case 0x2013:  // en dash
    case 0x2014:  // em dash
    case 0x2018:
    case 0x2019:
    case 0x201C:
    case 0x201D:
    case 0x2026:  // ellipsis
    case 0x2032:  // prime
    case 0x2033:  // double prime
    case 0x212B:  // angstrom sign
    case 0x21CC:  // equilibrium arrow
    case 0x2212:  // minus sign
      return true;
    default:
      return false;
  }
}

}  // namespace

PromptTemplate PromptTemplate::from_file(const KeyValueFile& kv) {
  kv.require_known_keys({"format", "version", "task_description", "example_header", "example_format", "separator"});
  PromptTemplate t;
  t.task_description = kv.get_or("task_description", t.task_description);
  t.example_header = kv.get_or("example_header", t.example_header);
  t.example_format = kv.get_or("example_format", t.example_format);
  t.separator = kv.get_or("separator", t.separator);
  return t;
}

Prompt assemble_prompt(const DatasetRecord& r, const PromptTemplate& tmpl) {
  Prompt p;
  p.system = tmpl.task_description;
  if (!r.examples.empty()) {
    p.system += tmpl.separator + tmpl.example_header;
    for (std::size_t i = 0; i < r.examples.size(); ++i) {
      p.system += tmpl.separator + render_example(tmpl.example_format, i + 1, r.examples[i]);
    }
  }
  p.user = r.caption;
  return p;
}

bool is_english(std::string_view s) {
  const auto cps = text::decode_utf8(s);
  if (!cps) return false;
  for (const char32_t c : *cps) {
    if (!allowed_code_point(c)) return false;
  }
  return true;
}

std::string format_assistant(std::string_view reasoning, std::string_view smiles) {
  return std::string(completion::kOpenMarker) + "\n" + std::string(reasoning) + "\n" +
         std::string(completion::kDefaultDelimiter) + "\n\n{\"molecule\": " + nlohmann::json(smiles).dump() + "}";
}

std::vector<SftTriple> export_sft(const std::vector<DatasetRecord>& records, const PromptTemplate& tmpl,
                                  const SftOptions& opts) {
  if (!(opts.w_short > 0 && opts.w_short <= 1)) throw std::invalid_argument("w_short must lie in (0, 1]");
  std::vector<SftTriple> out;
  for (const auto& r : records) {
    if (!r.success || !r.cot || !is_english(*r.cot)) continue;
    if (r.cot->find(completion::kDefaultDelimiter) != std::string::npos) continue;
    const Prompt p = assemble_prompt(r, tmpl);
    SftTriple t;
    t.system = p.system;
    t.user = p.user;
    t.assistant = format_assistant(text::trim(*r.cot), r.ground_truth_smiles);
    t.weight = text::codepoint_count(*r.cot) < opts.gamma ? opts.w_short : 1.0;
    t.max_len = opts.max_len;
    out.push_back(std::move(t));
  }
  return out;
}

std::string sft_to_json(const SftTriple& t) {
  nlohmann::ordered_json obj;
  obj["system"] = t.system;
  obj["user"] = t.user;
  obj["assistant"] = t.assistant;
  obj["weight"] = t.weight;
  obj["max_len"] = t.max_len;
  return obj.dump();
}

}  // namespace molrl::dataset
