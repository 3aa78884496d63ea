#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "molrl/chem/smiles.hpp"
#include "molrl/chem/valence.hpp"
#include "molrl/dataset.hpp"
#include "molrl/text.hpp"

namespace molrl::dataset {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const json& require(const json& obj, const char* field, std::size_t line) {
  const auto it = obj.find(field);
  if (it == obj.end()) throw SchemaViolation(line, field, "missing");
  return *it;
}

std::string require_string(const json& obj, const char* field, std::size_t line) {
  const json& v = require(obj, field, line);
  if (!v.is_string()) throw SchemaViolation(line, field, "must be a string");
  return v.get<std::string>();
}

std::optional<std::string> optional_string(const json& obj, const char* field, std::size_t line) {
  const auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw SchemaViolation(line, field, "must be a string or null");
  return it->get<std::string>();
}

// Empty when the SMILES parses and validates, else the reason.
std::string chemistry_problem(const std::string& smiles) {
  try {
    const chem::ValidationReport report = chem::validate_valence(chem::parse_smiles(smiles));
    if (report.valid) return {};
    std::string reason = "valence violation";
    for (const auto& v : report.violations) {
      reason += " at atom " + std::to_string(v.atom) + " (valence " + std::to_string(v.observed) + ")";
    }
    return reason;
  } catch (const std::exception& e) {
    return e.what();
  }
}

}  // namespace

MalformedLine::MalformedLine(std::size_t line, const std::string& detail)
    : std::runtime_error("line " + std::to_string(line) + ": malformed JSON: " + detail), line_(line) {}

SchemaViolation::SchemaViolation(std::size_t line, std::string field, const std::string& detail)
    : std::runtime_error("line " + std::to_string(line) + ": field '" + field + "' " + detail),
      line_(line),
      field_(std::move(field)) {}

Stratum stratum_of(const DatasetRecord& r) { return {r.examples.size(), r.success}; }

std::string to_string(const Stratum& s) {
  return "(K=" + std::to_string(s.k) + ", q=" + (s.success ? "1" : "0") + ")";
}

LoadResult parse_records(std::string_view jsonl) {
  LoadResult out;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  for (const std::string& raw : text::split(jsonl, '\n')) {
    ++line_no;
    if (text::trim(raw).empty()) continue;
    json obj;
    try {
      obj = json::parse(raw);
    } catch (const json::parse_error& e) {
      throw MalformedLine(line_no, e.what());
    }
    if (!obj.is_object()) throw MalformedLine(line_no, "not a JSON object");

    DatasetRecord r;
    r.id = require_string(obj, "id", line_no);
    if (r.id.empty()) throw SchemaViolation(line_no, "id", "must not be empty");
    r.caption = require_string(obj, "caption", line_no);
    r.ground_truth_smiles = require_string(obj, "ground_truth_smiles", line_no);
    const json& examples = require(obj, "examples", line_no);
    if (!examples.is_array()) throw SchemaViolation(line_no, "examples", "must be an array");
    for (const json& e : examples) {
      if (!e.is_object()) throw SchemaViolation(line_no, "examples", "entries must be objects");
      r.examples.push_back({require_string(e, "caption", line_no), require_string(e, "smiles", line_no)});
    }
    r.cot = optional_string(obj, "cot", line_no);
    r.answer = optional_string(obj, "answer", line_no);
    const json& success = require(obj, "success", line_no);
    if (!success.is_boolean()) throw SchemaViolation(line_no, "success", "must be a boolean");
    r.success = success.get<bool>();

    std::string reason;
    if (!seen.insert(r.id).second) {
      reason = "duplicate id";
    } else if (auto problem = chemistry_problem(r.ground_truth_smiles); !problem.empty()) {
      reason = "ground_truth_smiles: " + problem;
    } else if (r.success && (!r.cot || text::trim(*r.cot).empty())) {
      reason = "success without reasoning";
    } else {
      for (std::size_t i = 0; i < r.examples.size() && reason.empty(); ++i) {
        if (auto problem = chemistry_problem(r.examples[i].smiles); !problem.empty()) {
          reason = "examples[" + std::to_string(i) + "].smiles: " + problem;
        }
      }
    }
    if (reason.empty()) {
      out.records.push_back(std::move(r));
    } else {
      out.rejects.push_back({r.id, reason});
    }
  }
  return out;
}

LoadResult load_records(const std::filesystem::path& path) { return parse_records(read_file(path)); }

std::string record_to_json(const DatasetRecord& r) {
  ordered_json obj;
  obj["id"] = r.id;
  obj["caption"] = r.caption;
  obj["ground_truth_smiles"] = r.ground_truth_smiles;
  obj["examples"] = ordered_json::array();
  for (const auto& e : r.examples) obj["examples"].push_back({{"caption", e.caption}, {"smiles", e.smiles}});
  if (r.cot) obj["cot"] = *r.cot;
  if (r.answer) obj["answer"] = *r.answer;
  obj["success"] = r.success;
  return obj.dump();
}

std::string records_to_jsonl(const std::vector<DatasetRecord>& records) {
  std::string out;
  for (const auto& r : records) out += record_to_json(r) + "\n";
  return out;
}

}  // namespace molrl::dataset
