#include "molrl/completion.hpp"

#include <array>
#include <deque>
#include <nlohmann/json.hpp>
#include <regex>
#include <string>

#include "molrl/chem/smiles.hpp"
#include "molrl/chem/valence.hpp"
#include "molrl/text.hpp"

namespace molrl::completion {

namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 5> kFieldKeys = {"molecule", "smiles", "SMILES", "answer", "output"};

std::optional<std::size_t> balanced_end(std::string_view s, std::size_t start, bool quote_aware) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = start; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (quote_aware && c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i;
    }
  }
  return std::nullopt;
}

std::optional<std::string> first_object(std::string_view s, bool quote_aware) {
  for (std::size_t start = s.find('{'); start != std::string_view::npos; start = s.find('{', start + 1)) {
    if (auto end = balanced_end(s, start, quote_aware)) return std::string(s.substr(start, *end - start + 1));
  }
  return std::nullopt;
}

std::optional<std::string> first_fenced_block(std::string_view s) {
  const auto open = s.find("```");
  if (open == std::string_view::npos) return std::nullopt;
  auto body = open + 3;
  const auto newline = s.find('\n', body);
  const auto close = s.find("```", body);
  if (close == std::string_view::npos) return std::nullopt;
  // A language tag such as ```json occupies the rest of the opening line.
  if (newline != std::string_view::npos && newline < close) body = newline + 1;
  return std::string(s.substr(body, close - body));
}

std::optional<std::string> string_field(const json& obj, std::string_view key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) return std::nullopt;
  const std::string value(text::trim(it->get_ref<const std::string&>()));
  if (value.empty()) return std::nullopt;
  return value;
}

// Fallback keys at the top level first, then nested objects breadth-first.
std::optional<std::string> search_keys(const json& root) {
  std::deque<const json*> queue{&root};
  while (!queue.empty()) {
    const json* node = queue.front();
    queue.pop_front();
    if (node->is_object()) {
      for (const std::string_view key : kFieldKeys) {
        if (auto v = string_field(*node, key)) return v;
      }
      for (const auto& [k, child] : node->items()) {
        if (child.is_structured()) queue.push_back(&child);
      }
    } else if (node->is_array()) {
      for (const auto& child : *node) {
        if (child.is_structured()) queue.push_back(&child);
      }
    }
  }
  return std::nullopt;
}

std::string unify_quotes(std::string_view s) {
  static constexpr std::array<std::string_view, 6> kCurly = {"“", "”", "‘", "’", "«", "»"};
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    bool replaced = false;
    for (const std::string_view q : kCurly) {
      if (s.substr(i, q.size()) == q) {
        out.push_back('"');
        i += q.size();
        replaced = true;
        break;
      }
    }
    if (replaced) continue;
    out.push_back(s[i] == '\'' || s[i] == '`' ? '"' : s[i]);
    ++i;
  }
  return out;
}

std::string trim_trailing_commas(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == ',') {
      std::size_t j = i + 1;
      while (j < s.size() && (s[j] == ' ' || s[j] == '\t' || s[j] == '\n' || s[j] == '\r')) ++j;
      if (j == s.size() || s[j] == '}' || s[j] == ']') continue;
    }
    out.push_back(s[i]);
  }
  return out;
}

// Drops closers without an opener and closes openers left at the end.
std::string balance_braces(std::string_view s) {
  std::string out;
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      out.push_back(c);
      if (c == '\\' && i + 1 < s.size()) {
        out.push_back(s[++i]);
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (depth == 0) continue;
      --depth;
    }
    out.push_back(c);
  }
  if (in_string) out.push_back('"');
  out.append(static_cast<std::size_t>(depth), '}');
  return out;
}

std::optional<std::string> scan_key_value(const std::string& s) {
  static const std::regex quoted(R"re("(molecule|smiles|SMILES|answer|output)"\s*:\s*"([^"]*)")re");
  static const std::regex bare(R"re((?:^|[\s{,"])(molecule|smiles|SMILES|answer|output)"?\s*:\s*"?([^"\s,}]+))re");
  for (const std::regex* re : {&quoted, &bare}) {
    for (auto it = std::sregex_iterator(s.begin(), s.end(), *re); it != std::sregex_iterator(); ++it) {
      const std::string value(text::trim((*it)[2].str()));
      if (!value.empty()) return value;
    }
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(ExtractionPath path) {
  switch (path) {
    case ExtractionPath::PrimaryJson:
      return "primary_json";
    case ExtractionPath::FallbackKey:
      return "fallback_key";
    case ExtractionPath::HeuristicRepair:
      return "heuristic_repair";
    case ExtractionPath::Failed:
      return "failed";
  }
  return "failed";
}

Split split_completion(std::string_view y, std::string_view delimiter) {
  if (delimiter.empty()) throw std::invalid_argument("empty reasoning delimiter");
  const auto pos = y.find(delimiter);
  if (pos == std::string_view::npos) return {"", std::string(y)};
  std::string_view reasoning = text::trim(y.substr(0, pos));
  if (text::starts_with(reasoning, kOpenMarker)) reasoning = text::trim(reasoning.substr(kOpenMarker.size()));
  return {std::string(reasoning), std::string(y.substr(pos + delimiter.size()))};
}

std::string extract_json_payload(std::string_view answer) {
  if (auto obj = first_object(answer, true)) return *obj;
  if (auto obj = first_object(answer, false)) return *obj;
  if (auto block = first_fenced_block(answer)) return *block;
  throw NoPayload("no JSON object or fenced block in answer");
}

MoleculeField parse_molecule_field(std::string_view payload) {
  const json strict = json::parse(payload, nullptr, false);
  if (!strict.is_discarded()) {
    if (strict.is_object()) {
      if (auto v = string_field(strict, "molecule")) return {*v, ExtractionPath::PrimaryJson};
    }
    if (auto v = search_keys(strict)) return {*v, ExtractionPath::FallbackKey};
  }
  const std::string repaired = balance_braces(trim_trailing_commas(unify_quotes(payload)));
  const json relaxed = json::parse(repaired, nullptr, false);
  if (!relaxed.is_discarded()) {
    if (auto v = search_keys(relaxed)) return {*v, ExtractionPath::HeuristicRepair};
  }
  if (auto v = scan_key_value(repaired)) return {*v, ExtractionPath::HeuristicRepair};
  throw NoMoleculeField("no molecule field in payload");
}

ParsedCompletion parse_completion(std::string_view y, std::string_view delimiter) {
  ParsedCompletion out;
  try {
    out.raw_length = text::codepoint_count(y);
    Split parts = split_completion(y, delimiter);
    out.reasoning = std::move(parts.reasoning);
    out.answer_segment = std::move(parts.answer);
    MoleculeField field;
    try {
      field = parse_molecule_field(extract_json_payload(out.answer_segment));
    } catch (const std::exception& e) {
      out.failure = e.what();
      return out;
    }
    out.extraction_path = field.path;
    out.extracted_smiles = field.smiles;
    chem::MolGraph graph = chem::parse_smiles(field.smiles);
    const chem::ValidationReport report = chem::validate_valence(graph);
    if (!report.valid) {
      out.failure = "valence check failed";
      return out;
    }
    out.molecule = std::move(graph);
  } catch (const std::exception& e) {
    out.failure = e.what();
  } catch (...) {
    out.failure = "unknown error";
  }
  return out;
}

}  // namespace molrl::completion
