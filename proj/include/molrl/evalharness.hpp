#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "molrl/chem/descriptors.hpp"
#include "molrl/chem/molgraph.hpp"

namespace molrl::eval {

class LengthMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SetTooSmall : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RecordDetail {
  std::size_t index = 0;
  std::string extraction_path;
  std::optional<std::string> extracted_smiles;
  bool parsed = false;  // a SMILES string was extracted
  bool valid = false;
  bool exact = false;
  double sim_keyset = 0;
  double sim_path = 0;
  double sim_circular = 0;
  double levenshtein = 0;
  std::string failure;
};

struct MetricsReport {
  std::size_t n_total = 0;
  std::size_t n_parsed = 0;
  std::size_t n_valid = 0;
  double validity = 0;
  double exact_match = 0;
  double mean_sim_keyset = 0;
  double mean_sim_path = 0;
  double mean_sim_circular = 0;
  double mean_levenshtein = 0;
  // Absent when either side has fewer than kDescriptorCount + 1 valid molecules.
  std::optional<double> frechet_descriptor;
  std::vector<RecordDetail> records;
};

/// Each prediction is a raw completion; each reference a SMILES string.
/// Similarities of records without a valid molecule count as 0 and every
/// mean divides by n_total. Throws LengthMismatch, and
/// std::invalid_argument when a reference does not validate.
MetricsReport evaluate_set(const std::vector<std::string>& predictions, const std::vector<std::string>& references);

using DescriptorMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

DescriptorMatrix descriptor_matrix(const std::vector<chem::MolGraph>& set);

inline constexpr long double kCovarianceJitter = 1e-6L;

/// Frechet distance between Gaussians fitted to the rows of `a` and `b`
/// (sample covariance plus kCovarianceJitter on the diagonal):
///   d^2 = |mu_a - mu_b|^2 + tr(S_a + S_b - 2 (S_a^1/2 S_b S_a^1/2)^1/2)
/// Covariance square roots use a symmetric eigendecomposition with negative
/// eigenvalues clamped to 0; the cross term is the sum of singular values of
/// S_a^1/2 S_b^1/2. Returns sqrt(max(d^2, 0)). Each set needs at
/// least columns + 1 rows, else SetTooSmall.
double frechet_distance(const DescriptorMatrix& a, const DescriptorMatrix& b);
double frechet_descriptor_distance(const std::vector<chem::MolGraph>& a, const std::vector<chem::MolGraph>& b);

std::string report_to_json(const MetricsReport& report, int indent = 2);
std::string report_to_table(const MetricsReport& report);
std::string details_to_jsonl(const MetricsReport& report);

}  // namespace molrl::eval
