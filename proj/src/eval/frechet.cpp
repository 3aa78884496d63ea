#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include "molrl/evalharness.hpp"

namespace molrl::eval {

namespace {

using Matrix = DescriptorMatrix;
using Vector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

Matrix psd_sqrt(const Matrix& m) {
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  Vector roots = eig.eigenvalues();
  for (Eigen::Index i = 0; i < roots.size(); ++i) roots[i] = std::sqrt(std::max(roots[i], 0.0L));
  return eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().transpose();
}

Matrix covariance(const Matrix& rows, const Vector& mean) {
  const Matrix centered = rows.rowwise() - mean.transpose();
  Matrix cov = centered.transpose() * centered / static_cast<long double>(rows.rows() - 1);
  cov = (cov + cov.transpose()) / 2;
  cov.diagonal().array() += kCovarianceJitter;
  return cov;
}

}  // namespace

DescriptorMatrix descriptor_matrix(const std::vector<chem::MolGraph>& set) {
  DescriptorMatrix m(static_cast<Eigen::Index>(set.size()), static_cast<Eigen::Index>(chem::kDescriptorCount));
  for (std::size_t i = 0; i < set.size(); ++i) {
    const chem::DescriptorVector d = chem::descriptor_vector(set[i]);
    for (std::size_t j = 0; j < d.size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d[j];
    }
  }
  return m;
}

double frechet_distance(const DescriptorMatrix& a, const DescriptorMatrix& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("descriptor sets differ in dimension");
  const Eigen::Index need = a.cols() + 1;
  if (a.rows() < need || b.rows() < need) {
    throw SetTooSmall("each set needs at least " + std::to_string(need) + " members");
  }
  const Vector mu_a = a.colwise().mean().transpose();
  const Vector mu_b = b.colwise().mean().transpose();
  const Matrix cov_a = covariance(a, mu_a);
  const Matrix cov_b = covariance(b, mu_b);
  // tr((A^1/2 B A^1/2)^1/2) is the sum of singular values of A^1/2 B^1/2; this
  // avoids squaring the condition number of the covariances.
  const Matrix cross = psd_sqrt(cov_a) * psd_sqrt(cov_b);
  const Eigen::JacobiSVD<Matrix> svd(cross);
  const long double d2 =
      (mu_a - mu_b).squaredNorm() + cov_a.trace() + cov_b.trace() - 2 * svd.singularValues().sum();
  return static_cast<double>(std::sqrt(std::max(d2, 0.0L)));
}

double frechet_descriptor_distance(const std::vector<chem::MolGraph>& a, const std::vector<chem::MolGraph>& b) {
  return frechet_distance(descriptor_matrix(a), descriptor_matrix(b));
}

}  // namespace molrl::eval
