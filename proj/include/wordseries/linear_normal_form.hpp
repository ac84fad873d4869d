#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "wordseries/word.hpp"

namespace wordseries {

struct LinearNormalForm {
  std::vector<double> frequencies;  // omega_l > 0, one per harmonic pair
  Eigen::MatrixXd transform;        // orthogonal; columns are the new basis
  Eigen::MatrixXd block_form;       // transform^T M transform
  std::size_t slow_dim = 0;         // size of the leading zero block
  double off_block = 0;             // largest entry outside the block pattern
};

// Orthogonal change of variables taking a skew-symmetric M to a zero block
// followed by 2x2 blocks [[0, -w], [w, 0]] with w > 0.
inline LinearNormalForm normalize_linear_part(const Eigen::MatrixXd& m, double tol = 1e-10) {
  if (m.rows() != m.cols()) throw Error("matrix must be square");
  const Eigen::Index D = m.rows();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m + m.transpose()).cwiseAbs().maxCoeff() > tol * scale) throw Error("matrix is not skew-symmetric");
  LinearNormalForm out;
  if (D == 0) return out;

  Eigen::RealSchur<Eigen::MatrixXd> schur(m);
  const Eigen::MatrixXd& T = schur.matrixT();
  const Eigen::MatrixXd& U = schur.matrixU();

  std::vector<Eigen::VectorXd> slow;
  std::vector<std::pair<double, std::pair<Eigen::VectorXd, Eigen::VectorXd>>> pairs;
  for (Eigen::Index i = 0; i < D;) {
    const bool block = i + 1 < D && std::abs(T(i + 1, i)) > tol * scale;
    if (!block) {
      slow.push_back(U.col(i));
      ++i;
      continue;
    }
    // 2x2 block of a normal matrix: off-diagonals are c = T(i+1,i), b = T(i,i+1), b = -c.
    Eigen::VectorXd u = U.col(i), v = U.col(i + 1);
    double w = T(i + 1, i);
    if (w < 0) {
      v = -v;
      w = -w;
    }
    pairs.push_back({w, {u, v}});
    i += 2;
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  out.transform.resize(D, D);
  Eigen::Index c = 0;
  for (const auto& s : slow) out.transform.col(c++) = s;
  out.slow_dim = slow.size();
  for (const auto& [w, uv] : pairs) {
    out.frequencies.push_back(w);
    out.transform.col(c++) = uv.first;
    out.transform.col(c++) = uv.second;
  }
  out.block_form = out.transform.transpose() * m * out.transform;

  Eigen::MatrixXd pattern = Eigen::MatrixXd::Zero(D, D);
  for (std::size_t l = 0; l < out.frequencies.size(); ++l) {
    const Eigen::Index j = Eigen::Index(out.slow_dim + 2 * l);
    pattern(j, j + 1) = -out.frequencies[l];
    pattern(j + 1, j) = out.frequencies[l];
  }
  out.off_block = (out.block_form - pattern).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace wordseries
