#pragma once

// Nuclear-norm matrix completion with a slack variable:
//
//   min ||X||_*  s.t.  Y = X + E,  P_obs(E) = 0
//
// solved by an inexact augmented Lagrange multiplier (IALM) iteration.

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace mct {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ObservedMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Y plus the set of observed entries. The mask is dense, so the set has no
/// duplicates by construction.
class CompletionProblem {
 public:
  CompletionProblem(Matrix y, ObservedMask observed);

  /// Builds the mask from explicit (row, col) pairs; duplicates and
  /// out-of-range pairs are rejected.
  static CompletionProblem from_pairs(Matrix y, const std::vector<std::pair<int, int>>& observed);

  const Matrix& y() const noexcept { return y_; }
  const ObservedMask& observed() const noexcept { return observed_; }
  Eigen::Index observed_count() const noexcept { return observed_.count(); }

 private:
  Matrix y_;
  ObservedMask observed_;
};

struct SolverParams {
  /// Initial penalty. Unset means mu0_scale / sigma_max(Y).
  std::optional<double> mu0;
  double mu0_scale = 1.25;
  double rho = 1.5;
  double tol = 1e-7;
  int max_iter = 100;

  void validate() const;
};

struct CompletionResult {
  Matrix x_star;
  Matrix e;
  int iterations = 0;
  /// ||Y - X - E||_F / ||Y||_F at exit.
  double residual = 0.0;
  bool converged = false;
  /// Absolute feasibility residual ||Y - X - E||_F after each iteration.
  std::vector<double> residual_history;
};

/// Sum of singular values.
double nuclear_norm(const Matrix& m);

/// Singular value soft-thresholding: U * max(S - tau, 0) * V^T.
Matrix svt(const Matrix& m, double tau);

CompletionResult complete(const CompletionProblem& problem, const SolverParams& params = {});

}  // namespace mct
