#include "mctrack/completion.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "mctrack/error.hpp"

namespace mct {
namespace {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw Error(ErrorKind::InvalidInput, std::string(what) + " has non-finite entries");
}

// A tall-skinny matrix (or the transpose of a wide one) goes through its small
// Gram matrix; everything else through a two-sided Jacobi SVD.
bool use_gram_route(const Matrix& m) {
  const auto small = std::min(m.rows(), m.cols());
  const auto large = std::max(m.rows(), m.cols());
  return small >= 1 && large >= 4 * small;
}

// Shrinks the singular values of a tall matrix via the eigen-decomposition of
// M^T M:  svt(M) = M * V diag(max(s - tau, 0) / s) V^T.
Matrix svt_tall(const Matrix& m, double tau) {
  Matrix gram(m.cols(), m.cols());
  gram.noalias() = m.transpose() * m;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  const Vector& lambda = eig.eigenvalues();
  Vector gain(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    const double sigma = std::sqrt(std::max(lambda(i), 0.0));
    gain(i) = sigma > tau ? (sigma - tau) / sigma : 0.0;
  }
  const Matrix& v = eig.eigenvectors();
  Matrix w(m.cols(), m.cols());
  w.noalias() = v * gain.asDiagonal() * v.transpose();
  Matrix out(m.rows(), m.cols());
  out.noalias() = m * w;
  return out;
}

double sigma_max(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (use_gram_route(m)) {
    Matrix gram = m.rows() >= m.cols() ? Matrix(m.transpose() * m) : Matrix(m * m.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(eig.eigenvalues().maxCoeff(), 0.0));
  }
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace

CompletionProblem::CompletionProblem(Matrix y, ObservedMask observed)
    : y_(std::move(y)), observed_(std::move(observed)) {
  if (observed_.rows() != y_.rows() || observed_.cols() != y_.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "observed mask shape differs from Y");
  }
}

CompletionProblem CompletionProblem::from_pairs(Matrix y, const std::vector<std::pair<int, int>>& observed) {
  ObservedMask mask = ObservedMask::Constant(y.rows(), y.cols(), false);
  for (const auto& [i, j] : observed) {
    if (i < 0 || j < 0 || i >= y.rows() || j >= y.cols()) {
      throw Error(ErrorKind::InvalidInput, "observed index out of range");
    }
    if (mask(i, j)) throw Error(ErrorKind::InvalidInput, "duplicate observed index");
    mask(i, j) = true;
  }
  return CompletionProblem(std::move(y), std::move(mask));
}

void SolverParams::validate() const {
  if (mu0 && !(*mu0 > 0.0)) throw Error(ErrorKind::InvalidInput, "mu0 must be positive");
  if (!(mu0_scale > 0.0)) throw Error(ErrorKind::InvalidInput, "mu0_scale must be positive");
  if (!(rho > 1.0)) throw Error(ErrorKind::InvalidInput, "rho must exceed 1");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidInput, "tol must be positive");
  if (max_iter < 1) throw Error(ErrorKind::InvalidInput, "max_iter must be at least 1");
}

double nuclear_norm(const Matrix& m) {
  require_finite(m, "matrix");
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

Matrix svt(const Matrix& m, double tau) {
  require_finite(m, "matrix");
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw Error(ErrorKind::InvalidInput, "tau must be finite and >= 0");
  if (tau == 0.0 || m.size() == 0) return m;
  if (use_gram_route(m)) {
    if (m.rows() >= m.cols()) return svt_tall(m, tau);
    return svt_tall(m.transpose(), tau).transpose();
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Vector shrunk = (svd.singularValues().array() - tau).max(0.0).matrix();
  return svd.matrixU() * shrunk.asDiagonal() * svd.matrixV().transpose();
}

CompletionResult complete(const CompletionProblem& problem, const SolverParams& params) {
  params.validate();
  const Matrix& y = problem.y();
  const ObservedMask& obs = problem.observed();
  require_finite(y, "Y");
  if (y.size() == 0 || problem.observed_count() == 0) {
    throw Error(ErrorKind::DegenerateProblem, "no observed entries");
  }
  for (Eigen::Index j = 0; j < obs.cols(); ++j) {
    if (!obs.col(j).any()) throw Error(ErrorKind::DegenerateProblem, "column without observed entries");
  }

  CompletionResult result;
  if (problem.observed_count() == y.size()) {
    result.x_star = y;
    result.e = Matrix::Zero(y.rows(), y.cols());
    result.converged = true;
    return result;
  }

  const Eigen::ArrayXXd observed = obs.cast<double>();
  const Eigen::ArrayXXd missing = 1.0 - observed;
  const Matrix d = (y.array() * observed).matrix();
  const double d_norm = d.norm();
  if (d_norm == 0.0) {
    result.x_star = Matrix::Zero(y.rows(), y.cols());
    result.e = (y.array() * missing).matrix();
    result.converged = true;
    return result;
  }

  double mu = params.mu0 ? *params.mu0 : params.mu0_scale / sigma_max(d);
  Matrix x(y.rows(), y.cols());
  Matrix e = Matrix::Zero(y.rows(), y.cols());
  Matrix multiplier = Matrix::Zero(y.rows(), y.cols());
  Matrix gap(y.rows(), y.cols());
  result.residual_history.reserve(static_cast<std::size_t>(params.max_iter));

  for (int k = 0; k < params.max_iter; ++k) {
    x = svt(d - e + multiplier / mu, 1.0 / mu);
    // The multiplier vanishes off the observed set after the first step, so
    // the slack is simply the unconstrained remainder there.
    e = ((d - x).array() * missing).matrix();
    gap = ((d - x).array() * observed).matrix();
    multiplier += mu * gap;
    mu *= params.rho;

    const double r = gap.norm();
    result.residual_history.push_back(r);
    result.iterations = k + 1;
    result.residual = r / d_norm;
    if (result.residual <= params.tol) {
      result.converged = true;
      break;
    }
  }

  result.x_star = std::move(x);
  result.e = ((y - result.x_star).array() * missing).matrix();
  return result;
}

}  // namespace mct
