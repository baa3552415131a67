#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace latpilot {

/// Hermitian Toeplitz matrix stored by its generating sequence (first
/// column). A[i,j] = gen[i-j], with gen[-k] = conj(gen[k]); gen[0] is real.
class HermitianToeplitz {
 public:
  HermitianToeplitz(std::vector<std::complex<double>> gen);

  int dim() const { return static_cast<int>(gen_.size()); }
  const std::vector<std::complex<double>>& generating_sequence() const { return gen_; }

  std::complex<double> operator()(int i, int j) const {
    int k = i - j;
    return k >= 0 ? gen_[static_cast<size_t>(k)] : std::conj(gen_[static_cast<size_t>(-k)]);
  }

  Eigen::MatrixXcd dense() const;
  double trace() const { return gen_[0].real() * dim(); }

  /// Smallest eigenvalue of the dense matrix (O(dim^3); intended for
  /// moderate dimensions and validation).
  double min_eigenvalue() const;

  /// PSD up to the covariance tolerance eps = 1e-10 * gen[0].
  bool is_positive_semidefinite() const;

  /// Cleared when adaptive quadrature hit its node cap before the relative
  /// change dropped below tolerance; carried as metadata, not an error.
  bool quadrature_converged() const { return quadrature_converged_; }
  void set_quadrature_converged(bool ok) { quadrature_converged_ = ok; }

 private:
  std::vector<std::complex<double>> gen_;
  bool quadrature_converged_ = true;
};

} // namespace latpilot
