#include "latpilot/toeplitz.hpp"

#include <cmath>
#include <stdexcept>

namespace latpilot {

HermitianToeplitz::HermitianToeplitz(std::vector<std::complex<double>> gen)
    : gen_(std::move(gen)) {
  if (gen_.empty())
    throw std::invalid_argument("toeplitz: empty generating sequence");
  for (const auto& v : gen_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("toeplitz: non-finite generating value");
  // gen[0] must be real; tolerate quadrature roundoff in the imaginary part.
  if (std::abs(gen_[0].imag()) > 1e-12 * std::max(1.0, std::abs(gen_[0].real())))
    throw std::invalid_argument("toeplitz: gen[0] must be real");
  gen_[0] = std::complex<double>(gen_[0].real(), 0.0);
}

Eigen::MatrixXcd HermitianToeplitz::dense() const {
  const int n = dim();
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = (*this)(i, j);
  return a;
}

double HermitianToeplitz::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense(),
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool HermitianToeplitz::is_positive_semidefinite() const {
  return min_eigenvalue() >= -1e-10 * gen_[0].real();
}

} // namespace latpilot
