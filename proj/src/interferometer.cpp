#include "smbcs/interferometer.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "smbcs/errors.hpp"

namespace smbcs {

namespace {

lapack_complex_double* as_lapack(Complex* p) {
  return reinterpret_cast<lapack_complex_double*>(p);
}

// Column-major M x N Ginibre matrix, entries (x + iy)/sqrt2 drawn in row-major
// order of the logical matrix.
std::vector<Complex> ginibre_column_major(std::size_t rows, std::size_t cols,
                                          Philox& rng) {
  std::vector<Complex> a(rows * cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const auto [x, y] = standard_normal_pair(rng);
      a[j * rows + i] = Complex(x, y) * (1.0 / std::numbers::sqrt2);
    }
  return a;
}

ComplexMatrix corrected_q_factor(std::size_t rows, std::size_t cols, Philox& rng) {
  auto a = ginibre_column_major(rows, cols, rng);
  const auto m = static_cast<lapack_int>(rows);
  const auto n = static_cast<lapack_int>(cols);
  std::vector<Complex> tau(cols);
  if (LAPACKE_zgeqrf(LAPACK_COL_MAJOR, m, n, as_lapack(a.data()), m,
                     as_lapack(tau.data())) != 0) {
    throw NumericAssertion("haar: zgeqrf failed");
  }
  std::vector<Complex> phase(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    const Complex r = a[j * rows + j];
    phase[j] = std::abs(r) > 0.0 ? r / std::abs(r) : Complex(1.0);
  }
  if (LAPACKE_zungqr(LAPACK_COL_MAJOR, m, n, n, as_lapack(a.data()), m,
                     as_lapack(tau.data())) != 0) {
    throw NumericAssertion("haar: zungqr failed");
  }
  ComplexMatrix q(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) q(i, j) = a[j * rows + i] * phase[j];
  return q;
}

}  // namespace

Interferometer::Interferometer(ComplexMatrix matrix,
                               std::optional<Provenance> provenance, double tolerance)
    : matrix_(std::move(matrix)), provenance_(std::move(provenance)) {
  if (matrix_.rows() == 0 || !matrix_.is_square()) {
    throw DomainError("Interferometer: matrix must be square with M >= 1");
  }
  const double defect = unitarity_defect(matrix_);
  if (!(defect <= tolerance)) {
    throw DomainError("Interferometer: matrix is not unitary (defect " +
                      std::to_string(defect) + ")");
  }
}

double unitarity_defect(const ComplexMatrix& u) {
  const std::size_t n = u.cols();
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      Complex g{};
      for (std::size_t r = 0; r < u.rows(); ++r) g += std::conj(u(r, a)) * u(r, b);
      if (a == b) g -= 1.0;
      worst = std::max(worst, std::abs(g));
    }
  return worst;
}

ComplexMatrix haar_random_matrix(std::size_t dimension, Philox& rng) {
  if (dimension == 0) throw DomainError("haar_random: dimension must be >= 1");
  return corrected_q_factor(dimension, dimension, rng);
}

ComplexMatrix haar_random_isometry(std::size_t dimension, std::size_t columns,
                                   Philox& rng) {
  if (dimension == 0 || columns == 0 || columns > dimension) {
    throw DomainError("haar_random_isometry: need 1 <= columns <= dimension");
  }
  return corrected_q_factor(dimension, columns, rng);
}

Interferometer haar_random(std::size_t dimension, std::uint64_t seed) {
  auto rng = Philox::for_stream(seed, "haar", 0);
  return Interferometer(haar_random_matrix(dimension, rng),
                        Provenance{seed, std::string(kGeneratorName)});
}

ComplexMatrix submatrix(const Interferometer& interferometer, const PortSet& outputs,
                        const PortSet& inputs) {
  if (outputs.size() != inputs.size()) {
    throw DomainError("submatrix: |outputs| != |inputs|");
  }
  const std::size_t m = interferometer.dimension();
  auto in_range = [m](std::size_t p) { return p < m; };
  if (!std::all_of(outputs.begin(), outputs.end(), in_range) ||
      !std::all_of(inputs.begin(), inputs.end(), in_range)) {
    throw DomainError("submatrix: port index >= M");
  }
  ComplexMatrix out(outputs.size(), inputs.size());
  for (std::size_t i = 0; i < outputs.size(); ++i)
    for (std::size_t j = 0; j < inputs.size(); ++j)
      out(i, j) = interferometer(outputs[i], inputs[j]);
  return out;
}

std::vector<double> eigenphases(const ComplexMatrix& u) {
  if (!u.is_square() || u.rows() == 0) throw DomainError("eigenphases: need square");
  const auto n = static_cast<lapack_int>(u.rows());
  std::vector<Complex> a(u.data().begin(), u.data().end());
  std::vector<Complex> w(u.rows());
  // Row-major data read as column-major is U^T, which has the same spectrum.
  if (LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, as_lapack(a.data()), n,
                    as_lapack(w.data()), nullptr, 1, nullptr, 1) != 0) {
    throw NumericAssertion("eigenphases: zgeev failed");
  }
  std::vector<double> phases(w.size());
  std::transform(w.begin(), w.end(), phases.begin(), [](Complex z) {
    const double p = std::arg(z);
    return p >= std::numbers::pi ? p - 2.0 * std::numbers::pi : p;
  });
  return phases;
}

Interferometer balanced_coupler() {
  const double h = 1.0 / std::numbers::sqrt2;
  return Interferometer(ComplexMatrix(2, 2, {h, h, h, -h}));
}

}  // namespace smbcs
