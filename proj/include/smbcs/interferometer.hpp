#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smbcs/matrix.hpp"
#include "smbcs/rng.hpp"

namespace smbcs {

/// Port indices into an interferometer. Repetitions encode multi-photon
/// occupancy of one port.
using PortSet = std::vector<std::size_t>;

/// Where a matrix came from; written into every unitary file.
struct Provenance {
  std::uint64_t seed = 0;
  std::string generator;
};

inline constexpr double kUnitarityTolerance = 1e-12;

/// An M x M unitary transfer matrix U_{ds} (row = output d, column = input s).
class Interferometer {
 public:
  /// Validates unitarity: max |U^dagger U - I| <= tolerance.
  explicit Interferometer(ComplexMatrix matrix,
                          std::optional<Provenance> provenance = std::nullopt,
                          double tolerance = kUnitarityTolerance);

  std::size_t dimension() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }
  Complex operator()(std::size_t output, std::size_t input) const {
    return matrix_(output, input);
  }
  const std::optional<Provenance>& provenance() const { return provenance_; }

 private:
  ComplexMatrix matrix_;
  std::optional<Provenance> provenance_;
};

/// max_{ij} |(U^dagger U - I)_{ij}|.
double unitarity_defect(const ComplexMatrix& u);

/// Haar-random M x M unitary from stream ("haar", 0) of `seed`.
Interferometer haar_random(std::size_t dimension, std::uint64_t seed);

/// Haar-random unitary drawn from an existing stream: QR of a complex
/// Ginibre matrix with the diag(R) phase correction.
ComplexMatrix haar_random_matrix(std::size_t dimension, Philox& rng);

/// First `columns` columns of a Haar-random M x M unitary, generated directly
/// as a QR-corrected M x columns Ginibre matrix (same distribution, O(M N^2)).
ComplexMatrix haar_random_isometry(std::size_t dimension, std::size_t columns,
                                   Philox& rng);

/// |outputs| x |inputs| matrix with entry (i, j) = U(outputs[i], inputs[j]).
ComplexMatrix submatrix(const Interferometer& interferometer, const PortSet& outputs,
                        const PortSet& inputs);

/// Eigenphases arg(lambda) in [-pi, pi) of a square matrix.
std::vector<double> eigenphases(const ComplexMatrix& u);

/// Symmetric 50:50 coupler (1/sqrt2) [[1, 1], [1, -1]].
Interferometer balanced_coupler();

}  // namespace smbcs
