#pragma once

#include <cstddef>
#include <span>

#include "smbcs/matrix.hpp"

namespace smbcs {

/// Cost guards. These are configuration, not physics: raise them if you are
/// willing to wait.
struct PermanentLimits {
  std::size_t naive_max_order = 10;
  std::size_t fast_max_order = 30;
};

/// Matrix order from which perm_fast switches to compensated summation.
inline constexpr std::size_t kCompensatedSummationOrder = 20;

/// Definitional sum over all n! permutations. Reference oracle only.
Complex perm_naive(const ComplexMatrix& a, const PermanentLimits& limits = {});

/// Ryser's formula with Gray-code subset enumeration, O(2^n n).
Complex perm_fast(const ComplexMatrix& a, const PermanentLimits& limits = {});

/// Glynn's formula with Gray-code sign enumeration, O(2^(n-1) n).
Complex perm_glynn(const ComplexMatrix& a, const PermanentLimits& limits = {});

/// Base matrix with row i repeated row_mult[i] times and column j repeated
/// col_mult[j] times. Zero multiplicities drop the row/column.
ComplexMatrix expand_multiplicities(const ComplexMatrix& base,
                                    std::span<const std::size_t> row_mult,
                                    std::span<const std::size_t> col_mult);

/// Permanent of the expanded matrix (see expand_multiplicities).
Complex perm_with_multiplicities(const ComplexMatrix& base,
                                 std::span<const std::size_t> row_mult,
                                 std::span<const std::size_t> col_mult,
                                 const PermanentLimits& limits = {});

}  // namespace smbcs
