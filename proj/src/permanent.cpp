#include "smbcs/permanent.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "smbcs/errors.hpp"

namespace smbcs {

namespace {

void require_square_finite(const ComplexMatrix& a, const char* op) {
  if (a.rows() == 0 || !a.is_square()) {
    throw DomainError(std::string(op) + ": need a square matrix of order >= 1");
  }
  for (const Complex& z : a.data()) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw DomainError(std::string(op) + ": non-finite matrix entry");
    }
  }
}

void require_order(std::size_t n, std::size_t limit, const char* op,
                   const char* advice) {
  if (n > limit) {
    throw GuardExceeded(std::string(op) + ": order " + std::to_string(n) +
                        " exceeds the configured limit " + std::to_string(limit) +
                        advice);
  }
}

// Neumaier-compensated complex sum; plain summation when disabled.
class Accumulator {
 public:
  explicit Accumulator(bool compensated) : compensated_(compensated) {}

  void add(Complex x) {
    if (!compensated_) {
      sum_ += x;
      return;
    }
    add_part(sum_re_, comp_re_, x.real());
    add_part(sum_im_, comp_im_, x.imag());
  }

  Complex value() const {
    return compensated_ ? Complex(sum_re_ + comp_re_, sum_im_ + comp_im_) : sum_;
  }

 private:
  static void add_part(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }

  bool compensated_;
  Complex sum_{};
  double sum_re_ = 0.0, comp_re_ = 0.0, sum_im_ = 0.0, comp_im_ = 0.0;
};

}  // namespace

Complex perm_naive(const ComplexMatrix& a, const PermanentLimits& limits) {
  require_square_finite(a, "perm_naive");
  const std::size_t n = a.rows();
  require_order(n, limits.naive_max_order, "perm_naive", "; use perm_fast instead");
  std::vector<std::size_t> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  Complex total{};
  do {
    Complex term = 1.0;
    for (std::size_t i = 0; i < n; ++i) term *= a(i, sigma[i]);
    total += term;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return total;
}

Complex perm_fast(const ComplexMatrix& a, const PermanentLimits& limits) {
  require_square_finite(a, "perm_fast");
  const std::size_t n = a.rows();
  require_order(n, limits.fast_max_order, "perm_fast", "");
  if (n == 1) return a(0, 0);

  // perm A = (-1)^n sum_{S} (-1)^{|S|} prod_i sum_{j in S} a_ij, S walked in
  // Gray-code order so each step adds or removes a single column.
  std::vector<Complex> row_sums(n);
  std::uint64_t gray = 0;
  int subset_size = 0;
  Accumulator total(n >= kCompensatedSummationOrder);
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < subsets; ++k) {
    const int j = std::countr_zero(k);
    const std::uint64_t bit = std::uint64_t{1} << j;
    gray ^= bit;
    if (gray & bit) {
      for (std::size_t i = 0; i < n; ++i) row_sums[i] += a(i, j);
      ++subset_size;
    } else {
      for (std::size_t i = 0; i < n; ++i) row_sums[i] -= a(i, j);
      --subset_size;
    }
    Complex prod = row_sums[0];
    for (std::size_t i = 1; i < n; ++i) prod *= row_sums[i];
    total.add((subset_size & 1) ? -prod : prod);
  }
  const Complex result = total.value();
  return (n & 1) ? -result : result;
}

Complex perm_glynn(const ComplexMatrix& a, const PermanentLimits& limits) {
  require_square_finite(a, "perm_glynn");
  const std::size_t n = a.rows();
  require_order(n, limits.fast_max_order, "perm_glynn", "");
  if (n == 1) return a(0, 0);

  // perm A = 2^{1-n} sum_{delta, delta_0 = +1} (prod_k delta_k)
  //                   prod_j sum_i delta_i a_ij
  std::vector<Complex> col_sums(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) col_sums[j] += a(i, j);
  std::vector<int> delta(n, 1);
  int sign = 1;
  Accumulator total(n >= kCompensatedSummationOrder);
  auto product = [&] {
    Complex p = col_sums[0];
    for (std::size_t j = 1; j < n; ++j) p *= col_sums[j];
    return p;
  };
  total.add(product());
  const std::uint64_t steps = std::uint64_t{1} << (n - 1);
  for (std::uint64_t k = 1; k < steps; ++k) {
    const std::size_t i = static_cast<std::size_t>(std::countr_zero(k)) + 1;
    const double factor = -2.0 * delta[i];
    for (std::size_t j = 0; j < n; ++j) col_sums[j] += factor * a(i, j);
    delta[i] = -delta[i];
    sign = -sign;
    const Complex p = product();
    total.add(sign > 0 ? p : -p);
  }
  return std::ldexp(1.0, -static_cast<int>(n - 1)) * total.value();
}

ComplexMatrix expand_multiplicities(const ComplexMatrix& base,
                                    std::span<const std::size_t> row_mult,
                                    std::span<const std::size_t> col_mult) {
  if (row_mult.size() != base.rows() || col_mult.size() != base.cols()) {
    throw DomainError("expand_multiplicities: multiplicity lengths must match shape");
  }
  std::vector<std::size_t> rows, cols;
  for (std::size_t i = 0; i < row_mult.size(); ++i) rows.insert(rows.end(), row_mult[i], i);
  for (std::size_t j = 0; j < col_mult.size(); ++j) cols.insert(cols.end(), col_mult[j], j);
  if (rows.size() != cols.size()) {
    throw DomainError("expand_multiplicities: row and column multiplicity sums differ (" +
                      std::to_string(rows.size()) + " vs " +
                      std::to_string(cols.size()) + ")");
  }
  ComplexMatrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = base(rows[i], cols[j]);
  return out;
}

Complex perm_with_multiplicities(const ComplexMatrix& base,
                                 std::span<const std::size_t> row_mult,
                                 std::span<const std::size_t> col_mult,
                                 const PermanentLimits& limits) {
  const auto row_total = std::accumulate(row_mult.begin(), row_mult.end(), std::size_t{0});
  const auto col_total = std::accumulate(col_mult.begin(), col_mult.end(), std::size_t{0});
  if (row_total != col_total) {
    throw DomainError("perm_with_multiplicities: multiplicity sums differ");
  }
  require_order(row_total, limits.fast_max_order, "perm_with_multiplicities", "");
  return perm_fast(expand_multiplicities(base, row_mult, col_mult), limits);
}

}  // namespace smbcs
