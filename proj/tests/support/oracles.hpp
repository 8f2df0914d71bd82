#pragma once

// Independent reference implementations used only by tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "smbcs/correlations.hpp"
#include "smbcs/matrix.hpp"

namespace smbcs::testing {

inline ComplexMatrix random_complex_matrix(std::size_t rows, std::size_t cols,
                                           std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  ComplexMatrix a(rows, cols);
  for (auto& z : a.data()) z = Complex(normal(gen), normal(gen));
  return a;
}

// Laplace expansion along the first row.
inline Complex laplace_permanent(const ComplexMatrix& a) {
  const std::size_t n = a.rows();
  if (n == 1) return a(0, 0);
  Complex sum = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    ComplexMatrix minor(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r) {
      std::size_t cc = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == c) continue;
        minor(r - 1, cc++) = a(r, k);
      }
    }
    sum += a(0, c) * laplace_permanent(minor);
  }
  return sum;
}

// Permanent of a real nonnegative matrix by explicit permutation sum.
inline double real_permanent(const std::vector<std::vector<double>>& a) {
  const std::size_t n = a.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double sum = 0.0;
  do {
    double prod = 1.0;
    for (std::size_t i = 0; i < n; ++i) prod *= a[i][perm[i]];
    sum += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum;
}

inline double relative_error(Complex got, Complex want) {
  const double scale = std::max(std::abs(want), 1e-300);
  return std::abs(got - want) / scale;
}

// Pearson chi-squared statistic against equal expected counts.
inline double chi_squared_uniform(const std::vector<std::uint64_t>& counts) {
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0.0;
  for (auto c : counts) stat += (c - expected) * (c - expected) / expected;
  return stat;
}

// Upper critical value at significance alpha.
inline double chi_squared_critical(double degrees_of_freedom, double alpha) {
  boost::math::chi_squared dist(degrees_of_freedom);
  return boost::math::quantile(boost::math::complement(dist, alpha));
}

// Midpoint rule on [lo, hi].
template <typename F>
double integrate(F&& f, double lo, double hi, std::size_t steps) {
  const double h = (hi - lo) / static_cast<double>(steps);
  double sum = 0.0;
  for (std::size_t i = 0; i < steps; ++i) sum += f(lo + (i + 0.5) * h);
  return sum * h;
}

// |observed - expected| in units of the binomial standard error.
inline double binomial_z(std::uint64_t successes, std::uint64_t trials, double p) {
  const double n = static_cast<double>(trials);
  const double sigma = std::sqrt(p * (1.0 - p) / n);
  return std::abs(static_cast<double>(successes) / n - p) / sigma;
}

// Sum of P over all outcomes, enumerated as ordered (port, bin) tuples.
// Each multiset appears N!/prod(m_b!) times, so the ordered sum is reweighted.
inline double ordered_total(const Interferometer& u, const InputConfiguration& inputs,
                     ResolvedDomain domain, double bin_width) {
  const auto grid = make_detection_grid(inputs, domain, bin_width);
  const std::size_t n = inputs.size();
  const std::size_t modes = u.dimension() * grid.bin_count();
  ProbabilityOptions quiet;
  quiet.verify_resolution = false;
  std::vector<std::size_t> tuple(n, 0);
  double nfact = 1.0;
  for (std::size_t i = 2; i <= n; ++i) nfact *= i;
  double total = 0.0;
  for (;;) {
    DetectionOutcome out{domain, {}, {}, grid};
    for (auto k : tuple) {
      out.ports.push_back(k / grid.bin_count());
      out.bins.push_back(k % grid.bin_count());
    }
    total += outcome_probability(u, inputs, out, quiet) * bunching_divisor(out) / nfact;
    std::size_t pos = 0;
    while (pos < n && ++tuple[pos] == modes) tuple[pos++] = 0;
    if (pos == n) break;
  }
  return total;
}

}  // namespace smbcs::testing

#include <string>

#include "smbcs/errors.hpp"

namespace smbcs::testing {

// Collects library warnings for the lifetime of the object.
class WarningCapture {
 public:
  WarningCapture()
      : previous_(set_warning_handler(
            [this](std::string_view message) { messages.emplace_back(message); })) {}
  ~WarningCapture() { set_warning_handler(previous_); }
  WarningCapture(const WarningCapture&) = delete;
  WarningCapture& operator=(const WarningCapture&) = delete;

  std::vector<std::string> messages;

 private:
  WarningHandler previous_;
};

}  // namespace smbcs::testing
