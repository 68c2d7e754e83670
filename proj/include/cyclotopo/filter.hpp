#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace cyclotopo {

using Complex = std::complex<double>;

/// Transfer function in ascending powers of z^-1.
struct FilterSpec {
  enum class Kind { fir, rational };

  Kind kind = Kind::fir;
  std::vector<Complex> numerator{Complex(0.0)};
  std::vector<Complex> denominator{Complex(1.0)};

  static FilterSpec fir(std::vector<Complex> taps);
  static FilterSpec rational(std::vector<Complex> num, std::vector<Complex> den);
  static FilterSpec gain(Complex c) { return fir({c}); }

  /// h(e^{i omega}).
  Complex response(double omega) const;
  /// Leading tap h(0).
  Complex lag0() const { return numerator.front() / denominator.front(); }
  bool is_zero() const;
  /// Poles in the z-plane (roots of the denominator).
  std::vector<Complex> poles() const;
  bool is_stable() const;
  /// Impulse response until it stays below rel_tol * max|h|. Exact for FIR.
  std::vector<Complex> impulse_response(double rel_tol = 1e-14, std::size_t max_len = 1u << 22) const;
  /// Throws InputError on an empty numerator or a zero leading denominator
  /// coefficient.
  void validate() const;

  /// Product of two transfer functions.
  friend FilterSpec operator*(const FilterSpec& a, const FilterSpec& b);
};

std::vector<Complex> poly_multiply(const std::vector<Complex>& a, const std::vector<Complex>& b);
/// Roots of sum c_n x^n, via the companion matrix.
std::vector<Complex> poly_roots(const std::vector<Complex>& ascending);

/// Lifted polyphase block: entry (p, t) = sum_a h(aT + p - t) e^{-i omega a}.
Eigen::MatrixXcd lifted_transfer_block(const std::vector<Complex>& impulse, int period, double omega);
Eigen::MatrixXcd lifted_transfer_block(const FilterSpec& f, int period, double omega);

}  // namespace cyclotopo
