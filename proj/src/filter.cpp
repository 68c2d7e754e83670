#include "cyclotopo/filter.hpp"

#include <algorithm>
#include <cmath>

#include "cyclotopo/error.hpp"

namespace cyclotopo {

namespace {

Complex poly_eval_zinv(const std::vector<Complex>& c, Complex zinv) {
  Complex acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * zinv + *it;
  return acc;
}

std::vector<Complex> trim_trailing(std::vector<Complex> c) {
  while (c.size() > 1 && c.back() == Complex(0.0)) c.pop_back();
  return c;
}

}  // namespace

FilterSpec FilterSpec::fir(std::vector<Complex> taps) {
  FilterSpec f;
  f.kind = Kind::fir;
  f.numerator = taps.empty() ? std::vector<Complex>{0.0} : std::move(taps);
  f.denominator = {1.0};
  return f;
}

FilterSpec FilterSpec::rational(std::vector<Complex> num, std::vector<Complex> den) {
  FilterSpec f;
  f.numerator = num.empty() ? std::vector<Complex>{0.0} : std::move(num);
  f.denominator = trim_trailing(std::move(den));
  f.kind = (f.denominator.size() == 1) ? Kind::fir : Kind::rational;
  if (f.kind == Kind::fir && !f.denominator.empty() && f.denominator.front() != Complex(0.0)) {
    for (auto& c : f.numerator) c /= f.denominator.front();
    f.denominator = {1.0};
  }
  return f;
}

void FilterSpec::validate() const {
  if (numerator.empty()) throw InputError("filter numerator is empty");
  if (denominator.empty() || denominator.front() == Complex(0.0))
    throw InputError("filter denominator leading coefficient is zero");
  for (const auto& c : numerator)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw InputError("non-finite filter coefficient");
  for (const auto& c : denominator)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw InputError("non-finite filter coefficient");
}

Complex FilterSpec::response(double omega) const {
  Complex zinv = std::polar(1.0, -omega);
  return poly_eval_zinv(numerator, zinv) / poly_eval_zinv(denominator, zinv);
}

bool FilterSpec::is_zero() const {
  return std::all_of(numerator.begin(), numerator.end(), [](Complex c) { return c == Complex(0.0); });
}

std::vector<Complex> poly_multiply(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<Complex> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<Complex> poly_roots(const std::vector<Complex>& ascending) {
  std::vector<Complex> c = trim_trailing(ascending);
  std::size_t deg = c.size() - 1;
  if (deg == 0) return {};
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
  for (std::size_t r = 1; r < deg; ++r) companion(r, r - 1) = 1.0;
  for (std::size_t r = 0; r < deg; ++r) companion(r, deg - 1) = -c[r] / c[deg];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  std::vector<Complex> roots(deg);
  for (std::size_t r = 0; r < deg; ++r) roots[r] = solver.eigenvalues()(r);
  return roots;
}

std::vector<Complex> FilterSpec::poles() const {
  // z^d * A(z^-1) = a_0 z^d + ... + a_d, so reverse to ascending powers of z
  std::vector<Complex> rev(denominator.rbegin(), denominator.rend());
  return poly_roots(rev);
}

bool FilterSpec::is_stable() const {
  if (kind == Kind::fir || denominator.size() <= 1) return true;
  for (Complex p : poles())
    if (std::abs(p) >= 1.0 - 1e-9) return false;
  return true;
}

std::vector<Complex> FilterSpec::impulse_response(double rel_tol, std::size_t max_len) const {
  validate();
  Complex a0 = denominator.front();
  if (denominator.size() == 1) {
    std::vector<Complex> h = numerator;
    for (auto& v : h) v /= a0;
    return h;
  }
  if (!is_stable()) throw NumericalError("impulse response of an unstable filter");
  std::size_t window = 8 * denominator.size() + 32;
  std::vector<Complex> h;
  double peak = 0.0;
  std::size_t quiet = 0;
  for (std::size_t m = 0; m < max_len; ++m) {
    Complex v = m < numerator.size() ? numerator[m] : Complex(0.0);
    for (std::size_t n = 1; n < denominator.size() && n <= m; ++n) v -= denominator[n] * h[m - n];
    v /= a0;
    h.push_back(v);
    peak = std::max(peak, std::abs(v));
    quiet = (std::abs(v) < rel_tol * peak) ? quiet + 1 : 0;
    if (m + 1 >= numerator.size() && quiet >= window) {
      h.resize(h.size() - quiet);
      if (h.empty()) h.push_back(0.0);
      return h;
    }
  }
  throw NumericalError("impulse response did not decay within " + std::to_string(max_len) + " taps");
}

FilterSpec operator*(const FilterSpec& a, const FilterSpec& b) {
  return FilterSpec::rational(poly_multiply(a.numerator, b.numerator), poly_multiply(a.denominator, b.denominator));
}

Eigen::MatrixXcd lifted_transfer_block(const std::vector<Complex>& impulse, int period, double omega) {
  if (period < 1) throw InputError("period must be at least 1");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(period, period);
  const long T = period;
  for (long m = 0; m < static_cast<long>(impulse.size()); ++m) {
    if (impulse[m] == Complex(0.0)) continue;
    // m = aT + p - t with 0 <= p, t < T
    for (long p = 0; p < T; ++p) {
      long rest = m - p;
      long t = ((-rest) % T + T) % T;
      long a = (rest + t) / T;
      out(p, t) += impulse[m] * std::polar(1.0, -omega * static_cast<double>(a));
    }
  }
  return out;
}

Eigen::MatrixXcd lifted_transfer_block(const FilterSpec& f, int period, double omega) {
  return lifted_transfer_block(f.impulse_response(), period, omega);
}

}  // namespace cyclotopo
