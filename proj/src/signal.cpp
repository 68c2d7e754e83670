#include "cyclotopo/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "cyclotopo/error.hpp"
#include "fft.hpp"

namespace cyclotopo {

void ScalarSeries::validate() const {
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (!std::isfinite(samples[k].real()) || !std::isfinite(samples[k].imag()))
      throw NumericalError("node " + std::to_string(node_id) + ": non-finite sample at index " + std::to_string(k));
  }
}

LiftedSeries::LiftedSeries(NodeId node_id, int period, std::vector<Complex> data)
    : node_id_(node_id), period_(period), data_(std::move(data)) {
  if (period_ < 1) throw InputError("period must be at least 1");
  data_.resize(block_count() * period_);
}

std::vector<Complex> LiftedSeries::component(int p) const {
  std::vector<Complex> out(block_count());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = at(k, p);
  return out;
}

int lcm_periods(const std::vector<int>& periods) {
  if (periods.empty()) throw InputError("lcm of an empty period list");
  long long acc = 1;
  for (int p : periods) {
    if (p < 1) throw InputError("periods must be at least 1");
    acc = std::lcm(acc, static_cast<long long>(p));
    if (acc > (1 << 30)) throw InputError("period lcm overflow");
  }
  return static_cast<int>(acc);
}

int detect_period(const ScalarSeries& x, int max_period, double threshold) {
  if (max_period < 1) throw InputError("max_period must be at least 1");
  if (x.size() < 16 * static_cast<std::size_t>(max_period))
    throw InputError("series too short for period detection: " + std::to_string(x.size()) + " samples, need " +
                     std::to_string(16 * max_period));
  if (max_period == 1) return 1;

  std::vector<int> range(max_period);
  std::iota(range.begin(), range.end(), 1);
  // every cyclic frequency 1/T, T<=max_period, on an exact bin
  std::size_t base = static_cast<std::size_t>(lcm_periods(range));
  std::size_t n = x.size();
  if (n >= base) n -= n % base;

  std::vector<Complex> q(n);
  double mean = 0.0;
  for (std::size_t k = 0; k < n; ++k) mean += std::norm(x.samples[k]);
  mean /= static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) q[k] = std::norm(x.samples[k]) - mean;
  detail::fft_forward(q);

  std::size_t half = n / 2;
  std::vector<double> mags(half);
  for (std::size_t f = 1; f <= half; ++f) mags[f - 1] = std::abs(q[f]);
  std::vector<double> sorted = mags;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  double median = sorted[sorted.size() / 2];
  if (median <= 0.0) {
    // constant power or exact zero spectrum
    double peak = *std::max_element(mags.begin(), mags.end());
    if (peak <= 0.0) return 1;
    median = std::numeric_limits<double>::min();
  }

  long long result = 1;
  for (std::size_t f = 1; f <= half; ++f) {
    if (mags[f - 1] <= threshold * median) continue;
    double alpha = static_cast<double>(f) / static_cast<double>(n);
    double period = 1.0 / alpha;
    double rounded = std::round(period);
    if (std::abs(period - rounded) > 0.01 || rounded > max_period) continue;
    result = std::lcm(result, static_cast<long long>(rounded));
  }
  return static_cast<int>(result);
}

LiftedSeries lift(const ScalarSeries& x, int period) {
  if (period < 1) throw InputError("period must be at least 1");
  std::size_t blocks = x.size() / period;
  std::vector<Complex> data(x.samples.begin(), x.samples.begin() + blocks * period);
  return LiftedSeries(x.node_id, period, std::move(data));
}

ScalarSeries unlift(const LiftedSeries& x) { return ScalarSeries{x.node_id(), x.data()}; }

namespace {

struct HalfStats {
  Complex mean;
  double se_re = 0.0;
  double se_im = 0.0;
};

template <class F>
HalfStats batch_stats(F&& value, std::size_t begin, std::size_t end, std::size_t batches) {
  std::size_t len = (end - begin) / batches;
  std::vector<Complex> means(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    Complex acc = 0.0;
    for (std::size_t k = begin + b * len; k < begin + (b + 1) * len; ++k) acc += value(k);
    means[b] = acc / static_cast<double>(len);
  }
  HalfStats s;
  for (const auto& m : means) s.mean += m;
  s.mean /= static_cast<double>(batches);
  double vr = 0.0, vi = 0.0;
  for (const auto& m : means) {
    vr += std::pow(m.real() - s.mean.real(), 2);
    vi += std::pow(m.imag() - s.mean.imag(), 2);
  }
  double denom = static_cast<double>(batches) * static_cast<double>(batches - 1);
  s.se_re = std::sqrt(vr / denom);
  s.se_im = std::sqrt(vi / denom);
  return s;
}

double z_score(double a, double b, double sa, double sb) {
  double se = std::hypot(sa, sb);
  double diff = std::abs(a - b);
  if (se == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / se;
}

}  // namespace

StationarityReport split_half_stationarity(const std::vector<LiftedSeries>& series, int max_lag, double z_limit,
                                           std::size_t batches, bool cross_pairs) {
  StationarityReport report;
  if (series.empty()) return report;
  if (batches < 2) throw InputError("need at least two batches");
  std::size_t blocks = series.front().block_count();
  for (const auto& s : series)
    if (s.block_count() != blocks) throw InputError("lifted series differ in block count");
  if (blocks < 2 * batches * static_cast<std::size_t>(max_lag + 2))
    throw InputError("series too short for the stationarity test");

  // lag-l products need k + l inside the series
  std::size_t usable = blocks - static_cast<std::size_t>(max_lag);
  std::size_t mid = usable / 2;

  auto record = [&](const HalfStats& a, const HalfStats& b, const std::string& what) {
    double z = std::max(z_score(a.mean.real(), b.mean.real(), a.se_re, b.se_re),
                        z_score(a.mean.imag(), b.mean.imag(), a.se_im, b.se_im));
    ++report.statistics;
    if (z > report.max_z) {
      report.max_z = z;
      report.worst = what;
    }
  };

  for (std::size_t u = 0; u < series.size(); ++u) {
    const auto& x = series[u];
    int period = x.period();
    for (int p = 0; p < period; ++p) {
      auto value = [&](std::size_t k) { return x.at(k, p); };
      std::ostringstream what;
      what << "mean node " << x.node_id() << " phase " << p;
      record(batch_stats(value, 0, mid, batches), batch_stats(value, mid, 2 * mid, batches), what.str());
    }
    for (std::size_t v = cross_pairs ? 0 : u; v < (cross_pairs ? series.size() : u + 1); ++v) {
      const auto& y = series[v];
      for (int lag = 0; lag <= max_lag; ++lag)
        for (int p = 0; p < period; ++p)
          for (int t = 0; t < y.period(); ++t) {
            auto value = [&](std::size_t k) { return x.at(k + lag, p) * std::conj(y.at(k, t)); };
            std::ostringstream what;
            what << "cov node " << x.node_id() << "," << y.node_id() << " lag " << lag << " entry " << p << ","
                 << t;
            record(batch_stats(value, 0, mid, batches), batch_stats(value, mid, 2 * mid, batches), what.str());
          }
    }
  }
  report.passed = report.max_z <= z_limit;
  return report;
}

}  // namespace cyclotopo
