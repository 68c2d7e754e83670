#pragma once

#include <complex>
#include <string>
#include <cstddef>
#include <vector>

#include "cyclotopo/graph.hpp"

namespace cyclotopo {

using Complex = std::complex<double>;

struct ScalarSeries {
  NodeId node_id = 0;
  std::vector<Complex> samples;

  std::size_t size() const { return samples.size(); }
  /// Throws NumericalError on a non-finite sample.
  void validate() const;
};

/// Period-T blocks of a scalar series, stored block-major.
class LiftedSeries {
 public:
  LiftedSeries() = default;
  LiftedSeries(NodeId node_id, int period, std::vector<Complex> data);

  NodeId node_id() const { return node_id_; }
  int period() const { return period_; }
  std::size_t block_count() const { return period_ ? data_.size() / period_ : 0; }
  Complex at(std::size_t k, int p) const { return data_[k * period_ + p]; }
  const std::vector<Complex>& data() const { return data_; }
  /// Polyphase component p: x(kT + p) for k = 0, 1, ...
  std::vector<Complex> component(int p) const;

 private:
  NodeId node_id_ = 0;
  int period_ = 1;
  std::vector<Complex> data_;
};

/// Period from the cyclic spectrum of the demeaned power |x(k)|^2.
/// Requires at least 16 * max_period samples.
int detect_period(const ScalarSeries& x, int max_period = 8, double threshold = 10.0);
int lcm_periods(const std::vector<int>& periods);

LiftedSeries lift(const ScalarSeries& x, int period);
ScalarSeries unlift(const LiftedSeries& x);

struct StationarityReport {
  bool passed = true;
  double max_z = 0.0;
  std::size_t statistics = 0;
  /// Description of the worst statistic.
  std::string worst;
};

/// Split-half test on lifted blocks: the mean and the lag-l block
/// covariances (l = 0..max_lag, all node pairs) of the first and second
/// halves must agree within z_limit batch-means standard errors.
StationarityReport split_half_stationarity(const std::vector<LiftedSeries>& series, int max_lag = 2,
                                           double z_limit = 5.0, std::size_t batches = 100,
                                           bool cross_pairs = false);

}  // namespace cyclotopo
