#include <cmath>

#include "suparea/numerics.hpp"

namespace suparea::numerics {

void RunningStats::merge(const RunningStats& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double n_a = static_cast<double>(count_);
  const double n_b = static_cast<double>(other.count_);
  const double n = n_a + n_b;
  const double delta = other.mean_ - mean_;
  mean_ += delta * n_b / n;
  sum_sq_dev_ += other.sum_sq_dev_ + delta * delta * n_a * n_b / n;
  count_ += other.count_;
}

double RunningStats::variance() const {
  if (count_ < 2) return 0.0;
  return sum_sq_dev_ / static_cast<double>(count_ - 1);
}

double RunningStats::stderr_of_mean() const {
  if (count_ < 2) return 0.0;
  return std::sqrt(variance() / static_cast<double>(count_));
}

}  // namespace suparea::numerics
