#include "mgtd/stats.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "mgtd/error.hpp"

namespace mgtd {

namespace {

struct Moments {
  double pivot;      // first value; moments are taken relative to it
  double mean_dev;   // mean of (x - pivot)
  double variance;   // sample variance
};

// Centering on the first value makes the difference of means and both
// variances exactly invariant to adding a representable constant to
// both samples.
Moments moments(std::span<const double> xs) {
  Moments m{xs[0], 0.0, 0.0};
  double sum = 0.0;
  for (double x : xs) sum += x - m.pivot;
  const double n = static_cast<double>(xs.size());
  m.mean_dev = sum / n;
  double ss = 0.0;
  for (double x : xs) {
    const double d = (x - m.pivot) - m.mean_dev;
    ss += d * d;
  }
  m.variance = ss / (n - 1.0);
  return m;
}

}  // namespace

double student_t_two_sided_p(double t, double df) {
  if (std::isnan(t) || !(df > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0.0;
  if (t == 0.0) return 1.0;
  const double x = df / (df + t * t);
  const double p = boost::math::ibeta(df / 2.0, 0.5, x);
  return std::clamp(p, 0.0, 1.0);
}

TestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw InputError("welch_t_test: each sample needs at least two values");
  const Moments ma = moments(a);
  const Moments mb = moments(b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double diff = (ma.pivot - mb.pivot) + (ma.mean_dev - mb.mean_dev);
  const double va = ma.variance / na;
  const double vb = mb.variance / nb;
  const double se2 = va + vb;

  TestResult r;
  if (se2 == 0.0) {
    r.degrees_freedom = na + nb - 2.0;
    if (diff == 0.0) {
      r.t_statistic = 0.0;
      r.p_value = 1.0;
    } else {
      r.t_statistic = std::copysign(std::numeric_limits<double>::infinity(), diff);
      r.p_value = 0.0;
    }
  } else {
    r.t_statistic = diff / std::sqrt(se2);
    r.degrees_freedom = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    r.p_value = student_t_two_sided_p(r.t_statistic, r.degrees_freedom);
  }
  r.significant_at_05 = r.p_value < 0.05;
  return r;
}

}  // namespace mgtd
