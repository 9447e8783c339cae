#pragma once

#include <span>

namespace mgtd {

struct TestResult {
  double t_statistic = 0.0;
  double degrees_freedom = 0.0;
  double p_value = 1.0;
  bool significant_at_05 = false;
};

/// Welch's unequal-variance two-sample t-test, two-sided. Both samples need
/// at least two values. Two constant samples give t = 0, p = 1 when their
/// means agree and t = +/-inf, p = 0 otherwise.
TestResult welch_t_test(std::span<const double> a, std::span<const double> b);

// Two-sided tail probability P(|T| >= |t|) for Student's t with df degrees.
double student_t_two_sided_p(double t, double df);

}  // namespace mgtd
