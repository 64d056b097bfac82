#pragma once

#include <vector>

namespace joinrelax::workbench {

double median(std::vector<double> values);

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r_squared = 0.0;
};

// Ordinary least squares y = intercept + slope x.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// y = c x^b fitted on logs; slope is the exponent b.
LinearFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

// log y = a + b x; slope is b.
LinearFit fit_exponential(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace joinrelax::workbench
