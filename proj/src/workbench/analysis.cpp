#include "joinrelax/workbench/analysis.hpp"

#include <cmath>

#include "joinrelax/costmodel/train.hpp"
#include "joinrelax/error.hpp"

namespace joinrelax::workbench {

double median(std::vector<double> values) { return costmodel::median(std::move(values)); }

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("a line fit needs two or more paired points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("a line fit needs distinct x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

namespace {

std::vector<double> logs(const std::vector<double>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (double x : v) {
    if (!(x > 0.0)) throw DomainError("log fit needs positive values");
    out.push_back(std::log(x));
  }
  return out;
}

}  // namespace

LinearFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  return fit_line(logs(x), logs(y));
}

LinearFit fit_exponential(const std::vector<double>& x, const std::vector<double>& y) {
  return fit_line(x, logs(y));
}

}  // namespace joinrelax::workbench
