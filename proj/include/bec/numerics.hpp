#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bec {

/// Error type carrying the name of the violated precondition or invariant.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Adaptive Gauss-Kronrod integration of f over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, double abs_tol = 1e-14);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;  // root-mean-square residual of the fit
};

/// Least-squares fit y = slope*x + intercept.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// log-log slope of err(h): fits log(err) vs log(h), ignoring non-positive entries.
double convergence_order(const std::vector<double>& h, const std::vector<double>& err);

}  // namespace bec
