#include "bec/numerics.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <mutex>

namespace bec {

namespace {

double call_target(double x, void* params) {
  auto* f = static_cast<const std::function<double(double)>*>(params);
  return (*f)(x);
}

void disable_gsl_abort() {
  static std::once_flag once;
  std::call_once(once, [] { gsl_set_error_handler_off(); });
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, double abs_tol) {
  if (a == b) return 0.0;
  disable_gsl_abort();

  constexpr size_t kLimit = 4096;
  std::unique_ptr<gsl_integration_workspace, void (*)(gsl_integration_workspace*)> ws(
      gsl_integration_workspace_alloc(kLimit), gsl_integration_workspace_free);

  gsl_function target;
  target.function = &call_target;
  target.params = const_cast<std::function<double(double)>*>(&f);

  double result = 0.0, abserr = 0.0;
  int status = gsl_integration_qag(&target, a, b, abs_tol, rel_tol, kLimit,
                                   GSL_INTEG_GAUSS21, ws.get(), &result, &abserr);
  if (status == GSL_EROUND || status == GSL_EMAXITER) {
    // Accept if the reported error is still acceptable relative to the value.
    if (abserr <= 1e-8 * std::max(1.0, std::abs(result))) return result;
  }
  if (status != GSL_SUCCESS) {
    throw Error("quadrature failed with status " + std::to_string(status));
  }
  return result;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error("fit_line: need at least two matching samples");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  if (det == 0.0) throw Error("fit_line: degenerate abscissae");
  LineFit fit;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

double convergence_order(const std::vector<double>& h, const std::vector<double>& err) {
  std::vector<double> lx, ly;
  for (size_t i = 0; i < h.size(); ++i) {
    if (h[i] > 0 && err[i] > 0) {
      lx.push_back(std::log(h[i]));
      ly.push_back(std::log(err[i]));
    }
  }
  return fit_line(lx, ly).slope;
}

}  // namespace bec
