#include "bec/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace bec {

namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  fftw_complex* buffer = nullptr;
  long size = 0;
};

std::mutex plan_mutex;

PlanPair& plan_for(const Grid& g) {
  static std::map<std::pair<int, int>, PlanPair> cache;
  auto key = std::make_pair(g.dim, g.m);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  PlanPair p;
  p.size = g.size();
  p.buffer = fftw_alloc_complex(p.size);
  if (g.dim == 1) {
    p.forward = fftw_plan_dft_1d(g.m, p.buffer, p.buffer, FFTW_FORWARD, FFTW_ESTIMATE);
    p.backward = fftw_plan_dft_1d(g.m, p.buffer, p.buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
  } else {
    p.forward = fftw_plan_dft_3d(g.m, g.m, g.m, p.buffer, p.buffer, FFTW_FORWARD, FFTW_ESTIMATE);
    p.backward =
        fftw_plan_dft_3d(g.m, g.m, g.m, p.buffer, p.buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  return cache.emplace(key, p).first->second;
}

void execute(const Grid& g, VectorXcd& values, bool forward) {
  std::lock_guard<std::mutex> lock(plan_mutex);
  PlanPair& p = plan_for(g);
  if (values.size() != p.size) throw Error("fft: value count does not match grid");
  auto* buf = reinterpret_cast<Complex*>(p.buffer);
  for (long i = 0; i < p.size; ++i) buf[i] = values[i];
  fftw_execute(forward ? p.forward : p.backward);
  if (forward) {
    for (long i = 0; i < p.size; ++i) values[i] = buf[i];
  } else {
    const double scale = 1.0 / static_cast<double>(p.size);
    for (long i = 0; i < p.size; ++i) values[i] = buf[i] * scale;
  }
}

}  // namespace

void fft_forward(const Grid& g, VectorXcd& values) { execute(g, values, true); }
void fft_backward(const Grid& g, VectorXcd& values) { execute(g, values, false); }

void apply_multiplier(const Grid& g, VectorXcd& values,
                      const std::function<Complex(double, double, double)>& fn) {
  fft_forward(g, values);
  if (g.dim == 1) {
    for (int i = 0; i < g.m; ++i) values[i] *= fn(g.k(i), 0.0, 0.0);
  } else {
    long idx = 0;
    for (int i = 0; i < g.m; ++i) {
      const double kx = g.k(i);
      for (int j = 0; j < g.m; ++j) {
        const double ky = g.k(j);
        for (int l = 0; l < g.m; ++l, ++idx) {
          values[idx] *= fn(kx, ky, g.k(l));
        }
      }
    }
  }
  fft_backward(g, values);
}

VectorXd convolve(const Grid& g, const VectorXd& kernel, const VectorXd& rho) {
  if (kernel.size() != g.size() || rho.size() != g.size()) {
    throw Error("convolve: size mismatch");
  }
  VectorXcd a = kernel.cast<Complex>();
  VectorXcd b = rho.cast<Complex>();
  fft_forward(g, a);
  fft_forward(g, b);
  a.array() *= b.array();
  fft_backward(g, a);
  const double hd = std::pow(g.h(), g.dim);
  return hd * a.real();
}

}  // namespace bec
