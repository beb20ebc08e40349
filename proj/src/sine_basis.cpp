#include "kg/sine_basis.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <map>
#include <mutex>
#include <vector>

namespace kg {

namespace {

// FFT plans are cached per transform length and per thread; Eigen::FFT
// instances are not safe to share across threads.
Eigen::FFT<double>& fft_for(int length) {
  thread_local std::map<int, Eigen::FFT<double>> plans;
  (void)length;
  return plans[length];
}

}  // namespace

SineBasis::SineBasis(GridPtr grid) : grid_(std::move(grid)) {
  const int n = grid_->n;
  const double h = grid_->h;
  lambda_.resize(n);
  for (int k = 1; k <= n; ++k) {
    const double s = std::sin(0.5 * M_PI * k / (n + 1));
    lambda_[k - 1] = 4.0 / (h * h) * s * s;
  }
}

VectorXcd SineBasis::transform(const VectorXcd& x) const {
  const int n = grid_->n;
  const int len = 2 * (n + 1);
  // Odd extension: y = (0, x_1..x_n, 0, -x_n..-x_1). Then
  // FFT(y)_k = -2i sum_j x_j sin(pi j k/(n+1)).
  std::vector<Complex> y(len, Complex(0.0, 0.0));
  for (int j = 1; j <= n; ++j) {
    y[j] = x[j - 1];
    y[len - j] = -x[j - 1];
  }
  std::vector<Complex> Y(len);
  fft_for(len).fwd(Y, y);
  const double scale = 0.5 * std::sqrt(2.0 / (n + 1));
  VectorXcd out(n);
  for (int k = 1; k <= n; ++k) out[k - 1] = Complex(0.0, scale) * Y[k];
  return out;
}

VectorXcd SineBasis::apply_spectral_multiplier(const VectorXcd& multiplier,
                                               const VectorXcd& x) const {
  VectorXcd xhat = transform(x);
  xhat.array() *= multiplier.array();
  return transform(xhat);
}

const SineBasis& sine_basis(const GridPtr& grid) {
  static std::mutex mu;
  static std::map<const RadialGrid*, std::unique_ptr<SineBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[grid.get()];
  if (!slot) slot = std::make_unique<SineBasis>(grid);
  return *slot;
}

}  // namespace kg
