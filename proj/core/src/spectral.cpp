#include "solmod/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace solmod {
namespace {

// FFTW plan creation is not thread safe; new-array execution is.  Plans are
// made once per size with FFTW_UNALIGNED so they run on any caller buffer.
struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
};

const PlanPair& plans_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) {
    std::vector<cxd> a(n), b(n);
    auto* pa = reinterpret_cast<fftw_complex*>(a.data());
    auto* pb = reinterpret_cast<fftw_complex*>(b.data());
    PlanPair p;
    p.fwd = fftw_plan_dft_1d(static_cast<int>(n), pa, pb, FFTW_FORWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.inv = fftw_plan_dft_1d(static_cast<int>(n), pa, pb, FFTW_BACKWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    it = cache.emplace(n, p).first;
  }
  return it->second;
}

void check_spans(const GridSpec& grid, std::span<const cxd> in, std::span<cxd> out) {
  if (in.size() != grid.n || out.size() != grid.n)
    throw std::invalid_argument("fft: span size does not match grid");
  if (in.data() == out.data())
    throw std::invalid_argument("fft: in-place transform not supported");
}

}  // namespace

void fft_forward(const GridSpec& grid, std::span<const cxd> in, std::span<cxd> out) {
  check_spans(grid, in, out);
  auto* pin = reinterpret_cast<fftw_complex*>(const_cast<cxd*>(in.data()));
  auto* pout = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plans_for(grid.n).fwd, pin, pout);
}

void fft_inverse(const GridSpec& grid, std::span<const cxd> in, std::span<cxd> out) {
  check_spans(grid, in, out);
  auto* pin = reinterpret_cast<fftw_complex*>(const_cast<cxd*>(in.data()));
  auto* pout = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plans_for(grid.n).inv, pin, pout);
  const double scale = 1.0 / static_cast<double>(grid.n);
  for (auto& z : out) z *= scale;
}

ComplexField derivative(const ComplexField& u) {
  const auto& g = u.grid;
  std::vector<cxd> hat(g.n), out(g.n);
  fft_forward(g, u.values, hat);
  for (std::size_t m = 0; m < g.n; ++m) hat[m] *= cxd{0.0, g.wavenumber(m)};
  hat[g.n / 2] = 0.0;  // Nyquist has no signed direction; drop it
  fft_inverse(g, hat, out);
  return ComplexField{g, std::move(out)};
}

ComplexField second_derivative(const ComplexField& u) {
  const auto& g = u.grid;
  std::vector<cxd> hat(g.n), out(g.n);
  fft_forward(g, u.values, hat);
  for (std::size_t m = 0; m < g.n; ++m) {
    const double k = g.wavenumber(m);
    hat[m] *= -k * k;
  }
  fft_inverse(g, hat, out);
  return ComplexField{g, std::move(out)};
}

double h1_norm(const ComplexField& u) {
  const ComplexField du = derivative(u);
  double sum = 0.0;
  for (std::size_t j = 0; j < u.values.size(); ++j)
    sum += std::norm(u.values[j]) + std::norm(du.values[j]);
  return std::sqrt(u.grid.dx() * sum);
}

std::vector<cxd> interpolate(const ComplexField& u, std::span<const double> points) {
  const auto& g = u.grid;
  const std::size_t n = g.n;
  const std::size_t half = n / 2;
  std::vector<cxd> hat(n);
  fft_forward(g, u.values, hat);

  // Mode coefficients c_m, m = -n/2+1 .. n/2-1, plus the Nyquist bin treated
  // as a cosine so real even data stays real and even:
  //   u(x) = sum_m c_m e^{i m theta} + c_N cos((n/2) theta),
  //   theta = pi (x + L) / L.
  const double inv_n = 1.0 / static_cast<double>(n);
  auto coeff = [&](long m) {
    const std::size_t bin = m >= 0 ? static_cast<std::size_t>(m)
                                   : n - static_cast<std::size_t>(-m);
    return hat[bin] * inv_n;
  };

  double peak = 0.0;
  for (const auto& z : hat) peak = std::max(peak, std::abs(z) * inv_n);
  const double tiny = 1e-18 * peak;

  long mmax = 0;
  for (long m = static_cast<long>(half) - 1; m >= 1; --m) {
    if (std::abs(coeff(m)) > tiny || std::abs(coeff(-m)) > tiny) {
      mmax = m;
      break;
    }
  }
  const cxd nyquist = hat[half] * inv_n;
  const bool keep_nyquist = std::abs(nyquist) > tiny;

  std::vector<cxd> ordered(2 * mmax + 1);
  for (long m = -mmax; m <= mmax; ++m) ordered[m + mmax] = coeff(m);

  const double pi = std::numbers::pi;
  std::vector<cxd> out(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    const double theta = pi * (points[p] + g.half_length) / g.half_length;
    const cxd z = std::polar(1.0, theta);
    cxd acc = ordered.back();
    for (long idx = 2 * mmax - 1; idx >= 0; --idx)
      acc = acc * z + ordered[static_cast<std::size_t>(idx)];
    acc *= std::polar(1.0, std::remainder(-static_cast<double>(mmax) * theta, 2.0 * pi));
    if (keep_nyquist)
      acc += nyquist * std::cos(std::remainder(static_cast<double>(half) * theta, 2.0 * pi));
    out[p] = acc;
  }
  return out;
}

ComplexField translate(const ComplexField& u, double shift) {
  const auto& g = u.grid;
  std::vector<cxd> hat(g.n), out(g.n);
  fft_forward(g, u.values, hat);
  for (std::size_t m = 0; m < g.n; ++m) {
    if (m == g.n / 2) {
      hat[m] *= std::cos(g.wavenumber(m) * shift);
    } else {
      hat[m] *= std::polar(1.0, -g.wavenumber(m) * shift);
    }
  }
  fft_inverse(g, hat, out);
  return ComplexField{g, std::move(out)};
}

}  // namespace solmod
