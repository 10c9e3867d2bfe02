#pragma once

#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace nlcurv {

struct IntegrationResult {
  double value = 0;
  double error = 0;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes on [-1, 1] (non-negative half).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename F>
IntegrationResult gauss_kronrod_15(F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kKronrodNodes[static_cast<std::size_t>(i)];
    const double fsum = f(c - dx) + f(c + dx);
    kronrod += kKronrodWeights[static_cast<std::size_t>(i)] * fsum;
    if (i % 2 == 1) gauss += kGaussWeights[static_cast<std::size_t>(i / 2)] * fsum;
  }
  return {kronrod * h, std::abs((kronrod - gauss) * h)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod 7/15 quadrature of a smooth integrand on
/// [a, b]. The returned error is the summed Kronrod-Gauss difference.
template <typename F>
IntegrationResult integrate_adaptive(F f, double a, double b, double tol = 1e-14, int max_intervals = 4000) {
  struct Piece {
    double a, b;
    IntegrationResult r;
    bool operator<(const Piece& o) const { return r.error < o.r.error; }
  };
  std::priority_queue<Piece> heap;
  auto first = detail::gauss_kronrod_15(f, a, b);
  heap.push({a, b, first});
  double value = first.value, error = first.error;
  int intervals = 1;
  while (error > tol * std::max(1.0, std::abs(value)) && intervals < max_intervals) {
    Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::gauss_kronrod_15(f, worst.a, mid);
    auto right = detail::gauss_kronrod_15(f, mid, worst.b);
    value += left.value + right.value - worst.r.value;
    error += left.error + right.error - worst.r.error;
    heap.push({worst.a, mid, left});
    heap.push({mid, worst.b, right});
    ++intervals;
  }
  // re-sum to shed the drift of the running totals
  value = 0;
  error = 0;
  while (!heap.empty()) {
    value += heap.top().r.value;
    error += heap.top().r.error;
    heap.pop();
  }
  return {value, error};
}

}  // namespace nlcurv
