#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Core>

namespace nlcurv {

/// Worker count from NLCURV_WORKERS, falling back to the hardware
/// concurrency. Results never depend on this number.
inline int default_workers() {
  if (const char* env = std::getenv("NLCURV_WORKERS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1) return static_cast<int>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls fn(i) for i in [0, n) using contiguous static chunks. The first
/// exception (by chunk order) is rethrown after all workers join.
template <typename Fn>
void parallel_for(Eigen::Index n, int workers, Fn&& fn) {
  if (workers <= 0) workers = default_workers();
  const Eigen::Index chunks = std::min<Eigen::Index>(workers, n);
  if (chunks <= 1) {
    for (Eigen::Index i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(chunks));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(chunks));
  for (Eigen::Index c = 0; c < chunks; ++c) {
    pool.emplace_back([&, c] {
      const Eigen::Index begin = n * c / chunks;
      const Eigen::Index end = n * (c + 1) / chunks;
      try {
        for (Eigen::Index i = begin; i < end; ++i) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(c)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

namespace detail {
template <typename Scalar>
Scalar pairwise_sum(const Scalar* data, Eigen::Index n) {
  if (n <= 8) {
    Scalar acc = 0;
    for (Eigen::Index i = 0; i < n; ++i) acc += data[i];
    return acc;
  }
  const Eigen::Index half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}
}  // namespace detail

/// Fixed-shape pairwise summation; the result depends only on the values and
/// their order.
template <typename Scalar>
Scalar pairwise_sum(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& values) {
  return detail::pairwise_sum(values.data(), values.size());
}

}  // namespace nlcurv
