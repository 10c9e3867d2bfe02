#include "nlcurv/seminorms.hpp"

#include <cmath>

namespace nlcurv {

double graph_linearization_functional(const PatchChart& patch, double s, double p, int workers) {
  if (!(s > 0 && s < 1)) throw InvalidParams("s must lie in (0,1)");
  if (!(p > 0)) throw InvalidParams("p must be positive");
  const Eigen::Index K = patch.size();
  if (K < 10) throw DegeneratePatch("patch has fewer than 10 nodes");
  const int d = patch.dim();
  const double w = std::pow(patch.spacing, d);
  const double expo = -(d + 1 + s) / 2.0;
  Eigen::VectorXd outer(K);
  parallel_for(K, workers, [&](Eigen::Index i) {
    Eigen::VectorXd terms = Eigen::VectorXd::Zero(K);
    for (Eigen::Index j = 0; j < K; ++j) {
      if (j == i) continue;
      const Eigen::RowVectorXd diff = patch.nodes.row(i) - patch.nodes.row(j);
      const double residual = patch.heights(i) - patch.heights(j) - patch.gradients.row(j).dot(diff);
      terms(j) = std::abs(residual) * std::pow(diff.squaredNorm(), expo);
    }
    outer(i) = std::pow(pairwise_sum(terms) * w, p) * w;
  });
  return pairwise_sum(outer);
}

MorreyCheck morrey_check(const PatchChart& patch, double s, double p, int workers) {
  const int d = patch.dim();
  if (!(s > d / p)) throw InvalidParams("the Morrey check needs s > d/p");
  MorreyCheck out;
  out.rhs = std::pow(graph_linearization_functional(patch, s, p, workers), 1.0 / p);
  const double sigma = s - d / p;
  const double inner = 0.75 * patch.radius * (1 + 1e-12);
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < patch.size(); ++i)
    if (patch.nodes.row(i).norm() <= inner) idx.push_back(i);
  const auto n = static_cast<Eigen::Index>(idx.size());
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(n);
  parallel_for(n, workers, [&](Eigen::Index a) {
    const Eigen::Index i = idx[static_cast<std::size_t>(a)];
    double best = 0;
    for (Eigen::Index b = 0; b < n; ++b) {
      const Eigen::Index j = idx[static_cast<std::size_t>(b)];
      if (i == j) continue;
      const double r = (patch.nodes.row(i) - patch.nodes.row(j)).norm();
      best = std::max(best, (patch.gradients.row(i) - patch.gradients.row(j)).norm() / std::pow(r, sigma));
    }
    rows(a) = best;
  });
  out.lhs = n > 1 ? rows.maxCoeff() : 0.0;
  return out;
}

}  // namespace nlcurv
