#include "nlcurv/patch.hpp"

#include <cmath>
#include <vector>

#include "nlcurv/errors.hpp"

namespace nlcurv {

Eigen::MatrixXd disc_lattice(int dim, double radius, double step) {
  if (dim != 1 && dim != 2) throw InvalidParams("patch dimension must be 1 or 2");
  if (!(radius > 0 && step > 0)) throw InvalidParams("patch radius and step must be positive");
  const int n = static_cast<int>(std::floor(radius / step + 1e-9));
  const double r2 = radius * radius * (1 + 1e-12);
  std::vector<double> coords;
  if (dim == 1) {
    for (int i = -n; i <= n; ++i) coords.push_back(i * step);
  } else {
    for (int i = -n; i <= n; ++i)
      for (int j = -n; j <= n; ++j) {
        const double x = i * step, y = j * step;
        if (x * x + y * y <= r2) {
          coords.push_back(x);
          coords.push_back(y);
        }
      }
  }
  const auto k = static_cast<Eigen::Index>(coords.size()) / dim;
  return Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(coords.data(), k, dim);
}

PatchChart patch_from_function(int dim, double radius, double step,
                               const std::function<double(const Eigen::VectorXd&)>& f,
                               const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& df) {
  PatchChart p;
  p.radius = radius;
  p.spacing = step;
  p.nodes = disc_lattice(dim, radius, step);
  p.rotation = Eigen::MatrixXd::Identity(dim + 1, dim + 1);
  p.origin = Eigen::VectorXd::Zero(dim + 1);
  p.heights.resize(p.size());
  p.gradients.resize(p.size(), dim);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const Eigen::VectorXd x = p.nodes.row(i).transpose();
    p.heights(i) = f(x);
    p.gradients.row(i) = df(x).transpose();
  }
  p.grad_sup = p.size() ? p.gradients.rowwise().norm().maxCoeff() : 0.0;
  return p;
}

}  // namespace nlcurv
