#pragma once

#include "fejercert/nat.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <utility>

namespace fejercert {

using Point = Eigen::VectorXd;

// 1/(k+1) in double precision (0 once k is astronomically large).
double inverse_succ(const Nat& k);

// AF_k = { p : residual(p,k) ≤ 1/(k+1) }.
class ApproximationFamily {
 public:
  using Residual = std::function<double(const Point&, const Nat&)>;

  ApproximationFamily(std::string name, Residual residual)
      : name_(std::move(name)), residual_(std::move(residual)) {}

  double residual(const Point& p, const Nat& k) const { return residual_(p, k); }
  bool contains(const Point& p, const Nat& k, double tau) const {
    return residual_(p, k) <= inverse_succ(k) + tau;
  }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  Residual residual_;
};

}  // namespace fejercert
