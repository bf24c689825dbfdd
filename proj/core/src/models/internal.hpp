#pragma once

#include "dsep/models/bilinear.hpp"

namespace dsep::models::detail {

Estimates phasor_estimates(const ModelProblem& mp, const Eigen::VectorXd& x);
Estimates dynamic_estimates(const ModelProblem& mp, const Eigen::VectorXd& x);

}  // namespace dsep::models::detail
