#pragma once

#include <vector>

#include <Eigen/Core>

namespace annealab {

// States stored at selected points of a fixed-step integration on s in [0,1].
struct Trajectory {
  std::vector<double> s;
  std::vector<Eigen::VectorXd> states;

  const Eigen::VectorXd& final_state() const { return states.back(); }
  std::size_t size() const { return s.size(); }
};

}  // namespace annealab
