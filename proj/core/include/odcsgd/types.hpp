// SPDX-FileCopyrightText: (c) 2026 The odcsgd Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

namespace odcsgd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Agent positions, one row per agent, at a given time.
struct SwarmState {
  Matrix states;
  int t = 1;

  int agents() const { return static_cast<int>(states.rows()); }
  int dimension() const { return static_cast<int>(states.cols()); }
  Vector mean() const { return states.colwise().mean().transpose(); }
  /// max_i ||x_i - mean||.
  double disagreement() const {
    if (states.rows() == 0) return 0.0;
    return (states.rowwise() - states.colwise().mean()).rowwise().norm().maxCoeff();
  }
};

}  // namespace odcsgd
