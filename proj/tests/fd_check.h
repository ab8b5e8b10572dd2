// Copyright 2026 The Retouch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "retouch/ops.h"
#include "retouch/params.h"
#include "retouch/tape.h"

namespace retouch::testing {

// Relative error between an analytic and a finite-difference derivative.
// Entries whose magnitude is below `floor` are compared against the floor
// instead, since relative error is undefined at zero.
inline double relative_error(double analytic, double numeric, double floor) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / scale;
}

// Builds a scalar loss on a fresh tape from variables bound to `inputs`.
using GraphBuilder = std::function<Var(Tape&, const std::vector<Var>&)>;

// Compares tape gradients of the loss with respect to every element of every
// input against central differences (step 1e-5). Returns the worst relative
// error with the given floor.
inline double gradient_check(std::vector<Tensor> inputs, const GraphBuilder& build,
                             double floor = 1e-3, double step = 1e-5) {
  std::vector<Tensor> analytic;
  {
    Tape tape;
    std::vector<Var> vars;
    for (const Tensor& t : inputs) vars.push_back(tape.leaf(t));
    const Var loss = build(tape, vars);
    tape.backward(loss);
    for (Var v : vars) analytic.push_back(tape.grad(v));
  }
  auto evaluate = [&]() {
    Tape tape;
    std::vector<Var> vars;
    for (const Tensor& t : inputs) vars.push_back(tape.constant(t));
    return tape.value(build(tape, vars))[0];
  };
  double worst = 0.0;
  for (std::size_t p = 0; p < inputs.size(); ++p) {
    for (std::size_t i = 0; i < inputs[p].size(); ++i) {
      const double saved = inputs[p][i];
      inputs[p][i] = saved + step;
      const double hi = evaluate();
      inputs[p][i] = saved - step;
      const double lo = evaluate();
      inputs[p][i] = saved;
      worst = std::max(worst, relative_error(analytic[p][i], (hi - lo) / (2 * step), floor));
    }
  }
  return worst;
}

// Worst relative error (floor 1e-3) of the dual-number pipeline Jacobian at
// one (params, pixel) point against central differences with step 1e-5.
// Parameter columns are compared in normalized units (d out / d raw scaled
// by the range) so every column sits on a comparable scale.
inline double pipeline_fd_error(const ParamVector& params, const PixelRGB& p) {
  constexpr double kStep = 1e-5;
  constexpr double kFloor = 1e-3;
  const PixelJacobian jac = pipeline_jacobian(params, p);
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) {
    PixelRGB hi = p, lo = p;
    (k == 0 ? hi.r : k == 1 ? hi.g : hi.b) += kStep;
    (k == 0 ? lo.r : k == 1 ? lo.g : lo.b) -= kStep;
    const PixelRGB fh = apply_pixel(params, hi), fl = apply_pixel(params, lo);
    const double fd[3] = {(fh.r - fl.r) / (2 * kStep), (fh.g - fl.g) / (2 * kStep),
                          (fh.b - fl.b) / (2 * kStep)};
    for (int c = 0; c < 3; ++c) {
      worst = std::max(worst, relative_error(jac.pixel[c][k], fd[c], kFloor));
    }
  }
  for (std::size_t i = 0; i < kNumParams; ++i) {
    ParamVector hi = params, lo = params;
    hi[i] += kStep;
    lo[i] -= kStep;
    const PixelRGB fh = apply_pixel(hi, p), fl = apply_pixel(lo, p);
    const double scale = kOperators[i].range_max;
    const double fd[3] = {(fh.r - fl.r) / (2 * kStep) * scale,
                          (fh.g - fl.g) / (2 * kStep) * scale,
                          (fh.b - fl.b) / (2 * kStep) * scale};
    for (int c = 0; c < 3; ++c) {
      worst = std::max(worst, relative_error(jac.param[c][i] * scale, fd[c], kFloor));
    }
  }
  return worst;
}

}  // namespace retouch::testing
