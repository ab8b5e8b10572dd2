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

#include "retouch/tape.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "retouch/errors.h"

namespace retouch {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kShapeMismatch, what);
}

}  // namespace

Tensor Tape::make(std::size_t rows, std::size_t cols) {
  const auto it = pool_.find(rows * cols);
  if (it == pool_.end() || it->second.empty()) return Tensor(rows, cols);
  std::vector<double> values = std::move(it->second.back());
  it->second.pop_back();
  std::fill(values.begin(), values.end(), 0.0);
  return Tensor(rows, cols, std::move(values));
}

void Tape::recycle(Tensor& t) {
  if (t.size() == 0) return;
  pool_[t.size()].push_back(std::move(t.values()));
  t = Tensor();
}

void Tape::reset() {
  for (auto& n : nodes_) {
    recycle(n->owned);
    recycle(n->grad);
  }
  nodes_.clear();
}

Var Tape::push(Tensor value, bool requires_grad,
               std::function<void(Tape&, std::size_t)> backward) {
  auto n = std::make_unique<Node>();
  n->owned = std::move(value);
  n->value = &n->owned;
  n->requires_grad = requires_grad;
  if (requires_grad) n->backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return Var{nodes_.size() - 1};
}

Var Tape::constant(Tensor value) { return push(std::move(value), false, {}); }

Var Tape::constant_ref(const Tensor& value) {
  auto n = std::make_unique<Node>();
  n->value = &value;
  nodes_.push_back(std::move(n));
  return Var{nodes_.size() - 1};
}

Var Tape::leaf(Tensor value) { return push(std::move(value), true, {}); }

Var Tape::parameter(const Tensor& value, Tensor& grad_sink) {
  require(value.same_shape(grad_sink), "gradient sink shape differs from parameter");
  auto n = std::make_unique<Node>();
  n->value = &value;
  n->requires_grad = true;
  n->grad_sink = &grad_sink;
  nodes_.push_back(std::move(n));
  return Var{nodes_.size() - 1};
}

const Tensor& Tape::value(Var v) const { return *node(v).value; }

Tensor& Tape::grad_buffer(Var v) {
  Node& n = node(v);
  if (!n.has_grad) {
    n.grad = make(n.value->rows(), n.value->cols());
    n.has_grad = true;
  }
  return n.grad;
}

const Tensor& Tape::grad(Var v) { return grad_buffer(v); }

void Tape::backward(Var loss) {
  require(value(loss).rows() == 1 && value(loss).cols() == 1,
          "backward() needs a scalar loss");
  for (auto& n : nodes_) n->has_grad = false;
  grad_buffer(loss)[0] = 1.0;
  for (std::size_t i = loss.id + 1; i-- > 0;) {
    Node& n = *nodes_[i];
    if (!n.requires_grad || !n.has_grad) continue;
    if (n.backward) n.backward(*this, i);
    if (n.grad_sink != nullptr) {
      for (std::size_t k = 0; k < n.grad.size(); ++k) (*n.grad_sink)[k] += n.grad[k];
    }
  }
}

Var Tape::matmul(Var a, Var b) {
  Tensor out = make(value(a).rows(), value(b).cols());
  kernels::matmul(value(a), value(b), out);
  return push(std::move(out), needs(a) || needs(b), [a, b](Tape& t, std::size_t self) {
    const Tensor& g = t.nodes_[self]->grad;
    if (t.needs(a)) kernels::matmul_grad_a(g, t.value(b), t.grad_buffer(a));
    if (t.needs(b)) kernels::matmul_grad_b(t.value(a), g, t.grad_buffer(b));
  });
}

Var Tape::add(Var a, Var b) {
  const Tensor& x = value(a);
  const Tensor& y = value(b);
  require(x.same_shape(y), "add operands differ in shape");
  Tensor out = make(x.rows(), x.cols());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] + y[i];
  return push(std::move(out), needs(a) || needs(b), [a, b](Tape& t, std::size_t self) {
    const Tensor& g = t.nodes_[self]->grad;
    for (Var v : {a, b}) {
      if (!t.needs(v)) continue;
      Tensor& gv = t.grad_buffer(v);
      for (std::size_t i = 0; i < g.size(); ++i) gv[i] += g[i];
    }
  });
}

Var Tape::add_row(Var a, Var row) {
  const Tensor& x = value(a);
  const Tensor& r = value(row);
  require(r.rows() == 1 && r.cols() == x.cols(), "add_row needs a 1×m row");
  Tensor out = make(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = x(i, j) + r[j];
  }
  return push(std::move(out), needs(a) || needs(row),
              [a, row](Tape& t, std::size_t self) {
                const Tensor& g = t.nodes_[self]->grad;
                if (t.needs(a)) {
                  Tensor& ga = t.grad_buffer(a);
                  for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
                }
                if (t.needs(row)) {
                  Tensor& gr = t.grad_buffer(row);
                  for (std::size_t i = 0; i < g.rows(); ++i) {
                    for (std::size_t j = 0; j < g.cols(); ++j) gr[j] += g(i, j);
                  }
                }
              });
}

Var Tape::add_grouped(Var a, Var grp, std::size_t rows_per_group) {
  const Tensor& x = value(a);
  const Tensor& gv = value(grp);
  require(rows_per_group > 0 && gv.cols() == x.cols() &&
              gv.rows() * rows_per_group == x.rows(),
          "add_grouped group table does not tile the rows");
  Tensor out = make(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const std::size_t k = i / rows_per_group;
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = x(i, j) + gv(k, j);
  }
  return push(std::move(out), needs(a) || needs(grp),
              [a, grp, rows_per_group](Tape& t, std::size_t self) {
                const Tensor& g = t.nodes_[self]->grad;
                if (t.needs(a)) {
                  Tensor& ga = t.grad_buffer(a);
                  for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
                }
                if (t.needs(grp)) {
                  Tensor& gg = t.grad_buffer(grp);
                  for (std::size_t i = 0; i < g.rows(); ++i) {
                    const std::size_t k = i / rows_per_group;
                    for (std::size_t j = 0; j < g.cols(); ++j) gg(k, j) += g(i, j);
                  }
                }
              });
}

Var Tape::softsign(Var a) {
  const Tensor& x = value(a);
  Tensor out = make(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = kernels::softsign(x[i]);
  return push(std::move(out), needs(a), [a](Tape& t, std::size_t self) {
    const Tensor& g = t.nodes_[self]->grad;
    const Tensor& x = t.value(a);
    Tensor& ga = t.grad_buffer(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * kernels::softsign_grad(x[i]);
  });
}

Var Tape::clamp01(Var a) {
  const Tensor& x = value(a);
  Tensor out = make(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = x[i] < 0.0 ? 0.0 : (x[i] > 1.0 ? 1.0 : x[i]);
  }
  return push(std::move(out), needs(a), [a](Tape& t, std::size_t self) {
    const Tensor& g = t.nodes_[self]->grad;
    const Tensor& x = t.value(a);
    Tensor& ga = t.grad_buffer(a);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (x[i] > 0.0 && x[i] < 1.0) ga[i] += g[i];
    }
  });
}

Var Tape::mean(Var a) {
  const Tensor& x = value(a);
  require(x.size() > 0, "mean of an empty tensor");
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += x[i];
  Tensor out(1, 1, sum / static_cast<double>(x.size()));
  return push(std::move(out), needs(a), [a](Tape& t, std::size_t self) {
    const double g = t.nodes_[self]->grad[0];
    Tensor& ga = t.grad_buffer(a);
    const double share = g / static_cast<double>(ga.size());
    for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += share;
  });
}

Var Tape::l1_loss(Var a, const Tensor& target) {
  const Tensor& x = value(a);
  require(x.same_shape(target), "l1_loss target shape differs");
  require(x.size() > 0, "l1_loss of an empty tensor");
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += std::abs(x[i] - target[i]);
  Tensor out(1, 1, sum / static_cast<double>(x.size()));
  return push(std::move(out), needs(a), [a, target](Tape& t, std::size_t self) {
    const double g = t.nodes_[self]->grad[0];
    const Tensor& x = t.value(a);
    Tensor& ga = t.grad_buffer(a);
    const double share = g / static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - target[i];
      if (d > 0.0) {
        ga[i] += share;
      } else if (d < 0.0) {
        ga[i] -= share;
      }
    }
  });
}

Var Tape::concat_cols(std::span<const Var> parts) {
  require(!parts.empty(), "concat_cols needs at least one part");
  const std::size_t rows = value(parts[0]).rows();
  std::size_t cols = 0;
  bool any = false;
  for (Var p : parts) {
    require(value(p).rows() == rows, "concat_cols parts differ in height");
    cols += value(p).cols();
    any = any || needs(p);
  }
  Tensor out = make(rows, cols);
  std::size_t offset = 0;
  for (Var p : parts) {
    const Tensor& x = value(p);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < x.cols(); ++j) out(i, offset + j) = x(i, j);
    }
    offset += x.cols();
  }
  std::vector<Var> inputs(parts.begin(), parts.end());
  return push(std::move(out), any, [inputs](Tape& t, std::size_t self) {
    const Tensor& g = t.nodes_[self]->grad;
    std::size_t offset = 0;
    for (Var p : inputs) {
      const std::size_t w = t.value(p).cols();
      if (t.needs(p)) {
        Tensor& gp = t.grad_buffer(p);
        for (std::size_t i = 0; i < g.rows(); ++i) {
          for (std::size_t j = 0; j < w; ++j) gp(i, j) += g(i, offset + j);
        }
      }
      offset += w;
    }
  });
}

Var Tape::scale_rows(Var a, std::vector<double> scale) {
  const Tensor& x = value(a);
  require(scale.size() == x.rows(), "scale_rows needs one factor per row");
  Tensor out = make(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = x(i, j) * scale[i];
  }
  return push(std::move(out), needs(a), [a, scale](Tape& t, std::size_t self) {
    const Tensor& g = t.nodes_[self]->grad;
    Tensor& ga = t.grad_buffer(a);
    for (std::size_t i = 0; i < g.rows(); ++i) {
      for (std::size_t j = 0; j < g.cols(); ++j) ga(i, j) += g(i, j) * scale[i];
    }
  });
}

}  // namespace retouch
