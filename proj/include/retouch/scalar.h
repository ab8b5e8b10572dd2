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

#include <array>
#include <cmath>
#include <cstddef>

namespace retouch {

inline double value_of(double x) { return x; }

// Forward-mode dual number carrying N partial derivatives. The per-pixel
// operator code is written once as a template over the scalar type; running
// it on Dual<N> yields exact chain-rule Jacobians.
template <std::size_t N>
struct Dual {
  double v = 0.0;
  std::array<double, N> d{};

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT: implicit promotion of constants

  static Dual variable(double value, std::size_t index) {
    Dual x(value);
    x.d[index] = 1.0;
    return x;
  }
};

template <std::size_t N>
double value_of(const Dual<N>& x) {
  return x.v;
}

template <std::size_t N>
Dual<N> operator+(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> out(a.v + b.v);
  for (std::size_t i = 0; i < N; ++i) out.d[i] = a.d[i] + b.d[i];
  return out;
}

template <std::size_t N>
Dual<N> operator-(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> out(a.v - b.v);
  for (std::size_t i = 0; i < N; ++i) out.d[i] = a.d[i] - b.d[i];
  return out;
}

template <std::size_t N>
Dual<N> operator-(const Dual<N>& a) {
  Dual<N> out(-a.v);
  for (std::size_t i = 0; i < N; ++i) out.d[i] = -a.d[i];
  return out;
}

template <std::size_t N>
Dual<N> operator*(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> out(a.v * b.v);
  for (std::size_t i = 0; i < N; ++i) out.d[i] = a.d[i] * b.v + a.v * b.d[i];
  return out;
}

template <std::size_t N>
Dual<N> operator/(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> out(a.v / b.v);
  const double inv = 1.0 / b.v;
  for (std::size_t i = 0; i < N; ++i) {
    out.d[i] = (a.d[i] - out.v * b.d[i]) * inv;
  }
  return out;
}

template <std::size_t N>
Dual<N> operator+(const Dual<N>& a, double b) { return a + Dual<N>(b); }
template <std::size_t N>
Dual<N> operator+(double a, const Dual<N>& b) { return Dual<N>(a) + b; }
template <std::size_t N>
Dual<N> operator-(const Dual<N>& a, double b) { return a - Dual<N>(b); }
template <std::size_t N>
Dual<N> operator-(double a, const Dual<N>& b) { return Dual<N>(a) - b; }
template <std::size_t N>
Dual<N> operator*(const Dual<N>& a, double b) {
  Dual<N> out(a.v * b);
  for (std::size_t i = 0; i < N; ++i) out.d[i] = a.d[i] * b;
  return out;
}
template <std::size_t N>
Dual<N> operator*(double a, const Dual<N>& b) { return b * a; }
template <std::size_t N>
Dual<N> operator/(const Dual<N>& a, double b) { return a / Dual<N>(b); }
template <std::size_t N>
Dual<N> operator/(double a, const Dual<N>& b) { return Dual<N>(a) / b; }

template <std::size_t N>
Dual<N> cos(const Dual<N>& a) {
  Dual<N> out(std::cos(a.v));
  const double s = -std::sin(a.v);
  for (std::size_t i = 0; i < N; ++i) out.d[i] = s * a.d[i];
  return out;
}

template <std::size_t N>
Dual<N> exp2(const Dual<N>& a) {
  Dual<N> out(std::exp2(a.v));
  const double s = out.v * std::log(2.0);
  for (std::size_t i = 0; i < N; ++i) out.d[i] = s * a.d[i];
  return out;
}

// Scalar helpers shared by double and Dual code paths.
inline double cos(double x) { return std::cos(x); }
inline double exp2(double x) { return std::exp2(x); }

}  // namespace retouch
