#pragma once
// Space-time fields on R^N (N <= 3) evaluated through second-order jets.
// Jet variables 0..N-1 are the space coordinates, variable 3 is time.

#include <functional>
#include <vector>

#include "fbstokes/common.hpp"
#include "fbstokes/jet.hpp"
#include "fbstokes/rng.hpp"

namespace fbs {

using J4 = Jet<4>;
inline constexpr int kTimeVar = 3;

using VecFieldST = std::function<std::vector<J4>(const std::vector<J4>& y, const J4& t)>;
using ScalarFieldST = std::function<J4(const std::vector<J4>& y, const J4& t)>;

struct FieldSample {
  Vec v;
  Mat grad;               // grad(i, k) = d_k v_i
  std::vector<Mat> hess;  // hess[i](k, l) = d_k d_l v_i
  Vec dt;
};

struct ScalarSample {
  double v = 0;
  Vec grad;
  Mat hess;
  double dt = 0;
};

inline std::vector<J4> seed_point(const Vec& y) {
  std::vector<J4> x(y.size());
  for (int k = 0; k < int(y.size()); ++k) x[k] = J4::variable(y[k], k);
  return x;
}

inline FieldSample sample_field(const VecFieldST& f, const Vec& y, double t) {
  const int N = int(y.size());
  const std::vector<J4> r = f(seed_point(y), J4::variable(t, kTimeVar));
  if (int(r.size()) != N) throw DomainError("field returned wrong number of components");
  FieldSample s;
  s.v.resize(N);
  s.dt.resize(N);
  s.grad.resize(N, N);
  s.hess.assign(N, Mat(N, N));
  for (int i = 0; i < N; ++i) {
    s.v[i] = r[i].v;
    s.dt[i] = r[i].g[kTimeVar];
    for (int k = 0; k < N; ++k) {
      s.grad(i, k) = r[i].g[k];
      for (int l = 0; l < N; ++l) s.hess[i](k, l) = r[i].h[k][l];
    }
  }
  return s;
}

inline ScalarSample sample_scalar(const ScalarFieldST& f, const Vec& y, double t) {
  const int N = int(y.size());
  const J4 r = f(seed_point(y), J4::variable(t, kTimeVar));
  ScalarSample s;
  s.v = r.v;
  s.dt = r.g[kTimeVar];
  s.grad.resize(N);
  s.hess.resize(N, N);
  for (int k = 0; k < N; ++k) {
    s.grad[k] = r.g[k];
    for (int l = 0; l < N; ++l) s.hess(k, l) = r.h[k][l];
  }
  return s;
}

inline Vec eval_field(const VecFieldST& f, const Vec& y, double t) {
  std::vector<J4> x(y.size());
  for (int k = 0; k < int(y.size()); ++k) x[k] = J4(y[k]);
  const std::vector<J4> r = f(x, J4(t));
  Vec v(r.size());
  for (int i = 0; i < int(r.size()); ++i) v[i] = r[i].v;
  return v;
}

inline VecFieldST zero_field(int N) {
  return [N](const std::vector<J4>&, const J4&) { return std::vector<J4>(N, J4(0.0)); };
}

struct SineMode {
  int component = 0;
  double amp = 0;
  std::vector<double> k;  // wave vector, length N
  double omega = 0;       // time frequency
  double phase = 0;
};

// v_c(y, t) = sum over modes of component c: amp sin(k.y + omega t + phase)
inline VecFieldST sine_field(int N, std::vector<SineMode> modes) {
  return [N, modes](const std::vector<J4>& y, const J4& t) {
    std::vector<J4> out(N, J4(0.0));
    for (const auto& m : modes) {
      J4 arg = m.omega * t + m.phase;
      for (int k = 0; k < N && k < int(m.k.size()); ++k) arg += m.k[k] * y[k];
      out[m.component] += m.amp * sin(arg);
    }
    return out;
  };
}

inline std::vector<SineMode> random_sine_modes(int N, CounterRng& rng, int per_component, double amp,
                                               double kmax = 1.5, bool time_dependent = true) {
  std::vector<SineMode> modes;
  for (int c = 0; c < N; ++c)
    for (int j = 0; j < per_component; ++j) {
      SineMode m;
      m.component = c;
      m.amp = amp * rng.uniform(-1.0, 1.0);
      for (int k = 0; k < N; ++k) m.k.push_back(rng.uniform(-kmax, kmax));
      m.omega = time_dependent ? rng.uniform(-1.0, 1.0) : 0.0;
      m.phase = rng.uniform(0.0, 2.0 * kPi);
      modes.push_back(m);
    }
  return modes;
}

}  // namespace fbs
