#pragma once
// Pointwise index sums of the transformed momentum and divergence terms,
// generic in the scalar type so exact rationals can run the same code.

#include <stdexcept>
#include <vector>

namespace fbs {

template <class T>
struct SqMat {
  int n = 0;
  std::vector<T> a;
  SqMat() = default;
  explicit SqMat(int m) : n(m), a(std::size_t(m) * m, T(0)) {}
  T& operator()(int i, int j) { return a[std::size_t(i) * n + j]; }
  const T& operator()(int i, int j) const { return a[std::size_t(i) * n + j]; }
  static SqMat identity(int m) {
    SqMat r(m);
    for (int i = 0; i < m; ++i) r(i, i) = T(1);
    return r;
  }
};

template <class T>
SqMat<T> operator*(const SqMat<T>& x, const SqMat<T>& y) {
  SqMat<T> r(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int k = 0; k < x.n; ++k)
      for (int j = 0; j < x.n; ++j) r(i, j) += x(i, k) * y(k, j);
  return r;
}

// Gauss-Jordan with pivoting on the largest magnitude
template <class T>
SqMat<T> inverse(SqMat<T> m, T& det) {
  using std::abs;
  const int n = m.n;
  SqMat<T> inv = SqMat<T>::identity(n);
  det = T(1);
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r)
      if (abs(m(r, c)) > abs(m(p, c))) p = r;
    if (m(p, c) == T(0)) throw std::domain_error("singular matrix");
    if (p != c) {
      for (int j = 0; j < n; ++j) {
        std::swap(m(p, j), m(c, j));
        std::swap(inv(p, j), inv(c, j));
      }
      det = -det;
    }
    const T piv = m(c, c);
    det *= piv;
    for (int j = 0; j < n; ++j) {
      m(c, j) /= piv;
      inv(c, j) /= piv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || m(r, c) == T(0)) continue;
      const T f = m(r, c);
      for (int j = 0; j < n; ++j) {
        m(r, j) -= f * m(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

enum class FVariant { hanzawa, partial_lagrange };

template <class T>
struct PointData {
  int N = 3;
  std::vector<T> u, dtu, dtpsi;
  SqMat<T> du;                   // du(i, k) = d_k u_i
  std::vector<SqMat<T>> d2u;     // d2u[i](k, l)
  SqMat<T> K;                    // K(i, j) = d_i Psi_j
  std::vector<SqMat<T>> dK;      // dK[m](i, j) = d_m d_i Psi_j
  T mu = T(1), density = T(1);
  FVariant variant = FVariant::hanzawa;
  T kappa = T(0);                // cutoff value, partial-Lagrange variant only
};

template <class T>
struct KernelTerms {
  std::vector<T> f, gvec, gvec_printed;
  T g = T(0), J = T(1), J0 = T(0);
  SqMat<T> V0;
};

template <class T>
KernelTerms<T> evaluate_kernel(const PointData<T>& p) {
  const int N = p.N;
  const SqMat<T> I = SqMat<T>::identity(N);
  SqMat<T> A = I;
  for (std::size_t k = 0; k < A.a.size(); ++k) A.a[k] += p.K.a[k];
  KernelTerms<T> out;
  const SqMat<T> P = inverse(A, out.J);  // I + V0
  out.J0 = out.J - T(1);
  out.V0 = P;
  for (int i = 0; i < N; ++i) out.V0(i, i) -= T(1);
  const SqMat<T>& V0 = out.V0;

  std::vector<SqMat<T>> dV0;
  for (int m = 0; m < N; ++m) {
    SqMat<T> d = P * p.dK[m] * P;
    for (auto& x : d.a) x = -x;
    dV0.push_back(d);
  }

  // dDD[m](i, j) = d_m (D(u) + DD_D(k) grad u)_ij, dDcal[m] the DD_D part only
  std::vector<SqMat<T>> dDfull(N, SqMat<T>(N)), dDcal(N, SqMat<T>(N));
  for (int m = 0; m < N; ++m)
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        T c = T(0);
        for (int k = 0; k < N; ++k)
          c += dV0[m](j, k) * p.du(i, k) + V0(j, k) * p.d2u[i](k, m) + dV0[m](i, k) * p.du(j, k) +
               V0(i, k) * p.d2u[j](k, m);
        dDcal[m](i, j) = c;
        dDfull[m](i, j) = c + p.d2u[i](j, m) + p.d2u[j](i, m);
      }

  std::vector<T> w(N);
  for (int j = 0; j < N; ++j)
    w[j] = p.variant == FVariant::hanzawa ? T(p.u[j] - p.dtpsi[j]) : T((T(1) - p.kappa) * p.u[j]);
  std::vector<T> transport(N, T(0));
  for (int l = 0; l < N; ++l)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) transport[l] += w[j] * (I(j, k) + V0(j, k)) * p.du(l, k);

  out.f.assign(N, T(0));
  for (int i = 0; i < N; ++i) {
    T fi = -transport[i];
    for (int l = 0; l < N; ++l) fi -= p.K(i, l) * (p.dtu[l] + transport[l]);
    fi *= p.density;
    T visc = T(0);
    for (int j = 0; j < N; ++j) visc += dDcal[j](i, j);
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) visc += V0(j, k) * dDfull[k](i, j);
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) visc += p.K(i, l) * (I(j, k) + V0(j, k)) * dDfull[k](l, j);
    out.f[i] = fi + p.mu * visc;
  }

  T div = T(0), contr = T(0);
  for (int j = 0; j < N; ++j) {
    div += p.du(j, j);
    for (int k = 0; k < N; ++k) contr += V0(j, k) * p.du(j, k);
  }
  out.g = -(out.J0 * div + out.J * contr);
  out.gvec.assign(N, T(0));
  out.gvec_printed.assign(N, T(0));
  for (int k = 0; k < N; ++k) {
    T s = T(0);
    for (int j = 0; j < N; ++j) s += V0(j, k) * p.u[j];
    out.gvec_printed[k] = -(out.J * s);
    out.gvec[k] = -(out.J0 * p.u[k]) + out.gvec_printed[k];
  }
  return out;
}

}  // namespace fbs
