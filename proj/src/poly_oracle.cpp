#include "fbstokes/poly_oracle.hpp"

#include <sstream>

#include "fbstokes/rng.hpp"

namespace fbs {

Poly::Poly(const Rational& c) {
  if (c != 0) terms_[Exp{0, 0, 0, 0}] = c;
}

Poly Poly::var(int k) {
  Exp e{0, 0, 0, 0};
  e[k] = 1;
  return monomial(1, e);
}

Poly Poly::monomial(const Rational& c, Exp e) {
  Poly p;
  if (c != 0) p.terms_[e] = c;
  return p;
}

void Poly::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) it = it->second == 0 ? terms_.erase(it) : std::next(it);
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [e, c] : o.terms_) terms_[e] += c;
  prune();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [e, c] : o.terms_) terms_[e] -= c;
  prune();
  return *this;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly r;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      Poly::Exp e;
      for (int k = 0; k < 4; ++k) e[k] = ea[k] + eb[k];
      r.terms_[e] += ca * cb;
    }
  r.prune();
  return r;
}

Poly operator+(Poly a, const Poly& b) { return a += b; }
Poly operator-(Poly a, const Poly& b) { return a -= b; }

Poly Poly::derivative(int k) const {
  Poly r;
  for (const auto& [e, c] : terms_) {
    if (e[k] == 0) continue;
    Exp d = e;
    d[k] -= 1;
    r.terms_[d] += c * e[k];
  }
  r.prune();
  return r;
}

Rational Poly::eval(const std::array<Rational, 4>& at) const {
  Rational s = 0;
  for (const auto& [e, c] : terms_) {
    Rational m = c;
    for (int k = 0; k < 4; ++k)
      for (int p = 0; p < e[k]; ++p) m *= at[k];
    s += m;
  }
  return s;
}

J4 Poly::eval_jet(const std::vector<J4>& y, const J4& t) const {
  J4 s(0.0);
  for (const auto& [e, c] : terms_) {
    J4 m(c.convert_to<double>());
    for (int k = 0; k < 4; ++k) {
      const J4& v = k == 3 ? t : (k < int(y.size()) ? y[k] : J4(0.0));
      for (int p = 0; p < e[k]; ++p) m = m * v;
    }
    s += m;
  }
  return s;
}

int Poly::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[1] + e[2] + e[3]);
  return d;
}

namespace {

using PMat = std::vector<std::vector<Poly>>;

Poly det_poly(const PMat& a) {
  const int n = int(a.size());
  if (n == 1) return a[0][0];
  Poly s;
  for (int c = 0; c < n; ++c) {
    PMat minor;
    for (int r = 1; r < n; ++r) {
      std::vector<Poly> row;
      for (int k = 0; k < n; ++k)
        if (k != c) row.push_back(a[r][k]);
      minor.push_back(row);
    }
    const Poly term = a[0][c] * det_poly(minor);
    if (c % 2 == 0)
      s += term;
    else
      s -= term;
  }
  return s;
}

PMat adjugate(const PMat& a) {
  const int n = int(a.size());
  PMat adj(n, std::vector<Poly>(n));
  if (n == 1) {
    adj[0][0] = Poly(1);
    return adj;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      PMat minor;
      for (int r = 0; r < n; ++r) {
        if (r == j) continue;
        std::vector<Poly> row;
        for (int k = 0; k < n; ++k)
          if (k != i) row.push_back(a[r][k]);
        minor.push_back(row);
      }
      adj[i][j] = (i + j) % 2 == 0 ? det_poly(minor) : -det_poly(minor);
    }
  return adj;
}

// value and first derivatives of num / den at a point
struct RatFn {
  Poly num, den;
  Rational value(const std::array<Rational, 4>& at) const { return num.eval(at) / den.eval(at); }
  Rational d(int m, const std::array<Rational, 4>& at) const {
    const Rational q = den.eval(at);
    return (num.derivative(m).eval(at) * q - num.eval(at) * den.derivative(m).eval(at)) / (q * q);
  }
};

}  // namespace

OracleTerms poly_oracle(const PolyCase& c) {
  const int N = c.N;
  const auto& at = c.at;
  PMat A(N, std::vector<Poly>(N));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) A[i][j] = c.psi[j].derivative(i) + Poly(i == j ? 1 : 0);
  const Poly det = det_poly(A);
  const PMat adj = adjugate(A);

  // V0_jk = (adj_jk - delta_jk det) / det
  std::vector<std::vector<Rational>> V0(N, std::vector<Rational>(N)), K(N, std::vector<Rational>(N));
  PMat Pn(N, std::vector<Poly>(N));
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k) {
      Pn[j][k] = adj[j][k] - (j == k ? det : Poly());
      V0[j][k] = RatFn{Pn[j][k], det}.value(at);
      K[j][k] = c.psi[k].derivative(j).eval(at);
    }
  const Rational J = det.eval(at), J0 = J - 1;

  std::vector<Rational> u(N), dtu(N), dtpsi(N);
  std::vector<std::vector<Rational>> du(N, std::vector<Rational>(N));
  for (int i = 0; i < N; ++i) {
    u[i] = c.u[i].eval(at);
    dtu[i] = c.u[i].derivative(3).eval(at);
    dtpsi[i] = c.psi[i].derivative(3).eval(at);
    for (int k = 0; k < N; ++k) du[i][k] = c.u[i].derivative(k).eval(at);
  }

  // D(u)_ij polynomial and DD_ij = num_ij / det
  PMat Dp(N, std::vector<Poly>(N));
  std::vector<std::vector<RatFn>> DD(N, std::vector<RatFn>(N));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      Dp[i][j] = c.u[i].derivative(j) + c.u[j].derivative(i);
      Poly num;
      for (int k = 0; k < N; ++k) num += Pn[j][k] * c.u[i].derivative(k) + Pn[i][k] * c.u[j].derivative(k);
      DD[i][j] = RatFn{num, det};
    }
  auto dfull = [&](int k, int i, int j) { return Dp[i][j].derivative(k).eval(at) + DD[i][j].d(k, at); };

  auto delta = [](int a, int b) { return Rational(a == b ? 1 : 0); };
  std::vector<Rational> w(N);
  for (int j = 0; j < N; ++j) w[j] = c.variant == FVariant::hanzawa ? Rational(u[j] - dtpsi[j]) : Rational((1 - c.kappa) * u[j]);

  OracleTerms o;
  o.f.assign(N, 0);
  for (int i = 0; i < N; ++i) {
    Rational a = 0;
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) a -= w[j] * (delta(j, k) + V0[j][k]) * du[i][k];
    for (int l = 0; l < N; ++l) {
      Rational inner = dtu[l];
      for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k) inner += w[j] * (delta(j, k) + V0[j][k]) * du[l][k];
      a -= K[i][l] * inner;
    }
    Rational b = 0;
    for (int j = 0; j < N; ++j) b += DD[i][j].d(j, at);
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) b += V0[j][k] * dfull(k, i, j);
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) b += K[i][l] * (delta(j, k) + V0[j][k]) * dfull(k, l, j);
    o.f[i] = c.density * a + c.mu * b;
  }

  Rational div = 0, contr = 0;
  for (int j = 0; j < N; ++j) {
    div += du[j][j];
    for (int k = 0; k < N; ++k) contr += V0[j][k] * du[j][k];
  }
  o.g = -(J0 * div + J * contr);
  o.gvec.assign(N, 0);
  for (int k = 0; k < N; ++k) {
    Rational s = J0 * u[k];
    for (int j = 0; j < N; ++j) s += J * V0[j][k] * u[j];
    o.gvec[k] = -s;
  }
  return o;
}

PointData<Rational> poly_point_data(const PolyCase& c) {
  const int N = c.N;
  const auto& at = c.at;
  PointData<Rational> p;
  p.N = N;
  p.mu = c.mu;
  p.density = c.density;
  p.variant = c.variant;
  p.kappa = c.kappa;
  p.du = SqMat<Rational>(N);
  p.K = SqMat<Rational>(N);
  for (int i = 0; i < N; ++i) {
    p.u.push_back(c.u[i].eval(at));
    p.dtu.push_back(c.u[i].derivative(3).eval(at));
    p.dtpsi.push_back(c.psi[i].derivative(3).eval(at));
    SqMat<Rational> h(N);
    for (int k = 0; k < N; ++k) {
      p.du(i, k) = c.u[i].derivative(k).eval(at);
      p.K(i, k) = c.psi[k].derivative(i).eval(at);
      for (int l = 0; l < N; ++l) h(k, l) = c.u[i].derivative(k).derivative(l).eval(at);
    }
    p.d2u.push_back(h);
  }
  for (int m = 0; m < N; ++m) {
    SqMat<Rational> d(N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) d(i, j) = c.psi[j].derivative(i).derivative(m).eval(at);
    p.dK.push_back(d);
  }
  return p;
}

VecFieldST poly_field(std::vector<Poly> comps) {
  return [comps](const std::vector<J4>& y, const J4& t) {
    std::vector<J4> out;
    for (const Poly& p : comps) out.push_back(p.eval_jet(y, t));
    return out;
  };
}

PolyCase random_poly_case(int N, std::uint64_t seed, int denominator) {
  CounterRng rng(seed, 101);
  auto coef = [&](int span) { return Rational(int(rng.next() % (2 * span + 1)) - span, denominator); };
  std::vector<Poly::Exp> quad;
  for (int a = 0; a < N; ++a) {
    Poly::Exp e{0, 0, 0, 0};
    e[a] = 1;
    quad.push_back(e);
    for (int b = a; b < N; ++b) {
      Poly::Exp f{0, 0, 0, 0};
      f[a] += 1;
      f[b] += 1;
      quad.push_back(f);
    }
  }
  PolyCase c;
  c.N = N;
  for (int i = 0; i < N; ++i) {
    Poly u = Poly(coef(8));
    Poly psi = Poly(coef(2));
    for (const auto& e : quad) {
      u += Poly::monomial(coef(8), e);
      psi += Poly::monomial(coef(1), e);
      Poly::Exp et = e;
      et[3] = 1;
      u += Poly::monomial(coef(4), et);
      psi += Poly::monomial(coef(1), et);
    }
    u += Poly::monomial(coef(4), {0, 0, 0, 1});
    psi += Poly::monomial(coef(2), {0, 0, 0, 1});
    c.u.push_back(u);
    c.psi.push_back(psi);
  }
  c.mu = Rational(1 + int(rng.next() % 4), 2);
  for (int k = 0; k < N; ++k) c.at[k] = Rational(int(rng.next() % 9) - 4, 8);
  for (int k = N; k < 3; ++k) c.at[k] = 0;
  c.at[3] = Rational(int(rng.next() % 5), 8);
  return c;
}

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

}  // namespace fbs
