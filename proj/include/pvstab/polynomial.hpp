#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace pvstab {

// Coefficients in ascending powers: c(0) + c(1) x + ...
template <typename Scalar> using Polynomial = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
Polynomial<Scalar> poly(std::initializer_list<Scalar> c) {
  Polynomial<Scalar> p(static_cast<Eigen::Index>(c.size()));
  Eigen::Index i = 0;
  for (const Scalar& x : c) p(i++) = x;
  return p;
}

template <typename Scalar>
Polynomial<Scalar> poly_mul(const Polynomial<Scalar>& a, const Polynomial<Scalar>& b) {
  Polynomial<Scalar> r = Polynomial<Scalar>::Zero(a.size() + b.size() - 1);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) r(i + j) += a(i) * b(j);
  return r;
}

template <typename Scalar>
Polynomial<Scalar> poly_add(const Polynomial<Scalar>& a, const Polynomial<Scalar>& b) {
  Polynomial<Scalar> r = Polynomial<Scalar>::Zero(std::max(a.size(), b.size()));
  r.head(a.size()) += a;
  r.head(b.size()) += b;
  return r;
}

template <typename Scalar>
Polynomial<Scalar> poly_sub(const Polynomial<Scalar>& a, const Polynomial<Scalar>& b) {
  return poly_add<Scalar>(a, -b);
}

template <typename Scalar>
Polynomial<Scalar> poly_pow(const Polynomial<Scalar>& a, int n) {
  Polynomial<Scalar> r = Polynomial<Scalar>::Ones(1);
  for (int i = 0; i < n; ++i) r = poly_mul(r, a);
  return r;
}

template <typename Scalar>
Polynomial<Scalar> poly_derivative(const Polynomial<Scalar>& a) {
  if (a.size() <= 1) return Polynomial<Scalar>::Zero(1);
  Polynomial<Scalar> r(a.size() - 1);
  for (Eigen::Index i = 1; i < a.size(); ++i) r(i - 1) = Scalar(double(i)) * a(i);
  return r;
}

// Composition a(q(x)).
template <typename Scalar>
Polynomial<Scalar> poly_compose(const Polynomial<Scalar>& a, const Polynomial<Scalar>& q) {
  Polynomial<Scalar> r = a.tail(1);
  for (Eigen::Index i = a.size() - 2; i >= 0; --i) {
    r = poly_mul(r, q);
    r(0) += a(i);
  }
  return r;
}

template <typename Scalar, typename X>
auto poly_eval(const Polynomial<Scalar>& a, const X& x) {
  using R = decltype(Scalar() * x);
  R r(0);
  for (Eigen::Index i = a.size() - 1; i >= 0; --i) r = r * x + R(a(i));
  return r;
}

// Drops exactly-zero leading coefficients.
template <typename Scalar>
Polynomial<Scalar> poly_trim(const Polynomial<Scalar>& a) {
  Eigen::Index n = a.size();
  while (n > 1 && a(n - 1) == Scalar(0)) --n;
  return a.head(n);
}

// Parlett-Reinsch balancing with powers of two; keeps eigenvalues exact.
template <typename MatrixType>
void balance_in_place(MatrixType& A) {
  using std::abs;
  const Eigen::Index n = A.rows();
  const double radix = 2.0;
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += abs(A(j, i));
        r += abs(A(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix, f = 1.0;
      const double s = c + r;
      while (c < g) { f *= radix; c *= radix * radix; }
      g = r * radix;
      while (c > g) { f /= radix; c /= radix * radix; }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        A.row(i) /= f;
        A.col(i) *= f;
      }
    }
  }
}

namespace detail {

template <int N>
Eigen::VectorXcd companion_eigenvalues(const Polynomial<std::complex<double>>& a, Eigen::Index n) {
  using Mat = Eigen::Matrix<std::complex<double>, N, N>;
  Mat C = Mat::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) C(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) C(i, n - 1) = -a(i) / a(n);
  balance_in_place(C);
  Eigen::ComplexEigenSolver<Mat> es(C, false);
  return es.eigenvalues();
}

}  // namespace detail

// All roots of a polynomial via the eigenvalues of its balanced companion matrix.
inline Eigen::VectorXcd companion_roots(const Polynomial<std::complex<double>>& coeffs) {
  const Polynomial<std::complex<double>> a = poly_trim(coeffs);
  const Eigen::Index n = a.size() - 1;
  if (n < 1) return Eigen::VectorXcd(0);
  if (n == 8) return detail::companion_eigenvalues<8>(a, n);
  return detail::companion_eigenvalues<Eigen::Dynamic>(a, n);
}

inline Eigen::VectorXcd companion_roots(const Polynomial<double>& coeffs) {
  return companion_roots(Polynomial<std::complex<double>>(coeffs.cast<std::complex<double>>()));
}

// Newton iterations in extended precision; returns the best iterate seen.
inline std::complex<double> polish_root(const Polynomial<std::complex<double>>& a,
                                        std::complex<double> z0, int max_iter = 30) {
  using LC = std::complex<long double>;
  Polynomial<LC> al = a.cast<LC>();
  Polynomial<LC> d = poly_derivative(al);
  LC z(z0.real(), z0.imag());
  LC best = z;
  long double best_f = std::abs(poly_eval(al, z));
  for (int it = 0; it < max_iter; ++it) {
    const LC f = poly_eval(al, z);
    const LC df = poly_eval(d, z);
    if (df == LC(0)) break;
    const LC step = f / df;
    z -= step;
    const long double fz = std::abs(poly_eval(al, z));
    if (fz < best_f) { best_f = fz; best = z; }
    if (std::abs(step) <= 1e-18L * std::abs(z)) break;
  }
  return {double(best.real()), double(best.imag())};
}

}  // namespace pvstab
