#pragma once

// Dense kernels for small matrices: matrix exponential, symmetric and general
// eigensolvers, Cholesky. Eigen supplies storage and products; the
// factorizations themselves live here.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "pulsekit/core.hpp"

namespace pulsekit {

template <typename Scalar>
using ComplexEigenvalues = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
struct SymmetricEigen {
  Vector<Scalar> values;   // ascending
  Matrix<Scalar> vectors;  // orthonormal columns, vectors.col(i) pairs with values(i)
};

/// e^{tA} by scaling and squaring with the diagonal (6,6) Pade approximant.
/// The scaling keeps ||tA / 2^s||_inf <= 0.5, where the approximant's
/// truncation error is below double precision.
template <typename Derived>
Matrix<typename Derived::Scalar> mat_exp(const Eigen::MatrixBase<Derived>& a, typename Derived::Scalar t) {
  using Scalar = typename Derived::Scalar;
  require_square(a, "mat_exp input");
  require_finite(a, "mat_exp input");
  if (!std::isfinite(t)) throw Error(ErrorKind::InvalidInput, "mat_exp time scalar is not finite");

  const Eigen::Index n = a.rows();
  const Matrix<Scalar> ident = Matrix<Scalar>::Identity(n, n);
  if (t == Scalar(0)) return ident;

  Matrix<Scalar> x = t * a;
  const Scalar norm = inf_norm(x);
  int squarings = 0;
  if (norm > Scalar(0.5)) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / Scalar(0.5))));
    x /= std::ldexp(Scalar(1), squarings);
  }

  constexpr int order = 6;
  Matrix<Scalar> numer = ident;
  Matrix<Scalar> denom = ident;
  Matrix<Scalar> power = ident;
  Scalar coeff = 1;
  for (int k = 1; k <= order; ++k) {
    coeff *= Scalar(order - k + 1) / Scalar((2 * order - k + 1) * k);
    power = power * x;
    numer += coeff * power;
    denom += (k % 2 == 0 ? coeff : -coeff) * power;
  }
  Matrix<Scalar> result = denom.partialPivLu().solve(numer);
  for (int i = 0; i < squarings; ++i) result = result * result;
  if (!all_finite(result)) throw Error(ErrorKind::Overflow, "mat_exp result overflowed");
  return result;
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Sweeps stop once the off-diagonal Frobenius norm drops to 1e-13 ||S||_F.
template <typename Derived>
SymmetricEigen<typename Derived::Scalar> sym_eig(const Eigen::MatrixBase<Derived>& s) {
  using Scalar = typename Derived::Scalar;
  require_square(s, "sym_eig input");
  require_finite(s, "sym_eig input");

  const Eigen::Index n = s.rows();
  const Scalar scale = max_norm(s);
  const Scalar asym = max_norm(s - s.transpose());
  if (asym > Scalar(1e-12) * scale)
    throw Error(ErrorKind::Precondition, "sym_eig input is not symmetric (asymmetry " + std::to_string(double(asym)) + ")");

  Matrix<Scalar> a = (s + s.transpose()) / Scalar(2);
  Matrix<Scalar> v = Matrix<Scalar>::Identity(n, n);
  const Scalar tol = Scalar(1e-13) * a.norm();

  auto off_diagonal = [&] {
    Scalar sum = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) sum += a(i, j) * a(i, j);
    return std::sqrt(sum);
  };

  constexpr int max_sweeps = 100;
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (off_diagonal() <= tol) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        if (apq == Scalar(0)) continue;
        const Scalar theta = (a(q, q) - a(p, p)) / (Scalar(2) * apq);
        Scalar tan;
        if (std::abs(theta) > Scalar(1e150)) {
          tan = Scalar(0.5) / theta;
        } else {
          tan = (theta >= 0 ? Scalar(1) : Scalar(-1)) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        }
        const Scalar c = 1 / std::sqrt(tan * tan + 1);
        const Scalar sn = tan * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }
  if (sweep == max_sweeps && off_diagonal() > tol)
    throw NumericalFailure("Jacobi sweeps did not converge", a.template cast<double>());

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });

  SymmetricEigen<Scalar> out{Vector<Scalar>(n), Matrix<Scalar>(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto src = order[static_cast<std::size_t>(i)];
    out.values(i) = a(src, src);
    out.vectors.col(i) = v.col(src);
  }
  return out;
}

namespace detail {

// Diagonal similarity by powers of two that equalises row and column norms.
template <typename Scalar>
void balance(Matrix<Scalar>& a) {
  constexpr Scalar radix = 2;
  constexpr Scalar radix_sq = radix * radix;
  const Eigen::Index n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      Scalar r = 0, c = 0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == Scalar(0) || r == Scalar(0)) continue;
      Scalar g = r / radix;
      Scalar f = 1;
      const Scalar s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix_sq;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix_sq;
      }
      if ((c + r) / f < Scalar(0.95) * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

// Householder reduction to upper Hessenberg form, in place.
template <typename Scalar>
void hessenberg(Matrix<Scalar>& a) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index m = n - k - 1;
    Vector<Scalar> v = a.col(k).tail(m);
    const Scalar xnorm = v.norm();
    if (xnorm == Scalar(0)) continue;
    const Scalar alpha = v(0) >= 0 ? -xnorm : xnorm;
    v(0) -= alpha;
    const Scalar vnorm = v.norm();
    if (vnorm == Scalar(0)) continue;
    v /= vnorm;
    a.bottomRows(m) -= Scalar(2) * v * (v.transpose() * a.bottomRows(m));
    a.rightCols(m) -= Scalar(2) * (a.rightCols(m) * v) * v.transpose();
    a(k + 1, k) = alpha;
    a.col(k).tail(m - 1).setZero();
  }
}

}  // namespace detail

/// All eigenvalues of a real square matrix: balancing, Householder
/// Hessenberg reduction, then Francis double-shift QR with 2x2 deflation.
/// Complex pairs are returned as exact conjugates.
template <typename Derived>
ComplexEigenvalues<typename Derived::Scalar> general_eigenvalues(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  require_square(m, "general_eigenvalues input");
  require_finite(m, "general_eigenvalues input");

  const Eigen::Index n = m.rows();
  Matrix<Scalar> a = m;
  detail::balance(a);
  detail::hessenberg(a);

  std::vector<Scalar> wr(static_cast<std::size_t>(n)), wi(static_cast<std::size_t>(n));
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  Scalar anorm = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = std::max<Eigen::Index>(i - 1, 0); j < n; ++j) anorm += abs(a(i, j));

  const long max_iterations = 100L * static_cast<long>(n);
  long total_its = 0;
  Eigen::Index nn = n - 1;
  Scalar shift = 0;
  auto sign_of = [](Scalar mag, Scalar ref) { return ref >= 0 ? abs(mag) : -abs(mag); };

  while (nn >= 0) {
    int its = 0;
    Eigen::Index l;
    do {
      for (l = nn; l > 0; --l) {
        Scalar s = abs(a(l - 1, l - 1)) + abs(a(l, l));
        if (s == Scalar(0)) s = anorm;
        if (abs(a(l, l - 1)) <= eps * s) {
          a(l, l - 1) = 0;
          break;
        }
      }
      Scalar x = a(nn, nn);
      if (l == nn) {
        wr[nn] = x + shift;
        wi[nn] = 0;
        --nn;
      } else {
        Scalar y = a(nn - 1, nn - 1);
        Scalar w = a(nn, nn - 1) * a(nn - 1, nn);
        if (l == nn - 1) {
          const Scalar p = Scalar(0.5) * (y - x);
          const Scalar q = p * p + w;
          Scalar z = std::sqrt(abs(q));
          x += shift;
          if (q >= 0) {
            z = p + sign_of(z, p);
            wr[nn - 1] = wr[nn] = x + z;
            if (z != Scalar(0)) wr[nn] = x - w / z;
            wi[nn - 1] = wi[nn] = 0;
          } else {
            wr[nn - 1] = wr[nn] = x + p;
            wi[nn - 1] = z;
            wi[nn] = -z;
          }
          nn -= 2;
        } else {
          if (total_its >= max_iterations)
            throw NumericalFailure("Francis QR iteration did not converge", a.template cast<double>());
          if (its > 0 && its % 10 == 0) {
            shift += x;
            for (Eigen::Index i = 0; i <= nn; ++i) a(i, i) -= x;
            const Scalar s = abs(a(nn, nn - 1)) + abs(a(nn - 1, nn - 2));
            y = x = Scalar(0.75) * s;
            w = Scalar(-0.4375) * s * s;
          }
          ++its;
          ++total_its;
          Eigen::Index mm;
          Scalar p = 0, q = 0, r = 0, z;
          for (mm = nn - 2; mm >= l; --mm) {
            z = a(mm, mm);
            r = x - z;
            Scalar s = y - z;
            p = (r * s - w) / a(mm + 1, mm) + a(mm, mm + 1);
            q = a(mm + 1, mm + 1) - z - r - s;
            r = a(mm + 2, mm + 1);
            s = abs(p) + abs(q) + abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (mm == l) break;
            const Scalar u = abs(a(mm, mm - 1)) * (abs(q) + abs(r));
            const Scalar v = abs(p) * (abs(a(mm - 1, mm - 1)) + abs(z) + abs(a(mm + 1, mm + 1)));
            if (u <= eps * v) break;
          }
          for (Eigen::Index i = mm; i < nn - 1; ++i) {
            a(i + 2, i) = 0;
            if (i != mm) a(i + 2, i - 1) = 0;
          }
          for (Eigen::Index k = mm; k < nn; ++k) {
            if (k != mm) {
              p = a(k, k - 1);
              q = a(k + 1, k - 1);
              r = 0;
              if (k + 1 != nn) r = a(k + 2, k - 1);
              if ((x = abs(p) + abs(q) + abs(r)) != Scalar(0)) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            const Scalar s = sign_of(std::sqrt(p * p + q * q + r * r), p);
            if (s == Scalar(0)) continue;
            if (k == mm) {
              if (l != mm) a(k, k - 1) = -a(k, k - 1);
            } else {
              a(k, k - 1) = -s * x;
            }
            p += s;
            x = p / s;
            y = q / s;
            z = r / s;
            q /= p;
            r /= p;
            for (Eigen::Index j = k; j <= nn; ++j) {
              p = a(k, j) + q * a(k + 1, j);
              if (k + 1 != nn) {
                p += r * a(k + 2, j);
                a(k + 2, j) -= p * z;
              }
              a(k + 1, j) -= p * y;
              a(k, j) -= p * x;
            }
            const Eigen::Index mmin = nn < k + 3 ? nn : k + 3;
            for (Eigen::Index i = l; i <= mmin; ++i) {
              p = x * a(i, k) + y * a(i, k + 1);
              if (k + 1 != nn) {
                p += z * a(i, k + 2);
                a(i, k + 2) -= p * r;
              }
              a(i, k + 1) -= p * q;
              a(i, k) -= p;
            }
          }
        }
      }
    } while (l + 1 < nn);
  }

  ComplexEigenvalues<Scalar> out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = std::complex<Scalar>(wr[i], wi[i]);
  return out;
}

/// Largest eigenvalue modulus.
template <typename Derived>
typename Derived::Scalar spectral_radius_general(const Eigen::MatrixBase<Derived>& m) {
  const auto values = general_eigenvalues(m);
  return values.cwiseAbs().maxCoeff();
}

/// Lower Cholesky factor L with L L^T = M.
template <typename Derived>
Matrix<typename Derived::Scalar> cholesky(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  require_square(m, "cholesky input");
  require_finite(m, "cholesky input");
  const Eigen::Index n = m.rows();
  Matrix<Scalar> l = Matrix<Scalar>::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Scalar diag = m(j, j);
    for (Eigen::Index k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > Scalar(0)))
      throw Error(ErrorKind::NotPositiveDefinite, "cholesky: non-positive pivot at index " + std::to_string(j));
    l(j, j) = std::sqrt(diag);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      Scalar sum = m(i, j);
      for (Eigen::Index k = 0; k < j; ++k) sum -= l(i, k) * l(j, k);
      l(i, j) = sum / l(j, j);
    }
  }
  return l;
}

}  // namespace pulsekit
