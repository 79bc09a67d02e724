#include "chaincluster/eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "chaincluster/errors.hpp"

namespace chaincluster {

namespace {

constexpr int kJacobiMaxSize = 512;
constexpr int kJacobiMaxSweeps = 100;
constexpr double kOffDiagonalTolerance = 1e-12;

double off_diagonal_norm(const Matrix& a) {
  const Eigen::Index n = a.rows();
  double sum = 0.0;
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index q = p + 1; q < n; ++q) sum += 2.0 * a(p, q) * a(p, q);
  return std::sqrt(sum);
}

// Cyclic-by-row Jacobi. Unconditionally stable and order-deterministic.
void jacobi_eig(Matrix& a, Matrix& v) {
  const Eigen::Index n = a.rows();
  v = Matrix::Identity(n, n);
  const double scale = std::max(a.norm(), 1e-300);

  for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= kOffDiagonalTolerance * scale) return;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        const double app = a(p, p);
        const double aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          const double aip = a(i, p);
          const double aiq = a(i, q);
          a(i, p) = aip - s * (aiq + tau * aip);
          a(i, q) = aiq + s * (aip - tau * aiq);
          a(p, i) = a(i, p);
          a(q, i) = a(i, q);
        }
        for (Eigen::Index i = 0; i < n; ++i) {
          const double vip = v(i, p);
          const double viq = v(i, q);
          v(i, p) = vip - s * (viq + tau * vip);
          v(i, q) = viq + s * (vip - tau * viq);
        }
      }
    }
  }
  if (off_diagonal_norm(a) > kOffDiagonalTolerance * scale)
    throw NumericalError("Jacobi eigensolver did not converge in " +
                         std::to_string(kJacobiMaxSweeps) + " sweeps");
}

// Householder reduction to tridiagonal form, accumulating the transform in z.
// d receives the diagonal, e the subdiagonal (e[0] unused).
void tridiagonalize(Matrix& z, Vector& d, Vector& e) {
  const Eigen::Index n = z.rows();
  for (Eigen::Index i = n - 1; i >= 1; --i) {
    const Eigen::Index l = i - 1;
    double h = 0.0;
    double scale = 0.0;
    if (l > 0) {
      for (Eigen::Index k = 0; k <= l; ++k) scale += std::abs(z(i, k));
      if (scale == 0.0) {
        e[i] = z(i, l);
      } else {
        for (Eigen::Index k = 0; k <= l; ++k) {
          z(i, k) /= scale;
          h += z(i, k) * z(i, k);
        }
        double f = z(i, l);
        double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        z(i, l) = f - g;
        f = 0.0;
        for (Eigen::Index j = 0; j <= l; ++j) {
          z(j, i) = z(i, j) / h;
          g = 0.0;
          for (Eigen::Index k = 0; k <= j; ++k) g += z(j, k) * z(i, k);
          for (Eigen::Index k = j + 1; k <= l; ++k) g += z(k, j) * z(i, k);
          e[j] = g / h;
          f += e[j] * z(i, j);
        }
        const double hh = f / (h + h);
        for (Eigen::Index j = 0; j <= l; ++j) {
          f = z(i, j);
          e[j] = g = e[j] - hh * f;
          for (Eigen::Index k = 0; k <= j; ++k)
            z(j, k) -= f * e[k] + g * z(i, k);
        }
      }
    } else {
      e[i] = z(i, l);
    }
    d[i] = h;
  }
  d[0] = 0.0;
  e[0] = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index l = i - 1;
    if (d[i] != 0.0) {
      for (Eigen::Index j = 0; j <= l; ++j) {
        double g = 0.0;
        for (Eigen::Index k = 0; k <= l; ++k) g += z(i, k) * z(k, j);
        for (Eigen::Index k = 0; k <= l; ++k) z(k, j) -= g * z(k, i);
      }
    }
    d[i] = z(i, i);
    z(i, i) = 1.0;
    for (Eigen::Index j = 0; j <= l; ++j) {
      z(j, i) = 0.0;
      z(i, j) = 0.0;
    }
  }
}

// Implicit-shift QL on a tridiagonal matrix, rotating the columns of z along.
void tridiagonal_ql(Vector& d, Vector& e, Matrix& z) {
  const Eigen::Index n = d.size();
  for (Eigen::Index i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  for (Eigen::Index l = 0; l < n; ++l) {
    int iterations = 0;
    Eigen::Index m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd)
          break;
      }
      if (m != l) {
        if (iterations++ == 50)
          throw NumericalError("QL eigensolver did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        bool underflow = false;
        for (Eigen::Index i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (Eigen::Index k = 0; k < n; ++k) {
            f = z(k, i + 1);
            z(k, i + 1) = s * z(k, i) + c * f;
            z(k, i) = c * z(k, i) - s * f;
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

void fix_signs(Matrix& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      const double v = vectors(i, j);
      if (std::abs(v) > 1e-12) {
        if (v < 0.0) vectors.col(j) = -vectors.col(j);
        break;
      }
    }
  }
}

}  // namespace

EigenResult sym_eig(const Matrix& m) {
  if (m.rows() != m.cols())
    throw ValidationError("sym_eig: matrix must be square");
  const Eigen::Index n = m.rows();
  if (n == 0) throw ValidationError("sym_eig: matrix is empty");

  const double max_abs = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * std::max(max_abs, 1e-300) && asym > 0.0)
    throw ValidationError("sym_eig: matrix is not symmetric");

  Matrix a = 0.5 * (m + m.transpose());
  Vector values(n);
  Matrix vectors;

  if (n <= kJacobiMaxSize) {
    jacobi_eig(a, vectors);
    values = a.diagonal();
  } else {
    vectors = a;
    Vector e(n);
    tridiagonalize(vectors, values, e);
    tridiagonal_ql(values, e, vectors);
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) {
                     return values[i] > values[j];
                   });

  EigenResult result;
  result.values.resize(n);
  result.vectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    result.values[j] = values[order[j]];
    result.vectors.col(j) = vectors.col(order[j]);
  }
  fix_signs(result.vectors);
  return result;
}

Matrix sample_covariance(const Matrix& signals, bool center) {
  const Eigen::Index t = signals.cols();
  if (t < 1)
    throw ValidationError("sample_covariance: need at least one instance");

  Matrix y = signals;
  if (center) y.colwise() -= y.rowwise().mean();

  Matrix c = (y * y.transpose()) / static_cast<double>(t);
  c = 0.5 * (c + c.transpose()).eval();
  return c;
}

}  // namespace chaincluster
