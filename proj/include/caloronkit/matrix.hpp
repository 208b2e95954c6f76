#pragma once

#include <complex>
#include <span>
#include <vector>

namespace caloronkit {

using cplx = std::complex<double>;

/// n-by-n blocks are stored row-major inside flat arrays; these kernels
/// operate on such blocks in place.
namespace mat {

inline void zero(int n, cplx* a) {
  for (int i = 0; i < n * n; ++i) a[i] = cplx(0.0, 0.0);
}

inline void identity(int n, cplx* a) {
  zero(n, a);
  for (int i = 0; i < n; ++i) a[i * n + i] = cplx(1.0, 0.0);
}

/// out += s * a * b, out must not alias a or b.
inline void mul_acc(int n, cplx s, const cplx* a, const cplx* b, cplx* out) {
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      cplx aik = s * a[i * n + k];
      if (aik == cplx(0.0, 0.0)) continue;
      const cplx* brow = b + k * n;
      cplx* orow = out + i * n;
      for (int j = 0; j < n; ++j) orow[j] += aik * brow[j];
    }
}

inline void mul(int n, const cplx* a, const cplx* b, cplx* out) {
  zero(n, out);
  mul_acc(n, cplx(1.0, 0.0), a, b, out);
}

inline cplx trace(int n, const cplx* a) {
  cplx t(0.0, 0.0);
  for (int i = 0; i < n; ++i) t += a[i * n + i];
  return t;
}

inline void adjoint(int n, const cplx* a, cplx* out) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[j * n + i] = std::conj(a[i * n + j]);
}

inline double max_abs(int n, const cplx* a) {
  double m = 0.0;
  for (int i = 0; i < n * n; ++i) m = std::max(m, std::abs(a[i]));
  return m;
}

/// ‖a*a - 1‖∞, the unitarity defect.
inline double unitary_defect(int n, const cplx* a) {
  double m = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx s(0.0, 0.0);
      for (int k = 0; k < n; ++k) s += std::conj(a[k * n + i]) * a[k * n + j];
      if (i == j) s -= 1.0;
      m = std::max(m, std::abs(s));
    }
  return m;
}

// Dense Gaussian/LU paths live in matrix.cpp (backed by Eigen).
void inverse(int n, const cplx* a, cplx* out);
void exponential(int n, const cplx* a, cplx* out);
/// Nearest unitary factor of an invertible matrix (polar decomposition).
void polar_unitary(int n, const cplx* a, cplx* out);

}  // namespace mat

}  // namespace caloronkit
