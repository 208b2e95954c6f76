#include "caloronkit/matrix.hpp"

#include <Eigen/Dense>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

namespace caloronkit {
namespace mat {

using EMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EMap = Eigen::Map<EMat>;
using CMap = Eigen::Map<const EMat>;

void inverse(int n, const cplx* a, cplx* out) {
  CMap A(a, n, n);
  EMap O(out, n, n);
  Eigen::PartialPivLU<EMat> lu(A);
  double rcond = lu.rcond();
  if (!(rcond > 1e-14))
    throw std::invalid_argument("matrix inverse: value numerically singular");
  O = lu.inverse();
}

void exponential(int n, const cplx* a, cplx* out) {
  CMap A(a, n, n);
  EMap O(out, n, n);
  O = A.exp();
}

void polar_unitary(int n, const cplx* a, cplx* out) {
  CMap A(a, n, n);
  EMap O(out, n, n);
  Eigen::JacobiSVD<EMat> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  O = svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace mat
}  // namespace caloronkit
