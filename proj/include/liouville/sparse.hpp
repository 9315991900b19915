#pragma once

#include <Eigen/Sparse>
#include <complex>
#include <string>
#include <vector>

namespace liouville {

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using SpMatC = Eigen::SparseMatrix<std::complex<double>, Eigen::RowMajor, int>;
using Vec = Eigen::VectorXd;
using VecC = Eigen::VectorXcd;
using Triplet = Eigen::Triplet<double, int>;

/// Serial kernels are kept as the reference for the OpenMP ones.
enum class Exec { serial, parallel };

/// Builds a compressed matrix from triplets; duplicates are summed and
/// entries that sum to exactly zero are dropped.
SpMat from_triplets(int rows, int cols, const std::vector<Triplet>& t);

struct SparsityAudit {
  int max_row_nnz = 0;
  int max_col_nnz = 0;
  double max_abs = 0.0;
};
SparsityAudit audit(const SpMat& m);

void spmv_serial(const SpMat& a, const Vec& x, Vec& y);
void spmv_parallel(const SpMat& a, const Vec& x, Vec& y);
inline void spmv(const SpMat& a, const Vec& x, Vec& y, Exec e) {
  if (e == Exec::serial)
    spmv_serial(a, x, y);
  else
    spmv_parallel(a, x, y);
}

/// y = x + s * (a x), the explicit half of forward Euler and CN steps.
void axpy_apply(const SpMat& a, double s, const Vec& x, Vec& y, Exec e);

/// `row col value` lines, 0-based.
void write_coo(const std::string& path, const SpMat& m);

}  // namespace liouville
