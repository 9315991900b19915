#include "liouville/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "liouville/error.hpp"

namespace liouville {

SpMat from_triplets(int rows, int cols, const std::vector<Triplet>& t) {
  SpMat m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.prune(0.0, 0.0);
  m.makeCompressed();
  return m;
}

SparsityAudit audit(const SpMat& m) {
  SparsityAudit a;
  std::vector<int> col(m.cols(), 0);
  for (int r = 0; r < m.outerSize(); ++r) {
    int n = 0;
    for (SpMat::InnerIterator it(m, r); it; ++it) {
      if (it.value() == 0.0) continue;
      ++n;
      ++col[it.col()];
      a.max_abs = std::max(a.max_abs, std::abs(it.value()));
    }
    a.max_row_nnz = std::max(a.max_row_nnz, n);
  }
  for (int c : col) a.max_col_nnz = std::max(a.max_col_nnz, c);
  return a;
}

void spmv_serial(const SpMat& a, const Vec& x, Vec& y) {
  if (x.size() != a.cols()) throw ShapeError("spmv: vector length mismatch");
  y.resize(a.rows());
  const int* ptr = a.outerIndexPtr();
  const int* idx = a.innerIndexPtr();
  const double* val = a.valuePtr();
  for (int r = 0; r < a.rows(); ++r) {
    double s = 0.0;
    for (int p = ptr[r]; p < ptr[r + 1]; ++p) s += val[p] * x[idx[p]];
    y[r] = s;
  }
}

void spmv_parallel(const SpMat& a, const Vec& x, Vec& y) {
  if (x.size() != a.cols()) throw ShapeError("spmv: vector length mismatch");
  y.resize(a.rows());
  const int* ptr = a.outerIndexPtr();
  const int* idx = a.innerIndexPtr();
  const double* val = a.valuePtr();
  const int n = int(a.rows());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int r = 0; r < n; ++r) {
    double s = 0.0;
    for (int p = ptr[r]; p < ptr[r + 1]; ++p) s += val[p] * x[idx[p]];
    y[r] = s;
  }
}

void axpy_apply(const SpMat& a, double s, const Vec& x, Vec& y, Exec e) {
  Vec ax;
  spmv(a, x, ax, e);
  y = x + s * ax;
}

void write_coo(const std::string& path, const SpMat& m) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path);
  out.precision(17);
  for (int r = 0; r < m.outerSize(); ++r)
    for (SpMat::InnerIterator it(m, r); it; ++it)
      out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

}  // namespace liouville
