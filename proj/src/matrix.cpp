#include "isapp/matrix.hpp"

#include <sstream>
#include <stdexcept>

namespace isapp {

Vec::Vec(int dim, Val fill) : e(static_cast<size_t>(dim), fill) {
  if (dim < 2) throw std::invalid_argument("vector dimension must be >= 2");
}

Vec unit_vec(int dim, int idx, Val v) {
  Vec u(dim);
  if (idx < 0 || idx >= dim) throw std::invalid_argument("unit_vec index");
  u[idx] = v;
  return u;
}

static void check_same_dim(int a, int b) {
  if (a != b) throw std::invalid_argument("dimension mismatch");
}

Vec vec_add(const Vec& a, const Vec& b) {
  check_same_dim(a.dim(), b.dim());
  Vec r(a.dim());
  for (int i = 0; i < a.dim(); ++i) r[i] = val_add(a[i], b[i]);
  return r;
}

Vec vec_union(const Vec& a, const Vec& b) {
  check_same_dim(a.dim(), b.dim());
  Vec r(a.dim());
  for (int i = 0; i < a.dim(); ++i) r[i] = val_union(a[i], b[i]);
  return r;
}

Mat::Mat(int dim, Val fill)
    : n(dim), e(static_cast<size_t>(dim) * static_cast<size_t>(dim), fill) {
  if (dim < 2) throw std::invalid_argument("matrix dimension must be >= 2");
}

Vec Mat::col(int c) const {
  Vec v(n);
  for (int r = 0; r < n; ++r) v[r] = at(r, c);
  return v;
}

void Mat::set_col(int c, const Vec& v) {
  check_same_dim(v.dim(), n);
  for (int r = 0; r < n; ++r) at(r, c) = v[r];
}

Mat mat_identity(int dim) {
  Mat m(dim);
  for (int i = 0; i < dim; ++i) m.at(i, i) = Val::L;
  return m;
}

Mat mat_zero(int dim) { return Mat(dim); }

Mat mat_add(const Mat& a, const Mat& b) {
  check_same_dim(a.dim(), b.dim());
  Mat r(a.dim());
  for (size_t i = 0; i < a.e.size(); ++i) r.e[i] = val_add(a.e[i], b.e[i]);
  return r;
}

Mat mat_union(const Mat& a, const Mat& b) {
  check_same_dim(a.dim(), b.dim());
  Mat r(a.dim());
  for (size_t i = 0; i < a.e.size(); ++i) r.e[i] = val_union(a.e[i], b.e[i]);
  return r;
}

Mat mat_mul(const Mat& a, const Mat& b, Combiner comb) {
  check_same_dim(a.dim(), b.dim());
  const int n = a.dim();
  Mat r(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Val acc = Val::Zero;
      for (int k = 0; k < n; ++k) {
        Val term = val_mul(a.at(i, k), b.at(k, j));
        acc = comb == Combiner::Plus ? val_add(acc, term)
                                     : val_union(acc, term);
      }
      r.at(i, j) = acc;
    }
  }
  return r;
}

Mat substitute_column(Mat m, int col, const Vec& v) {
  if (col < 0 || col >= m.dim()) throw std::invalid_argument("column index");
  m.set_col(col, v);
  return m;
}

bool mat_leq(const Mat& a, const Mat& b) {
  if (a.dim() != b.dim()) return false;
  for (size_t i = 0; i < a.e.size(); ++i)
    if (a.e[i] > b.e[i]) return false;
  return true;
}

Mat union_closure(const Mat& a, Combiner comb) {
  const int n = a.dim();
  Mat acc = mat_identity(n);
  Mat pow = mat_identity(n);
  for (int i = 0; i < n * n; ++i) {
    pow = mat_mul(pow, a, comb);
    acc = mat_union(acc, pow);
  }
  return acc;
}

// Constants-row value folded into the loop row: M degrades to A, the
// rest carry over (per-iteration constants scale with the counter).
static Val constant_carry(Val v) { return v == Val::M ? Val::A : v; }

Mat merge_down(const Mat& m, int k) {
  const int n = m.dim();
  const int cst = n - 1;
  if (k < 0 || k >= cst) throw std::invalid_argument("loop row index");
  Mat r(n);
  r.set_col(cst, m.col(cst));
  for (int j = 0; j < cst; ++j) {
    const Vec v = m.col(j);
    bool foreign = false;  // nonzero entry outside {k, j} among stack rows
    for (int p = 0; p < cst; ++p)
      if (p != k && p != j && v[p] != Val::Zero) foreign = true;
    for (int i = 0; i < n; ++i) {
      Val out;
      if (i == cst) {
        out = Val::Zero;
      } else if (i == k) {
        out = foreign ? Val::M : val_union(v[k], constant_carry(v[cst]));
      } else if (i != j && v[i] != Val::Zero && v[j] != Val::Zero) {
        out = Val::M;
      } else {
        out = v[i];
      }
      r.at(i, j) = out;
    }
  }
  return r;
}

Vec reorder(const Vec& v, const std::vector<int>& mapping, int target_dim) {
  const int arity = static_cast<int>(mapping.size());
  if (arity > v.dim() - 1)
    throw std::invalid_argument("mapping longer than formal row count");
  Vec u(target_dim);
  for (int q = 0; q < arity; ++q) {
    int row = mapping[static_cast<size_t>(q)];
    if (row < 0 || row >= target_dim - 1)
      throw std::invalid_argument("mapping target out of range");
    u[row] = val_add(u[row], v[q]);
  }
  u[target_dim - 1] = v[v.dim() - 1];
  return u;
}

std::string to_debug_string(const Mat& m) {
  std::ostringstream os;
  for (int i = 0; i < m.dim(); ++i) {
    for (int j = 0; j < m.dim(); ++j) {
      if (j) os << ' ';
      os << val_symbol(m.at(i, j));
    }
    os << '\n';
  }
  return os.str();
}

std::string to_debug_string(const Vec& v) {
  std::ostringstream os;
  for (int i = 0; i < v.dim(); ++i) {
    if (i) os << ' ';
    os << val_symbol(v[i]);
  }
  return os.str();
}

}  // namespace isapp
