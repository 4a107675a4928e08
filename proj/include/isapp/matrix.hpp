#pragma once

#include <string>
#include <vector>

#include "isapp/semiring.hpp"

namespace isapp {

// Inner sum used by the matrix product: val_add (default) or val_union.
enum class Combiner { Plus, Union };

// Column vector over the dependency scalars. In certificates the last
// entry is the constants row, so meaningful vectors have length >= 2.
struct Vec {
  std::vector<Val> e;

  Vec() = default;
  explicit Vec(int dim, Val fill = Val::Zero);

  int dim() const { return static_cast<int>(e.size()); }
  Val& operator[](int i) { return e[static_cast<size_t>(i)]; }
  Val operator[](int i) const { return e[static_cast<size_t>(i)]; }
  bool operator==(const Vec&) const = default;
};

Vec unit_vec(int dim, int idx, Val v);
Vec vec_add(const Vec& a, const Vec& b);
Vec vec_union(const Vec& a, const Vec& b);

// Square certificate matrix. Rows are inputs, columns outputs, the last
// index carries constants. Row-major storage, 0-based indices; rendered
// diagnostics use 1-based positions.
struct Mat {
  int n = 0;
  std::vector<Val> e;

  Mat() = default;
  explicit Mat(int dim, Val fill = Val::Zero);

  int dim() const { return n; }
  Val& at(int r, int c) { return e[static_cast<size_t>(r * n + c)]; }
  Val at(int r, int c) const { return e[static_cast<size_t>(r * n + c)]; }
  Vec col(int c) const;
  void set_col(int c, const Vec& v);
  bool operator==(const Mat&) const = default;
};

Mat mat_identity(int dim);
Mat mat_zero(int dim);
Mat mat_add(const Mat& a, const Mat& b);
Mat mat_union(const Mat& a, const Mat& b);
Mat mat_mul(const Mat& a, const Mat& b, Combiner comb);
Mat substitute_column(Mat m, int col, const Vec& v);

// Pointwise order (a <= b in every entry).
bool mat_leq(const Mat& a, const Mat& b);

// Union of all powers a^0 .. a^(dim^2); a^0 is the identity.
Mat union_closure(const Mat& a, Combiner comb);

// Loop correction for a loop driven by stack row k. Constants column is
// untouched; in every other column the constants row is zeroed, its value
// folded into row k (M caps at A there), and any flow through a foreign
// nonzero row turns polynomial.
Mat merge_down(const Mat& m, int k);

// Maps a function-space column into a caller space. mapping[q] is the
// caller row of formal q; later rows of v are locals and drop out; the
// constants entry carries over. Clashing targets combine with val_add.
Vec reorder(const Vec& v, const std::vector<int>& mapping, int target_dim);

// "L 0 0\nA L 0\n0 0 L\n" style dump used by tests and trace output.
std::string to_debug_string(const Mat& m);
std::string to_debug_string(const Vec& v);

}  // namespace isapp
