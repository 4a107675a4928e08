#pragma once

#include <map>
#include <string>
#include <vector>

#include "isapp/matrix.hpp"

namespace isapp {

// Multivariate polynomial with nonnegative integer coefficients, kept
// canonical: coefficients and exponents strictly positive, terms keyed
// by their power product. Variable i renders as X<i+1>.
using PowerProduct = std::map<int, int>;  // var index -> exponent

struct Polynomial {
  std::map<PowerProduct, unsigned long long> terms;
  bool operator==(const Polynomial&) const = default;
  bool is_zero() const { return terms.empty(); }
};

Polynomial poly_zero();
Polynomial poly_const(unsigned long long c);
Polynomial poly_var(int i);
Polynomial poly_add(const Polynomial& a, const Polynomial& b);
Polynomial poly_mul(const Polynomial& a, const Polynomial& b);
Polynomial poly_scale(const Polynomial& a, unsigned long long c);
Polynomial poly_pow(const Polynomial& a, int e);

// Monomial-wise coefficient max; the pointwise upper bound used when
// control-flow branches join.
Polynomial poly_union(const Polynomial& a, const Polynomial& b);

unsigned long long poly_eval(const Polynomial& p,
                             const std::vector<unsigned long long>& xs);

// Total degree of the polynomial (0 for constants and zero).
int poly_degree(const Polynomial& p);

// Abstraction into a dependency column over nvars variables plus the
// constants row: 1 and X_i map to L, bigger coefficients/constants to A,
// anything of degree >= 2 marks every involved variable M.
Vec abstract_poly(const Polynomial& p, int nvars);

// "3*X4^2*X5 + X1" style; var_names overrides the X<i> naming.
std::string render_poly(const Polynomial& p,
                        const std::vector<std::string>& var_names = {});

// Parses the render_poly syntax (terms joined by '+', factors by '*',
// exponents with '^'). Throws std::runtime_error on malformed input.
Polynomial parse_poly(const std::string& text);

// Square system: component j gives output j in terms of the n inputs.
struct Multipoly {
  int nvars = 0;
  std::vector<Polynomial> comps;
  bool operator==(const Multipoly&) const = default;
};

Multipoly mp_identity(int nvars);
Multipoly mp_sum(const Multipoly& a, const Multipoly& b);

// Composition "p after q": component j is p_j with X_i := q_i.
Multipoly mp_compose(const Multipoly& p, const Multipoly& q);

// Column-wise abstraction; the constants column is the identity's.
Mat abstract_mp(const Multipoly& p);

}  // namespace isapp
