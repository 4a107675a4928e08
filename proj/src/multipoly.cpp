#include "isapp/multipoly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace isapp {

Polynomial poly_zero() { return {}; }

Polynomial poly_const(unsigned long long c) {
  Polynomial p;
  if (c) p.terms[{}] = c;
  return p;
}

Polynomial poly_var(int i) {
  Polynomial p;
  p.terms[PowerProduct{{i, 1}}] = 1;
  return p;
}

Polynomial poly_add(const Polynomial& a, const Polynomial& b) {
  Polynomial r = a;
  for (const auto& [pp, c] : b.terms) {
    auto [it, fresh] = r.terms.emplace(pp, c);
    if (!fresh) it->second += c;
  }
  return r;
}

Polynomial poly_mul(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  for (const auto& [pa, ca] : a.terms) {
    for (const auto& [pb, cb] : b.terms) {
      PowerProduct pp = pa;
      for (const auto& [v, e] : pb) pp[v] += e;
      r.terms[pp] += ca * cb;
    }
  }
  return r;
}

Polynomial poly_scale(const Polynomial& a, unsigned long long c) {
  if (!c) return {};
  Polynomial r = a;
  for (auto& [pp, coef] : r.terms) coef *= c;
  return r;
}

Polynomial poly_pow(const Polynomial& a, int e) {
  Polynomial r = poly_const(1);
  for (int i = 0; i < e; ++i) r = poly_mul(r, a);
  return r;
}

Polynomial poly_union(const Polynomial& a, const Polynomial& b) {
  Polynomial r = a;
  for (const auto& [pp, c] : b.terms) {
    auto [it, fresh] = r.terms.emplace(pp, c);
    if (!fresh) it->second = std::max(it->second, c);
  }
  return r;
}

unsigned long long poly_eval(const Polynomial& p,
                             const std::vector<unsigned long long>& xs) {
  unsigned long long total = 0;
  for (const auto& [pp, c] : p.terms) {
    unsigned long long m = c;
    for (const auto& [v, e] : pp) {
      unsigned long long x =
          v < static_cast<int>(xs.size()) ? xs[static_cast<size_t>(v)] : 0;
      for (int i = 0; i < e; ++i) m *= x;
    }
    total += m;
  }
  return total;
}

int poly_degree(const Polynomial& p) {
  int d = 0;
  for (const auto& [pp, c] : p.terms) {
    int t = 0;
    for (const auto& [v, e] : pp) t += e;
    d = std::max(d, t);
  }
  return d;
}

Vec abstract_poly(const Polynomial& p, int nvars) {
  Vec r(nvars + 1);
  const int cst = nvars;
  for (const auto& [pp, c] : p.terms) {
    Vec mono(nvars + 1);
    if (pp.empty()) {
      mono[cst] = c > 1 ? Val::A : Val::L;
    } else if (pp.size() == 1 && pp.begin()->second == 1) {
      mono[pp.begin()->first] = c > 1 ? Val::A : Val::L;
    } else {
      for (const auto& [v, e] : pp) mono[v] = Val::M;
    }
    r = vec_add(r, mono);
  }
  return r;
}

static std::string var_name(int i, const std::vector<std::string>& names) {
  if (i < static_cast<int>(names.size())) return names[static_cast<size_t>(i)];
  return "X" + std::to_string(i + 1);
}

std::string render_poly(const Polynomial& p,
                        const std::vector<std::string>& names) {
  if (p.terms.empty()) return "0";
  // print by descending total degree, then by power product order
  std::vector<std::pair<PowerProduct, unsigned long long>> ts(p.terms.begin(),
                                                              p.terms.end());
  auto deg = [](const PowerProduct& pp) {
    int d = 0;
    for (const auto& [v, e] : pp) d += e;
    return d;
  };
  std::stable_sort(ts.begin(), ts.end(), [&](const auto& a, const auto& b) {
    int da = deg(a.first), db = deg(b.first);
    if (da != db) return da > db;
    return a.first < b.first;
  });
  std::ostringstream os;
  bool first = true;
  for (const auto& [pp, c] : ts) {
    if (!first) os << " + ";
    first = false;
    if (pp.empty()) {
      os << c;
      continue;
    }
    bool lead = true;
    if (c != 1) {
      os << c;
      lead = false;
    }
    for (const auto& [v, e] : pp) {
      if (!lead) os << "*";
      lead = false;
      os << var_name(v, names);
      if (e > 1) os << "^" << e;
    }
  }
  return os.str();
}

Polynomial parse_poly(const std::string& text) {
  size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
  };
  auto number = [&]() -> unsigned long long {
    size_t j = i;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
      ++j;
    if (j == i) throw std::runtime_error("expected a number in polynomial");
    unsigned long long v = std::stoull(text.substr(i, j - i));
    i = j;
    return v;
  };
  auto factor = [&]() -> Polynomial {
    skip();
    if (i < text.size() && (text[i] == 'X' || text[i] == 'x')) {
      ++i;
      unsigned long long v = number();
      if (v == 0) throw std::runtime_error("variables are numbered from X1");
      int exp = 1;
      skip();
      if (i < text.size() && text[i] == '^') {
        ++i;
        skip();
        exp = static_cast<int>(number());
      }
      return poly_pow(poly_var(static_cast<int>(v) - 1), exp);
    }
    return poly_const(number());
  };
  auto term = [&]() -> Polynomial {
    Polynomial t = factor();
    skip();
    while (i < text.size() && text[i] == '*') {
      ++i;
      t = poly_mul(t, factor());
      skip();
    }
    return t;
  };
  Polynomial p = term();
  skip();
  while (i < text.size() && text[i] == '+') {
    ++i;
    p = poly_add(p, term());
    skip();
  }
  if (i != text.size())
    throw std::runtime_error("trailing characters in polynomial: '" +
                             text.substr(i) + "'");
  return p;
}

Multipoly mp_identity(int nvars) {
  Multipoly m{nvars, {}};
  for (int i = 0; i < nvars; ++i) m.comps.push_back(poly_var(i));
  return m;
}

static void check_arity(const Multipoly& a, const Multipoly& b) {
  if (a.nvars != b.nvars ||
      a.comps.size() != static_cast<size_t>(a.nvars) ||
      b.comps.size() != static_cast<size_t>(b.nvars))
    throw std::invalid_argument("multipolynomial arity mismatch");
}

Multipoly mp_sum(const Multipoly& a, const Multipoly& b) {
  check_arity(a, b);
  Multipoly r{a.nvars, {}};
  for (int i = 0; i < a.nvars; ++i)
    r.comps.push_back(poly_union(a.comps[static_cast<size_t>(i)],
                                 b.comps[static_cast<size_t>(i)]));
  return r;
}

static Polynomial subst(const Polynomial& p, const Multipoly& q) {
  Polynomial r;
  for (const auto& [pp, c] : p.terms) {
    Polynomial m = poly_const(c);
    for (const auto& [v, e] : pp) {
      if (v >= q.nvars)
        throw std::invalid_argument("variable out of range in composition");
      m = poly_mul(m, poly_pow(q.comps[static_cast<size_t>(v)], e));
    }
    r = poly_add(r, m);
  }
  return r;
}

Multipoly mp_compose(const Multipoly& p, const Multipoly& q) {
  check_arity(p, q);
  Multipoly r{p.nvars, {}};
  for (const auto& comp : p.comps) r.comps.push_back(subst(comp, q));
  return r;
}

Mat abstract_mp(const Multipoly& p) {
  const int n = p.nvars;
  Mat m(n + 1);
  for (int j = 0; j < n; ++j)
    m.set_col(j, abstract_poly(p.comps[static_cast<size_t>(j)], n));
  m.set_col(n, unit_vec(n + 1, n, Val::L));
  return m;
}

}  // namespace isapp
