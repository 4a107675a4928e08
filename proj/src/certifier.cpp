#include "isapp/certifier.hpp"

#include <set>
#include <sstream>

namespace isapp {

CertifyError::CertifyError(RejectionDiagnostic d)
    : std::runtime_error("loop at line " + std::to_string(d.loop_loc.line) +
                         " rejected: closure diagonal entry (" +
                         std::to_string(d.index + 1) + "," +
                         std::to_string(d.index + 1) + ") = " +
                         std::string(1, val_symbol(d.value))),
      diag(std::move(d)) {}

std::string RejectionDiagnostic::render(const StackSpace& space) const {
  std::ostringstream os;
  os << "loop over " << stack << " at line " << loop_loc.line << ", col "
     << loop_loc.col << " rejected\n";
  std::string row = index < static_cast<int>(space.names.size())
                        ? space.names[static_cast<size_t>(index)]
                        : std::string("c");
  os << "closure diagonal entry (" << index + 1 << "," << index + 1 << ") ["
     << row << "] = " << val_symbol(value)
     << " but must stay below A\n";
  os << "closure:\n" << render_grid(closure, space);
  return os.str();
}

namespace {

struct Ctx {
  const Program& prog;
  CertifyOptions opts;
  std::map<std::string, FunctionCertificate> fncerts;
  std::vector<LoopTrace> traces;
  std::set<std::string> in_progress;

  const FunctionCertificate& function_cert(const std::string& name);
  Mat certify(const Command& c, const StackSpace& space);
};

Mat identity_for(const StackSpace& s) { return mat_identity(s.dim()); }

const FunctionCertificate& Ctx::function_cert(const std::string& name) {
  auto it = fncerts.find(name);
  if (it != fncerts.end()) return it->second;
  if (in_progress.count(name))
    throw std::runtime_error("cannot certify recursive function '" + name +
                             "'");
  const FunctionDef* f = prog.find_function(name);
  if (!f) throw std::runtime_error("unknown function '" + name + "'");
  in_progress.insert(name);
  StackSpace space = function_space(*f);
  Mat m = certify(*f->body, space);
  in_progress.erase(name);
  FunctionCertificate fc{name, space, std::move(m),
                         space.index_of(f->returned)};
  return fncerts.emplace(name, std::move(fc)).first->second;
}

Mat Ctx::certify(const Command& c, const StackSpace& space) {
  const int d = space.dim();
  const int cst = d - 1;
  switch (c.kind) {
    case Command::Kind::Skip:
    case Command::Kind::AssignReg:
    case Command::Kind::Pop:
      return identity_for(space);
    case Command::Kind::CopyStack: {
      int i = space.index_of(c.target);
      int j = space.index_of(c.source);
      return substitute_column(identity_for(space), i,
                               unit_vec(d, j, Val::L));
    }
    case Command::Kind::AssignLiteral: {
      int i = space.index_of(c.target);
      Vec v(d);
      if (c.letters.size() == 1)
        v[cst] = Val::L;
      else if (c.letters.size() > 1)
        v[cst] = Val::A;
      return substitute_column(identity_for(space), i, v);
    }
    case Command::Kind::Push: {
      int i = space.index_of(c.target);
      Vec v = vec_add(unit_vec(d, cst, Val::L), unit_vec(d, i, Val::L));
      return substitute_column(identity_for(space), i, v);
    }
    case Command::Kind::Seq: {
      Mat a = certify(*c.a, space);
      Mat b = certify(*c.b, space);
      return mat_mul(a, b, opts.combiner);
    }
    case Command::Kind::If: {
      Mat a = certify(*c.a, space);
      Mat b = certify(*c.b, space);
      return mat_union(a, b);
    }
    case Command::Kind::Loop: {
      int k = space.index_of(c.target);
      Mat body = certify(*c.a, space);
      Mat closure = union_closure(body, opts.combiner);
      for (int i = 0; i < d; ++i) {
        if (closure.at(i, i) >= Val::A) {
          RejectionDiagnostic diag{c.loc, c.target, i, closure.at(i, i),
                                   closure, space};
          throw CertifyError(std::move(diag));
        }
      }
      Mat merged = merge_down(closure, k);
      if (opts.trace)
        traces.push_back(LoopTrace{c.loc, c.target, std::move(body),
                                   std::move(closure), merged});
      return merged;
    }
    case Command::Kind::AssignCall: {
      const FunctionCertificate& fc = function_cert(c.source);
      Vec ret = fc.matrix.col(fc.returned_col);
      std::vector<int> mapping;
      mapping.reserve(c.call_args.size());
      for (const auto& actual : c.call_args)
        mapping.push_back(space.index_of(actual));
      Vec u = reorder(ret, mapping, d);
      int i = space.index_of(c.target);
      return substitute_column(identity_for(space), i, u);
    }
  }
  throw std::logic_error("unhandled command kind");
}

}  // namespace

Certificate certify_program(const Program& p, CertifyOptions opts) {
  Ctx ctx{p, opts, {}, {}, {}};
  StackSpace space = program_space(p);
  Mat m = ctx.certify(*p.main, space);
  return Certificate{std::move(space), std::move(m), opts.combiner,
                     std::move(ctx.fncerts), std::move(ctx.traces)};
}

CertifyOutcome try_certify(const Program& p, CertifyOptions opts) {
  try {
    return CertifyOutcome{certify_program(p, opts), std::nullopt};
  } catch (const CertifyError& e) {
    return CertifyOutcome{std::nullopt, e.diag};
  }
}

FunctionCertificate certify_function(const Program& p, const std::string& name,
                                     CertifyOptions opts) {
  Ctx ctx{p, opts, {}, {}, {}};
  return ctx.function_cert(name);
}

Mat certify_command_in(const Program& p, const Command& c,
                       const StackSpace& space, CertifyOptions opts) {
  Ctx ctx{p, opts, {}, {}, {}};
  return ctx.certify(c, space);
}

bool certificate_admits(const Program& p, const Mat& claimed,
                        CertifyOptions opts) {
  Certificate least = certify_program(p, opts);
  return mat_leq(least.matrix, claimed);
}

std::string render_grid(const Mat& m, const StackSpace& space) {
  std::vector<std::string> labels = space.names;
  labels.push_back("c");
  size_t w = 1;
  for (const auto& l : labels) w = std::max(w, l.size());
  std::ostringstream os;
  auto pad = [&](const std::string& s) {
    os << s << std::string(w + 1 - s.size(), ' ');
  };
  pad("");
  for (int j = 0; j < m.dim(); ++j) pad(labels[static_cast<size_t>(j)]);
  os << '\n';
  for (int i = 0; i < m.dim(); ++i) {
    pad(labels[static_cast<size_t>(i)]);
    for (int j = 0; j < m.dim(); ++j)
      pad(std::string(1, val_symbol(m.at(i, j))));
    os << '\n';
  }
  return os.str();
}

}  // namespace isapp
