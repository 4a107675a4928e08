// Command-line frontend: certify, explain bounds, run, enumerate
// distributions, decide by majority, and encode clocked machines.
//
// Exit codes: 0 success, 1 parse/static/runtime error, 2 certificate
// rejection, 3 I/O failure, 4 enumeration budget exceeded.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "isapp/certifier.hpp"
#include "isapp/check.hpp"
#include "isapp/interp.hpp"
#include "isapp/multipoly.hpp"
#include "isapp/parser.hpp"
#include "isapp/ptm.hpp"

namespace {

using namespace isapp;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StaticError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

struct Config {
  std::string file;
  std::string combiner = "plus";
  std::uint64_t seed = 0;
  int runs = 1000;
  int flip_budget = 24;
  std::string output_stack;
  std::string blank;
  std::string format = "human";
  bool trace = false;
  std::vector<std::string> inputs;  // S=a,b,c
  int size = 4;
  std::string fill = "true";
  std::string tape;
  std::string out_path;
};

Combiner combiner_of(const Config& cfg) {
  return cfg.combiner == "union" ? Combiner::Union : Combiner::Plus;
}

const char* combiner_name(Combiner c) {
  return c == Combiner::Union ? "union" : "plus";
}

Program load_program(const Config& cfg) {
  Program p = parse_program(read_file(cfg.file));
  auto diags = check_wellformed(p);
  if (!diags.empty()) {
    for (const auto& d : diags)
      std::cerr << "error: " << d.message << " (line " << d.loc.line
                << ", col " << d.loc.col << ")\n";
    throw StaticError("program is not well-formed");
  }
  if (!cfg.blank.empty()) {
    if (!p.has_letter(cfg.blank))
      throw StaticError("blank letter '" + cfg.blank +
                        "' is not in the alphabet");
    p.blank = cfg.blank;
  }
  return p;
}

std::string one_line(const Mat& m) {
  std::ostringstream os;
  for (int i = 0; i < m.dim(); ++i) {
    if (i) os << " / ";
    for (int j = 0; j < m.dim(); ++j) {
      if (j) os << ' ';
      os << val_symbol(m.at(i, j));
    }
  }
  return os.str();
}

void print_certificate(const Certificate& cert, const Config& cfg) {
  if (cfg.format == "structured") {
    std::cout << "certificate\n";
    std::cout << "combiner " << combiner_name(cert.combiner) << "\n";
    std::cout << "dim " << cert.matrix.dim() << "\n";
    std::cout << "stacks";
    for (const auto& n : cert.space.names) std::cout << ' ' << n;
    std::cout << "\n";
    std::vector<std::string> labels = cert.space.names;
    labels.push_back("c");
    for (int i = 0; i < cert.matrix.dim(); ++i) {
      std::cout << "row " << labels[static_cast<size_t>(i)];
      for (int j = 0; j < cert.matrix.dim(); ++j)
        std::cout << ' ' << val_symbol(cert.matrix.at(i, j));
      std::cout << "\n";
    }
    for (const auto& t : cert.traces) {
      std::cout << "trace loop " << t.loc.line << ":" << t.loc.col << ' '
                << t.stack << "\n";
      std::cout << "trace-body " << one_line(t.body) << "\n";
      std::cout << "trace-closure " << one_line(t.closure) << "\n";
      std::cout << "trace-merged " << one_line(t.merged) << "\n";
    }
    return;
  }
  std::cout << "certificate (combiner " << combiner_name(cert.combiner)
            << ")\n";
  std::cout << render_grid(cert.matrix, cert.space);
  for (const auto& t : cert.traces) {
    std::cout << "loop over " << t.stack << " at line " << t.loc.line
              << ", col " << t.loc.col << "\n";
    std::cout << "body:\n" << render_grid(t.body, cert.space);
    std::cout << "closure:\n" << render_grid(t.closure, cert.space);
    std::cout << "merged:\n" << render_grid(t.merged, cert.space);
  }
}

void print_rejection(const RejectionDiagnostic& diag, const Config& cfg) {
  if (cfg.format == "structured") {
    std::vector<std::string> labels = diag.space.names;
    labels.push_back("c");
    std::cout << "rejected\n";
    std::cout << "loop " << diag.loop_loc.line << ":" << diag.loop_loc.col
              << ' ' << diag.stack << "\n";
    std::cout << "entry " << diag.index + 1 << ' '
              << labels[static_cast<size_t>(diag.index)] << ' '
              << val_symbol(diag.value) << "\n";
    std::cout << "closure " << one_line(diag.closure) << "\n";
    return;
  }
  std::cout << diag.render();
}

int cmd_check(const Config& cfg) {
  Program p = load_program(cfg);
  CertifyOptions opts{combiner_of(cfg), cfg.trace};
  CertifyOutcome outcome = try_certify(p, opts);
  if (!outcome.accepted()) {
    print_rejection(*outcome.rejection, cfg);
    return 2;
  }
  print_certificate(*outcome.certificate, cfg);
  return 0;
}

std::string bound_line(const Certificate& cert, int j) {
  const Mat& m = cert.matrix;
  const int d = m.dim();
  const int cst = d - 1;
  const std::string& name = cert.space.names[static_cast<size_t>(j)];
  Vec col = m.col(j);
  if (col == unit_vec(d, j, Val::L)) return name + " unchanged";
  bool has_m = false;
  for (int i = 0; i < d; ++i)
    if (col[i] == Val::M) has_m = true;
  if (has_m) {
    std::string args;
    for (int i = 0; i < cst; ++i) {
      if (col[i] == Val::Zero) continue;
      if (!args.empty()) args += ", ";
      args += "|" + cert.space.names[static_cast<size_t>(i)] + "|";
    }
    return name + " <= poly(" + args + ")";
  }
  // affine column: L rows keep coefficient 1, A rows get the smallest
  // honest representative (2), constants likewise
  Polynomial pb = poly_zero();
  std::vector<std::string> vnames;
  for (int i = 0; i < cst; ++i) {
    vnames.push_back("|" + cert.space.names[static_cast<size_t>(i)] + "|");
    if (col[i] == Val::L) pb = poly_add(pb, poly_var(i));
    if (col[i] == Val::A) pb = poly_add(pb, poly_scale(poly_var(i), 2));
  }
  if (col[cst] == Val::L) pb = poly_add(pb, poly_const(1));
  if (col[cst] == Val::A) pb = poly_add(pb, poly_const(2));
  return name + " <= " + render_poly(pb, vnames);
}

int cmd_bound(const Config& cfg) {
  Program p = load_program(cfg);
  CertifyOptions opts{combiner_of(cfg), false};
  CertifyOutcome outcome = try_certify(p, opts);
  if (!outcome.accepted()) {
    print_rejection(*outcome.rejection, cfg);
    return 2;
  }
  const Certificate& cert = *outcome.certificate;
  for (size_t j = 0; j < cert.space.names.size(); ++j)
    std::cout << bound_line(cert, static_cast<int>(j)) << "\n";
  return 0;
}

void apply_inputs(const Program& p, MachineState& st,
                  const std::vector<std::string>& inputs) {
  StackSpace space = program_space(p);
  for (const auto& spec : inputs) {
    size_t eq = spec.find('=');
    if (eq == std::string::npos)
      throw StaticError("--input wants STACK=l1,l2,...; got '" + spec + "'");
    std::string stack = spec.substr(0, eq);
    int idx = space.index_of(stack);
    if (idx < 0) throw StaticError("unknown stack '" + stack + "'");
    std::vector<std::string> letters;
    std::string rest = spec.substr(eq + 1);
    if (!rest.empty()) {
      std::istringstream is(rest);
      std::string l;
      while (std::getline(is, l, ',')) {
        if (!p.has_letter(l))
          throw StaticError("letter '" + l + "' is not in the alphabet");
        letters.push_back(l);
      }
    }
    st.stacks[static_cast<size_t>(idx)] = std::move(letters);
  }
}

std::vector<size_t> sizes_of(const MachineState& st) {
  std::vector<size_t> s;
  s.reserve(st.stacks.size());
  for (const auto& stack : st.stacks) s.push_back(stack.size());
  return s;
}

void print_sizes(const std::vector<size_t>& sizes) {
  for (size_t v : sizes) std::cout << v << ' ';
}

int cmd_run(const Config& cfg) {
  Program p = load_program(cfg);
  Interp interp(p);
  MachineState init = interp.initial_state();
  apply_inputs(p, init, cfg.inputs);
  std::map<std::vector<size_t>, long long> counts;
  for (int i = 0; i < cfg.runs; ++i) {
    RunResult r =
        interp.run(init, derive_seed(cfg.seed, static_cast<uint64_t>(i)));
    ++counts[sizes_of(r.state)];
  }
  for (const auto& [sizes, n] : counts) {
    print_sizes(sizes);
    std::cout << n << "\n";
  }
  return 0;
}

int cmd_dist(const Config& cfg) {
  Program p = load_program(cfg);
  Interp interp(p);
  MachineState init = interp.initial_state();
  apply_inputs(p, init, cfg.inputs);
  Distribution d = interp.distribution(init, cfg.flip_budget);
  std::map<std::vector<size_t>, Rat> agg;
  for (const auto& [st, pr] : d) agg[sizes_of(st)] += pr;
  for (const auto& [sizes, pr] : agg) {
    print_sizes(sizes);
    std::cout << render_rat(pr) << "\n";
  }
  return 0;
}

int cmd_decide(const Config& cfg) {
  Program p = load_program(cfg);
  Interp interp(p);
  MajorityResult r = interp.decide_majority(cfg.size, cfg.output_stack,
                                            cfg.fill, cfg.flip_budget);
  std::cout << (r.accept ? "accept" : "reject") << ' '
            << render_rat(r.empty_mass) << ' ' << render_rat(r.nonempty_mass)
            << "\n";
  return 0;
}

int cmd_encode(const Config& cfg) {
  PTMDescription m = parse_ptm(read_file(cfg.file));
  std::vector<std::string> tape = parse_tape(m, cfg.tape);
  Program prog = encode(m, tape);
  std::string text = to_source(prog);
  if (cfg.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.out_path);
    if (!out) throw IoError("cannot write '" + cfg.out_path + "'");
    out << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "complexity certifier and interpreter for a probabilistic "
      "stack-machine loop language"};
  app.require_subcommand(1);
  Config cfg;

  auto add_file = [&](CLI::App* sub) {
    sub->add_option("file", cfg.file, "program or machine file")->required();
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"human", "structured"}));
  };
  auto add_combiner = [&](CLI::App* sub) {
    sub->add_option("--combiner", cfg.combiner,
                    "inner sum of the matrix product")
        ->check(CLI::IsMember({"plus", "union"}));
  };
  auto add_budget = [&](CLI::App* sub) {
    sub->add_option("--flip-budget", cfg.flip_budget,
                    "max coin flips per enumerated path")
        ->check(CLI::Range(1, 48));
  };
  auto add_blank = [&](CLI::App* sub) {
    sub->add_option("--blank", cfg.blank,
                    "letter read from an empty stack by top");
  };
  auto add_inputs = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.inputs,
                    "preload a stack, top first: STACK=l1,l2,...");
  };

  CLI::App* check = app.add_subcommand("check", "certify a program");
  add_file(check);
  add_combiner(check);
  add_format(check);
  check->add_flag("--trace", cfg.trace, "dump per-loop closure traces");

  CLI::App* bound =
      app.add_subcommand("bound", "explain the certified size bounds");
  add_file(bound);
  add_combiner(bound);
  add_format(bound);

  CLI::App* run = app.add_subcommand("run", "sample seeded runs");
  add_file(run);
  run->add_option("--seed", cfg.seed, "root seed for the run batch");
  run->add_option("--runs", cfg.runs, "number of samples")
      ->check(CLI::Range(1, 10000000));
  add_inputs(run);
  add_blank(run);
  add_format(run);

  CLI::App* dist =
      app.add_subcommand("dist", "enumerate the exact output distribution");
  add_file(dist);
  add_budget(dist);
  add_inputs(dist);
  add_blank(dist);
  add_format(dist);

  CLI::App* decide =
      app.add_subcommand("decide", "majority acceptance on size-n inputs");
  add_file(decide);
  decide->add_option("--size", cfg.size, "input size n")
      ->check(CLI::Range(0, 64));
  decide->add_option("--fill", cfg.fill, "fill letter for the inputs");
  decide->add_option("--output-stack", cfg.output_stack,
                     "designated output stack (default: first declared)");
  add_budget(decide);
  add_blank(decide);
  add_format(decide);

  CLI::App* encode =
      app.add_subcommand("encode", "compile a clocked machine to a program");
  add_file(encode);
  encode->add_option("--tape", cfg.tape, "input tape, e.g. 0,1,0 or 010");
  encode->add_option("--out", cfg.out_path,
                     "write the program here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(cfg);
    if (bound->parsed()) return cmd_bound(cfg);
    if (run->parsed()) return cmd_run(cfg);
    if (dist->parsed()) return cmd_dist(cfg);
    if (decide->parsed()) return cmd_decide(cfg);
    if (encode->parsed()) return cmd_encode(cfg);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const isapp::EvalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind == isapp::EvalError::Kind::BudgetExceeded ? 4 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
