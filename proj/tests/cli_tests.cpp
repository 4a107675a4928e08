#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "test_util.hpp"

using namespace testutil;

namespace {

std::string bin() { return isapp_bin(); }

std::string q(const std::string& s) { return "'" + s + "'"; }

// Writes a throwaway fixture under /tmp and returns its path.
std::string temp_file(const std::string& name, const std::string& content) {
  std::string path = "/tmp/isapp_cli_test_" + name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  REQUIRE(out.good());
  return path;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("check: structured certificate output") {
  CliResult r = run_cli(bin() + " check " + q(program_path("addition.sm")) +
                        " --format structured");
  CHECK(r.exit_code == 0);
  CHECK(r.out ==
        "certificate\n"
        "combiner plus\n"
        "dim 3\n"
        "stacks S1 S2\n"
        "row S1 L 0 0\n"
        "row S2 A L 0\n"
        "row c 0 0 L\n");
}

TEST_CASE("check: human grid output") {
  CliResult r = run_cli(bin() + " check " + q(program_path("addition.sm")));
  CHECK(r.exit_code == 0);
  CHECK(r.out ==
        "certificate (combiner plus)\n"
        "   S1 S2 c  \n"
        "S1 L  0  0  \n"
        "S2 A  L  0  \n"
        "c  0  0  L  \n");
}

TEST_CASE("check: union combiner flips the addition verdict entry") {
  CliResult r = run_cli(bin() + " check " + q(program_path("addition.sm")) +
                        " --combiner union --format structured");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("combiner union\n") != std::string::npos);
  CHECK(r.out.find("row S2 L L 0\n") != std::string::npos);
}

TEST_CASE("check: rejection reports the loop and the diagonal entry") {
  CliResult human = run_cli(bin() + " check " + q(program_path("doubling.sm")));
  CHECK(human.exit_code == 2);
  CHECK(human.out.find("loop over S3 at line 17, col 3 rejected") !=
        std::string::npos);
  CHECK(human.out.find("closure diagonal entry (1,1) [S1] = A") !=
        std::string::npos);

  CliResult structured = run_cli(bin() + " check " +
                                 q(program_path("doubling.sm")) +
                                 " --format structured");
  CHECK(structured.exit_code == 2);
  CHECK(structured.out ==
        "rejected\n"
        "loop 17:3 S3\n"
        "entry 1 S1 A\n"
        "closure A 0 0 / 0 L 0 / 0 0 L\n");
}

TEST_CASE("check: rejection inside a function uses that function's space") {
  CliResult r = run_cli(bin() + " check " + q(program_path("mult_call.sm")) +
                        " --format structured");
  CHECK(r.exit_code == 2);
  CHECK(r.out ==
        "rejected\n"
        "loop 20:3 M2\n"
        "entry 3 M3 A\n"
        "closure L 0 A 0 / 0 L 0 0 / 0 0 A 0 / 0 0 0 L\n");

  CliResult uni = run_cli(bin() + " check " + q(program_path("mult_call.sm")) +
                          " --combiner union --format structured");
  CHECK(uni.exit_code == 0);
  CHECK(uni.out ==
        "certificate\n"
        "combiner union\n"
        "dim 4\n"
        "stacks S1 S2 S3\n"
        "row S1 L 0 M 0\n"
        "row S2 0 L M 0\n"
        "row S3 0 0 0 0\n"
        "row c 0 0 0 L\n");
}

TEST_CASE("check: loop traces on demand") {
  CliResult r = run_cli(bin() + " check " + q(program_path("multconst.sm")) +
                        " --trace --format structured");
  CHECK(r.exit_code == 0);
  CHECK(r.out ==
        "certificate\n"
        "combiner plus\n"
        "dim 3\n"
        "stacks S1 S2\n"
        "row S1 0 0 0\n"
        "row S2 A L 0\n"
        "row c 0 0 L\n"
        "trace loop 9:3 S2\n"
        "trace-body L 0 0 / 0 L 0 / A 0 L\n"
        "trace-closure L 0 0 / 0 L 0 / A 0 L\n"
        "trace-merged L 0 0 / A L 0 / 0 0 L\n");

  CliResult human = run_cli(bin() + " check " +
                            q(program_path("multconst.sm")) + " --trace");
  CHECK(human.exit_code == 0);
  CHECK(human.out.find("loop over S2 at line 9, col 3\n") != std::string::npos);
  CHECK(human.out.find("body:\n") != std::string::npos);
  CHECK(human.out.find("closure:\n") != std::string::npos);
  CHECK(human.out.find("merged:\n") != std::string::npos);
}

TEST_CASE("bound: size relations per stack") {
  CliResult plus = run_cli(bin() + " bound " + q(program_path("addition.sm")));
  CHECK(plus.exit_code == 0);
  CHECK(plus.out ==
        "S1 <= |S1| + 2*|S2|\n"
        "S2 unchanged\n");

  CliResult uni = run_cli(bin() + " bound " + q(program_path("addition.sm")) +
                          " --combiner union");
  CHECK(uni.exit_code == 0);
  CHECK(uni.out ==
        "S1 <= |S1| + |S2|\n"
        "S2 unchanged\n");

  CliResult mc = run_cli(bin() + " bound " + q(program_path("multconst.sm")));
  CHECK(mc.out ==
        "S1 <= 2*|S2|\n"
        "S2 unchanged\n");

  CliResult mult =
      run_cli(bin() + " bound " + q(program_path("multiplication.sm")));
  CHECK(mult.out ==
        "S1 unchanged\n"
        "S2 unchanged\n"
        "S3 <= poly(|S1|, |S2|)\n");

  CliResult rejected =
      run_cli(bin() + " bound " + q(program_path("doubling.sm")));
  CHECK(rejected.exit_code == 2);
}

TEST_CASE("dist: exact output distributions by final sizes") {
  CliResult one = run_cli(bin() + " dist " + q(program_path("coin_push.sm")));
  CHECK(one.exit_code == 0);
  CHECK(one.out == "0 1/2\n1 1/2\n");

  CliResult two = run_cli(bin() + " dist " + q(program_path("two_coins.sm")));
  CHECK(two.exit_code == 0);
  CHECK(two.out == "0 1/4\n1 1/2\n2 1/4\n");

  CliResult det = run_cli(bin() + " dist " + q(program_path("addition.sm")) +
                          " --input S1=a,a --input S2=b,b,b");
  CHECK(det.exit_code == 0);
  CHECK(det.out == "5 3 1\n");
}

TEST_CASE("dist: flip budget trips with exit code 4") {
  CliResult r = run_cli(bin() + " dist " + q(program_path("two_coins.sm")) +
                        " --flip-budget 1");
  CHECK(r.exit_code == 4);
  CHECK(r.out.find("flip budget of 1 exceeded") != std::string::npos);
}

TEST_CASE("run: seeded sampling aggregates by final sizes") {
  std::string cmd = bin() + " run " + q(program_path("addition.sm")) +
                    " --input S1=a,a --input S2=b,b,b --runs 5 --seed 0";
  CliResult r = run_cli(cmd);
  CHECK(r.exit_code == 0);
  CHECK(r.out == "5 3 5\n");
  CHECK(run_cli(cmd).out == r.out);  // byte-deterministic

  CliResult coins = run_cli(bin() + " run " + q(program_path("coin_push.sm")) +
                            " --runs 10 --seed 1");
  CHECK(coins.out == "0 4\n1 6\n");
}

TEST_CASE("run: input validation") {
  CliResult bad_stack = run_cli(bin() + " run " +
                                q(program_path("addition.sm")) +
                                " --input S9=a");
  CHECK(bad_stack.exit_code == 1);
  CHECK(bad_stack.out.find("unknown stack 'S9'") != std::string::npos);

  CliResult bad_letter = run_cli(bin() + " run " +
                                 q(program_path("addition.sm")) +
                                 " --input S1=zz");
  CHECK(bad_letter.exit_code == 1);
}

TEST_CASE("run: blank override supplies top-of-empty reads") {
  std::string path = temp_file(
      "blanky.sm",
      "alphabet: true false a\nstacks: S1\nmain { push(top(S1), S1) }\n");
  CliResult bare = run_cli(bin() + " run " + q(path));
  CHECK(bare.exit_code == 1);
  CHECK(bare.out.find("top of empty stack 'S1'") != std::string::npos);

  CliResult blanked = run_cli(bin() + " run " + q(path) + " --blank a");
  CHECK(blanked.exit_code == 0);
  CHECK(blanked.out == "1 1000\n");

  CliResult off = run_cli(bin() + " run " + q(path) + " --blank zz");
  CHECK(off.exit_code == 1);
  CHECK(off.out.find("blank letter 'zz' is not in the alphabet") !=
        std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("decide: majority acceptance with exact masses") {
  CliResult always = run_cli(bin() + " decide " +
                             q(program_path("decide_always_empty.sm")) +
                             " --size 3");
  CHECK(always.exit_code == 0);
  CHECK(always.out == "accept 1 0\n");

  CliResult coin = run_cli(bin() + " decide " +
                           q(program_path("decide_coin.sm")) + " --size 3");
  CHECK(coin.exit_code == 0);
  CHECK(coin.out == "accept 1/2 1/2\n");

  CliResult push = run_cli(bin() + " decide " +
                           q(program_path("decide_always_push.sm")) +
                           " --size 3");
  CHECK(push.exit_code == 0);
  CHECK(push.out == "reject 0 1\n");
}

TEST_CASE("encode: emits a program that certifies and runs") {
  std::string out_path = "/tmp/isapp_cli_test_encoded.sm";
  CliResult enc = run_cli(bin() + " encode " +
                          q(machine_path("coin_flip.ptm")) + " --tape 0 --out " +
                          q(out_path));
  CHECK(enc.exit_code == 0);

  CliResult chk = run_cli(bin() + " check " + q(out_path) +
                          " --format structured");
  CHECK(chk.exit_code == 0);
  CHECK(chk.out.find("dim 8\n") != std::string::npos);

  CliResult dist = run_cli(bin() + " dist " + q(out_path));
  CHECK(dist.exit_code == 0);
  CHECK(dist.out ==
        "0 1 0 1 1 1 0 1/2\n"
        "0 1 0 1 1 1 1 1/2\n");
  std::remove(out_path.c_str());

  // without --out the program lands on stdout
  CliResult stdout_enc = run_cli(bin() + " encode " +
                                 q(machine_path("coin_flip.ptm")) + " --tape 0");
  CHECK(stdout_enc.exit_code == 0);
  CHECK(stdout_enc.out.rfind("alphabet:", 0) == 0);
}

TEST_CASE("encode: deterministic bytes") {
  std::string cmd = bin() + " encode " + q(machine_path("copier.ptm")) +
                    " --tape 010";
  CHECK(run_cli(cmd).out == run_cli(cmd).out);
}

TEST_CASE("exit codes: missing file, bad program, usage errors") {
  CliResult missing = run_cli(bin() + " check /no/such/file.sm");
  CHECK(missing.exit_code == 3);
  CHECK(missing.out.find("cannot read '/no/such/file.sm'") !=
        std::string::npos);

  std::string garbage = temp_file("garbage.sm", "this is not a program\n");
  CliResult parse = run_cli(bin() + " check " + q(garbage));
  CHECK(parse.exit_code == 1);
  CHECK(parse.out.find("program must start with an alphabet section") !=
        std::string::npos);
  std::remove(garbage.c_str());

  std::string illformed = temp_file(
      "illformed.sm",
      "alphabet: true false a\nstacks: S1\nmain { loop S1 { push(a, S1) } }\n");
  CliResult wf = run_cli(bin() + " check " + q(illformed));
  CHECK(wf.exit_code == 1);
  CHECK(wf.out.find("loop stack 'S1' occurs in the loop body") !=
        std::string::npos);
  CHECK(wf.out.find("not well-formed") != std::string::npos);
  std::remove(illformed.c_str());

  CliResult usage = run_cli(bin());
  CHECK(usage.exit_code >= 100);  // CLI parsing errors stay clear of 0..4
  CliResult badopt = run_cli(bin() + " check " +
                             q(program_path("addition.sm")) +
                             " --combiner nope");
  CHECK(badopt.exit_code >= 100);
}

}  // TEST_SUITE
