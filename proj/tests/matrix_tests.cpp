#include <random>

#include "doctest.h"
#include "isapp/matrix.hpp"
#include "test_util.hpp"

using namespace isapp;
using namespace testutil;

TEST_SUITE("matrix") {

TEST_CASE("vector combination and unit vectors") {
  Vec a = vec_of("L 0 A");
  Vec b = vec_of("L L 0");
  CHECK(vec_add(a, b) == vec_of("A L A"));
  CHECK(vec_union(a, b) == vec_of("L L A"));
  CHECK(unit_vec(3, 1, Val::M) == vec_of("0 M 0"));
  CHECK_THROWS(unit_vec(3, 3, Val::L));
}

TEST_CASE("identity, zero, column access") {
  Mat i3 = mat_identity(3);
  CHECK(i3 == mat_of({"L 0 0", "0 L 0", "0 0 L"}));
  CHECK(mat_zero(2) == mat_of({"0 0", "0 0"}));
  CHECK(i3.col(1) == vec_of("0 L 0"));
  Mat s = substitute_column(i3, 0, vec_of("L A 0"));
  CHECK(s == mat_of({"L 0 0", "A L 0", "0 0 L"}));
  CHECK(i3 == mat_identity(3));  // substitute works on a copy
}

TEST_CASE("product matches the brute-force oracle on random matrices") {
  std::mt19937_64 gen(1001);
  std::uniform_int_distribution<int> dim(2, 6);
  for (int t = 0; t < 500; ++t) {
    int n = dim(gen);
    Mat a = random_mat(gen, n);
    Mat b = random_mat(gen, n);
    CHECK(mat_mul(a, b, Combiner::Plus) == slow_mul(a, b, Combiner::Plus));
    CHECK(mat_mul(a, b, Combiner::Union) == slow_mul(a, b, Combiner::Union));
    CHECK(mat_add(a, b) == mat_add(b, a));
    CHECK(mat_union(a, b) == slow_union(a, b));
  }
}

TEST_CASE("product respects identity and zero") {
  std::mt19937_64 gen(7);
  for (int t = 0; t < 50; ++t) {
    Mat a = random_mat(gen, 4);
    for (Combiner c : {Combiner::Plus, Combiner::Union}) {
      CHECK(mat_mul(a, mat_identity(4), c) == a);
      CHECK(mat_mul(mat_identity(4), a, c) == a);
      CHECK(mat_mul(a, mat_zero(4), c) == mat_zero(4));
    }
  }
}

TEST_CASE("union dominated by plus on random matrices") {
  std::mt19937_64 gen(2002);
  for (int t = 0; t < 1000; ++t) {
    Mat a = random_mat(gen, 2 + t % 5);
    Mat b = random_mat(gen, a.dim());
    CHECK(mat_leq(mat_union(a, b), mat_add(a, b)));
  }
}

TEST_CASE("closure of the identity is the identity") {
  for (int n = 2; n <= 5; ++n) {
    CHECK(union_closure(mat_identity(n), Combiner::Plus) == mat_identity(n));
    CHECK(union_closure(mat_identity(n), Combiner::Union) == mat_identity(n));
  }
}

TEST_CASE("closure matches the naive power union") {
  std::mt19937_64 gen(3003);
  std::uniform_int_distribution<int> dim(2, 5);
  for (int t = 0; t < 200; ++t) {
    int n = dim(gen);
    Mat a = random_mat(gen, n);
    for (Combiner c : {Combiner::Plus, Combiner::Union}) {
      Mat cl = union_closure(a, c);
      CHECK(cl == slow_closure(a, c, n * n));
      // stabilization: more powers change nothing
      CHECK(cl == slow_closure(a, c, 4 * n * n));
    }
  }
}

TEST_CASE("closure worked example: flow graph with a polynomial edge") {
  Mat a = mat_of({"L 0 0 0",
                  "L L L 0",
                  "L 0 0 0",
                  "0 M L L"});
  Mat cl = union_closure(a, Combiner::Plus);
  CHECK(cl == slow_closure(a, Combiner::Plus, 16));
  // the M edge pollutes everything the last row can reach
  CHECK(cl.at(3, 0) == Val::M);
  CHECK(cl.at(3, 1) == Val::M);
  CHECK(cl.at(3, 2) == Val::M);
  CHECK(cl.at(3, 3) == Val::L);
  CHECK(cl.at(0, 0) == Val::L);
}

TEST_CASE("closure worked example: constants feeding a stack double up") {
  // identity except the constants row also feeds column 0
  Mat a = mat_of({"L 0 0 0",
                  "0 L 0 0",
                  "0 0 L 0",
                  "L 0 0 L"});
  Mat plus = union_closure(a, Combiner::Plus);
  CHECK(plus.at(0, 0) == Val::L);
  CHECK(plus.at(3, 0) == Val::A);  // L*L + L*L counts the constant twice
  Mat uni = union_closure(a, Combiner::Union);
  CHECK(uni.at(3, 0) == Val::L);  // union keeps the single path
}

TEST_CASE("closure is idempotent under union but not under plus") {
  std::mt19937_64 gen(4004);
  for (int t = 0; t < 100; ++t) {
    Mat a = random_mat(gen, 2 + t % 4);
    Mat cl = union_closure(a, Combiner::Union);
    CHECK(union_closure(cl, Combiner::Union) == cl);
  }
  Mat a = mat_of({"0 L", "0 0"});
  Mat cl = union_closure(a, Combiner::Plus);  // [[L,L],[0,L]]
  CHECK(cl == mat_of({"L L", "0 L"}));
  CHECK(union_closure(cl, Combiner::Plus) != cl);  // (0,1) doubles to A
}

TEST_CASE("closure is monotone") {
  std::mt19937_64 gen(5005);
  std::uniform_int_distribution<int> dim(2, 5);
  std::uniform_int_distribution<int> raise(0, 3);
  for (int t = 0; t < 200; ++t) {
    int n = dim(gen);
    Mat a = random_mat(gen, n);
    Mat b = a;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        b.at(i, j) = val_union(b.at(i, j), static_cast<Val>(raise(gen)));
    REQUIRE(mat_leq(a, b));
    for (Combiner c : {Combiner::Plus, Combiner::Union})
      CHECK(mat_leq(union_closure(a, c), union_closure(b, c)));
  }
}

TEST_CASE("merge_down leaves the identity alone") {
  for (int n = 2; n <= 5; ++n)
    for (int k = 0; k + 1 < n; ++k)
      CHECK(merge_down(mat_identity(n), k) == mat_identity(n));
}

TEST_CASE("merge_down worked examples") {
  // dim 4, loop row 1; column 2 depends on a foreign row 0 => polynomial
  Mat a = mat_identity(4);
  a.set_col(2, vec_of("A 0 L 0"));
  Mat m = merge_down(a, 1);
  CHECK(m.col(2) == vec_of("M M L 0"));

  // dim 3, loop row 1; constants feeding column 0 fold into the loop row
  Mat b = mat_identity(3);
  b.set_col(0, vec_of("L 0 A"));
  CHECK(merge_down(b, 1).col(0) == vec_of("L A 0"));

  // a polynomial constant contribution degrades to affine on the loop row
  Mat c = mat_identity(3);
  c.set_col(0, vec_of("L 0 M"));
  CHECK(merge_down(c, 1).col(0) == vec_of("L A 0"));

  // per-iteration unit growth becomes linear in the loop counter
  Mat d = mat_identity(3);
  d.set_col(0, vec_of("L 0 L"));
  CHECK(merge_down(d, 1).col(0) == vec_of("L L 0"));
}

TEST_CASE("merge_down properties") {
  std::mt19937_64 gen(6006);
  std::uniform_int_distribution<int> dim(2, 6);
  for (int t = 0; t < 300; ++t) {
    int n = dim(gen);
    Mat a = random_mat(gen, n);
    std::uniform_int_distribution<int> row(0, n - 2);
    int k = row(gen);
    Mat m = merge_down(a, k);
    // constants column carries over untouched
    CHECK(m.col(n - 1) == a.col(n - 1));
    for (int j = 0; j + 1 < n; ++j) {
      // constants row is zeroed in every stack column
      CHECK(m.at(n - 1, j) == Val::Zero);
      // merging never lowers a stack-row entry
      for (int i = 0; i + 1 < n; ++i) CHECK(m.at(i, j) >= a.at(i, j));
    }
  }
  CHECK_THROWS(merge_down(mat_identity(3), 2));  // constants row is no loop
  CHECK_THROWS(merge_down(mat_identity(3), -1));
}

TEST_CASE("reorder worked examples") {
  // two formals land on caller rows 0 and 2 of a 3-stack caller
  Vec v = vec_of("L L 0 0");
  CHECK(reorder(v, {0, 2}, 4) == vec_of("L 0 L 0"));

  // aliased actuals: both formals hit row 0 and their L's count twice
  CHECK(reorder(v, {0, 0}, 4) == vec_of("A 0 0 0"));

  // locals (rows beyond the formals) drop; constants carry
  Vec w = vec_of("L 0 M A");
  CHECK(reorder(w, {1}, 3) == vec_of("0 L A"));
}

TEST_CASE("reorder with an injective mapping is a plain embedding") {
  std::mt19937_64 gen(7007);
  std::uniform_int_distribution<int> val(0, 3);
  for (int t = 0; t < 200; ++t) {
    Vec v(4);
    for (int i = 0; i < 4; ++i) v[i] = static_cast<Val>(val(gen));
    std::vector<int> mapping = {2, 0, 3};  // three formals, injective
    Vec u = reorder(v, mapping, 5);
    CHECK(u[2] == v[0]);
    CHECK(u[0] == v[1]);
    CHECK(u[3] == v[2]);
    CHECK(u[1] == Val::Zero);
    CHECK(u[4] == v[3]);
  }
  CHECK_THROWS(reorder(vec_of("L 0"), {0, 1, 2}, 4));  // more formals than rows
  CHECK_THROWS(reorder(vec_of("L 0"), {3}, 4));        // target out of range
}

TEST_CASE("debug rendering") {
  CHECK(to_debug_string(mat_identity(2)) == "L 0\n0 L\n");
  CHECK(to_debug_string(vec_of("0 A M")) == "0 A M");
}

}  // TEST_SUITE
