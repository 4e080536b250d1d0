#include <catch2/catch_amalgamated.hpp>

#include "lockstep/benchmarks.hpp"
#include "lockstep/temporal.hpp"

using namespace lockstep;

namespace {

Expr phi() { return Expr::lt(Expr::var("s"), Expr::lit_int(10)); }
Expr psi() { return Expr::lt(Expr::lit_int(3), Expr::var("s")); }

bool eval_pred(const Expr& pred, long long s_value, long long t_value = 0) {
  ValueEnv env{{"s", Value::integer(s_value)}, {"t", Value::integer(t_value)}};
  return eval_expr(pred, env).as_bool();
}

}  // namespace

TEST_CASE("apply_at unfolds operators at a concrete time") {
  // finally before its witness time is vacuously true
  TemporalOp f = TemporalOp::finally(3, TemporalOp::globally(phi()));
  CHECK(apply_at(f, 2).print() == Expr::lit_bool(true).print());
  CHECK(apply_at(f, 3).print() == phi().print());

  // until takes its predicate strictly before tau and the body afterwards
  TemporalOp u = TemporalOp::until(phi(), 1, TemporalOp::globally(psi()));
  CHECK(apply_at(u, 0).print() == phi().print());
  CHECK(apply_at(u, 1).print() == psi().print());
}

TEST_CASE("nested operators carve time into intervals") {
  // top (time 0,1), phi (time 2,3), psi (time 4 onward)
  TemporalOp op = TemporalOp::finally(2, TemporalOp::until(phi(), 4, TemporalOp::globally(psi())));
  CHECK(apply_at(op, 0).print() == Expr::lit_bool(true).print());
  CHECK(apply_at(op, 1).print() == Expr::lit_bool(true).print());
  CHECK(apply_at(op, 2).print() == phi().print());
  CHECK(apply_at(op, 3).print() == phi().print());
  CHECK(apply_at(op, 4).print() == psi().print());
  CHECK(apply_at(op, 5).print() == psi().print());
}

TEST_CASE("lower_symbolic produces guarded conditionals") {
  CHECK(lower_symbolic(TemporalOp::globally(phi()), "t").print() == phi().print());
  Expr lowered = lower_symbolic(TemporalOp::until(phi(), 1, TemporalOp::globally(psi())), "t");
  Expr expected = Expr::if_(Expr::lt(Expr::var("t"), Expr::lit_int(1)), phi(), psi());
  CHECK(lowered.print() == expected.print());
}

TEST_CASE("lower_symbolic lifts and/or pointwise") {
  TemporalOp op = TemporalOp::and_op(TemporalOp::globally(phi()),
                                     TemporalOp::finally(4, TemporalOp::globally(psi())));
  Expr lowered = lower_symbolic(op, "t");
  Expr expected = Expr::and_({phi(), Expr::if_(Expr::lt(Expr::var("t"), Expr::lit_int(4)),
                                               Expr::lit_bool(true), psi())});
  CHECK(lowered.print() == expected.print());
  // brute-force pointwise agreement with apply_at for t = 0..6
  for (long long t = 0; t <= 6; ++t)
    for (long long s : {0, 4, 9, 11})
      CHECK(eval_pred(lowered, s, t) == eval_pred(apply_at(op, t), s));
}

TEST_CASE("pointwise correctness over a generated corpus") {
  std::mt19937_64 rng(2024);
  auto rand_pred = [&]() {
    switch (rng() % 3) {
      case 0: return phi();
      case 1: return psi();
      default: return Expr::eq(Expr::var("s"), Expr::lit_int(static_cast<long long>(rng() % 12)));
    }
  };
  std::function<TemporalOp(int)> rand_op = [&](int depth) -> TemporalOp {
    if (depth == 0) return TemporalOp::globally(rand_pred());
    switch (rng() % 5) {
      case 0: return TemporalOp::globally(rand_pred());
      case 1: return TemporalOp::until(rand_pred(), static_cast<long long>(rng() % 5), rand_op(depth - 1));
      case 2: return TemporalOp::finally(static_cast<long long>(rng() % 5), rand_op(depth - 1));
      case 3: return TemporalOp::and_op(rand_op(depth - 1), rand_op(depth - 1));
      default: return TemporalOp::or_op(rand_op(depth - 1), rand_op(depth - 1));
    }
  };
  for (int i = 0; i < 200; ++i) {
    TemporalOp op = rand_op(3);
    Expr lowered = lower_symbolic(op, "t");
    for (long long t = 0; t <= op.max_witness() + 2; ++t) {
      Expr direct = apply_at(op, t);
      for (long long s : {0, 3, 7, 11})
        CHECK(eval_pred(lowered, s, t) == eval_pred(direct, s));
    }
  }
}

TEST_CASE("finally is sugar for until over the full route set") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    long long tau = static_cast<long long>(rng() % 6);
    TemporalOp f = TemporalOp::finally(tau, TemporalOp::globally(phi()));
    TemporalOp u = TemporalOp::until(Expr::lit_bool(true), tau, TemporalOp::globally(phi()));
    for (long long t = 0; t <= tau + 2; ++t)
      for (long long s : {0, 9, 15})
        CHECK(eval_pred(apply_at(f, t), s) == eval_pred(apply_at(u, t), s));
  }
}

TEST_CASE("negation is an involution pointwise") {
  TemporalOp q = TemporalOp::until(phi(), 2, TemporalOp::globally(psi()));
  TemporalOp nn = TemporalOp::not_op(TemporalOp::not_op(q));
  for (long long t = 0; t <= 4; ++t)
    for (long long s : {0, 5, 12})
      CHECK(eval_pred(apply_at(nn, t), s) == eval_pred(apply_at(q, t), s));
}

TEST_CASE("lifted operators act pointwise") {
  TemporalOp q1 = TemporalOp::finally(2, TemporalOp::globally(phi()));
  TemporalOp q2 = TemporalOp::until(psi(), 3, TemporalOp::globally(phi()));
  for (long long t = 0; t <= 5; ++t)
    for (long long s : {0, 4, 11}) {
      bool a = eval_pred(apply_at(TemporalOp::and_op(q1, q2), t), s);
      CHECK(a == (eval_pred(apply_at(q1, t), s) && eval_pred(apply_at(q2, t), s)));
      bool o = eval_pred(apply_at(TemporalOp::or_op(q1, q2), t), s);
      CHECK(o == (eval_pred(apply_at(q1, t), s) || eval_pred(apply_at(q2, t), s)));
    }
}

TEST_CASE("erase_temporal keeps the eventual predicate") {
  CHECK(erase_temporal(TemporalOp::globally(phi())).print() == phi().print());
  CHECK(erase_temporal(TemporalOp::finally(4, TemporalOp::globally(phi()))).print() == phi().print());
  CHECK(erase_temporal(TemporalOp::until(psi(), 2, TemporalOp::globally(phi()))).print() ==
        phi().print());
  Expr conj = erase_temporal(TemporalOp::and_op(TemporalOp::globally(phi()),
                                                TemporalOp::finally(1, TemporalOp::globally(psi()))));
  CHECK(conj.print() == Expr::and_({phi(), psi()}).print());
}

TEST_CASE("erase_temporal rejects unsupported shapes") {
  CHECK_THROWS_AS(erase_temporal(TemporalOp::not_op(TemporalOp::globally(phi()))), UnsupportedShape);
  // two witness times stacked
  TemporalOp deep = TemporalOp::finally(1, TemporalOp::until(phi(), 3, TemporalOp::globally(psi())));
  CHECK_THROWS_AS(erase_temporal(deep), UnsupportedShape);
}

TEST_CASE("witness times must be concrete naturals") {
  CHECK_THROWS_AS(TemporalOp::until(phi(), -1, TemporalOp::globally(phi())), Error);
  CHECK_THROWS_AS(TemporalOp::finally(-2, TemporalOp::globally(phi())), Error);
}

TEST_CASE("annotations must be total and well-sorted") {
  NetworkInstance net = cloud::network();
  Annotation a = cloud::trivial(net.topo);
  CHECK_NOTHROW(check_annotation(a, net.topo, net.route_sort, {}));
  a.erase("e");
  CHECK_THROWS_AS(check_annotation(a, net.topo, net.route_sort, {}), Error);
  Annotation b = cloud::trivial(net.topo);
  b["e"] = TemporalOp::globally(Expr::lit_int(3));  // not a bool predicate
  CHECK_THROWS_AS(check_annotation(b, net.topo, net.route_sort, {}), SortError);
}
