#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tak/semantics.hpp"

using namespace tak;

namespace {

Signature one_sort_sig() {
  Signature sig;
  sig.sorts = {"S"};
  sig.funcs["c0"] = {{}, "S"};
  sig.funcs["c1"] = {{}, "S"};
  sig.labels["p"] = "S";
  sig.labels["q"] = "S";
  return sig;
}

// Two named elements, p total, q = {(0,1)}, constants at 0 and 1.
FiniteModel two_elem_model() {
  FiniteModel m;
  m.sig = one_sort_sig();
  m.carrier["S"] = 2;
  m.funcs["c0"] = {0};
  m.funcs["c1"] = {1};
  m.labels["p"] = Relation::full(2);
  Relation q = Relation::empty(2);
  q.set(0, 1, true);
  m.labels["q"] = q;
  return m;
}

// exists {x,y}. not(x==y) and forall {z}. z==x or z==y
Sentence exactly_two(const Signature& sig, const Name& sort) {
  Block inner;
  inner.vars["z"] = sort;
  Block outer;
  outer.vars["x"] = sort;
  outer.vars["y"] = sort;
  Signature ext = extend_block(sig, outer);
  Signature ext2 = extend_block(ext, inner);
  Term x = make_const(ext, "x"), y = make_const(ext, "y");
  Term z = make_const(ext2, "z");
  Sentence all = sen_forall(inner, sen_or({sen_eq(z, x), sen_eq(z, y)}));
  return sen_exists(outer, sen_and({sen_not(sen_eq(x, y)), all}));
}

RelFamily powerset_family(uint32_t n) {
  RelFamily f;
  uint64_t total = uint64_t(1) << (n * n);
  for (uint64_t bits = 0; bits < total; ++bits) {
    Relation r = Relation::empty(n);
    for (uint32_t i = 0; i < n; ++i)
      for (uint32_t j = 0; j < n; ++j)
        if ((bits >> (i * n + j)) & 1) r.set(i, j, true);
    f.rels.push_back(r);
  }
  for (const Relation& r : f.rels) {
    Relation s = rel_star(r);
    f.star.push_back(size_t(std::find(f.rels.begin(), f.rels.end(), s) -
                            f.rels.begin()));
  }
  return f;
}

}  // namespace

TEST_CASE("relation operations") {
  Relation a = Relation::empty(3);
  a.set(0, 1, true);
  a.set(1, 2, true);

  Relation st = rel_star(a);
  Relation want = rel_union(a, Relation::identity(3));
  want.set(0, 2, true);
  CHECK(st == want);

  Relation conv = rel_converse(a);
  CHECK(conv.get(1, 0));
  CHECK(conv.get(2, 1));
  CHECK(conv.count() == 2);

  Relation b = Relation::empty(3);
  b.set(2, 0, true);
  Relation ab = rel_compose(a, b);
  CHECK(ab.count() == 1);
  CHECK(ab.get(1, 0));

  CHECK(rel_complement(Relation::empty(3)) == Relation::full(3));
  CHECK(rel_subset(a, st));
  CHECK(!rel_subset(st, a));
  CHECK(rel_intersect(st, a) == a);
  CHECK(Relation::full(3).count() == 9);
}

TEST_CASE("term and action evaluation") {
  KleeneModel m = standard(two_elem_model());
  const Signature& sig = m.base.sig;
  Env env;

  Term c0 = make_const(sig, "c0"), c1 = make_const(sig, "c1");
  CHECK(eval_term(m, env, c0) == 0);
  CHECK(eval_term(m, env, c1) == 1);

  Action p = act_label(sig, "p"), q = act_label(sig, "q");
  CHECK(eval_action(m, env, p) == Relation::full(2));
  CHECK(eval_action(m, env, act_zero("S")) == Relation::empty(2));
  CHECK(eval_action(m, env, act_one("S")) == Relation::identity(2));
  CHECK(eval_action(m, env, act_union(q, act_one("S"))).count() == 3);
  CHECK(eval_action(m, env, act_comp(q, q)) == Relation::empty(2));
  CHECK(eval_action(m, env, act_converse(q)).get(1, 0));
  CHECK(eval_action(m, env, act_complement(q)).count() == 3);
  CHECK(eval_action(m, env, act_preimp(q, q)).count() == 4);
}

TEST_CASE("star and derived forms evaluate") {
  KleeneModel m = standard(two_elem_model());
  const Signature& sig = m.base.sig;
  Env env;
  Action q = act_label(sig, "q");

  Relation want = Relation::identity(2);
  want.set(0, 1, true);
  CHECK(eval_action(m, env, act_star(q)) == want);
  CHECK(eval_action(m, env, act_plus(q)).count() == 1);

  // live: pairs (d,d) where q applies; stuck: where it does not.
  Relation live = eval_action(m, env, act_live(q));
  CHECK(live.count() == 1);
  CHECK(live.get(0, 0));
  Relation stuck = eval_action(m, env, act_stuck(q));
  CHECK(stuck.count() == 1);
  CHECK(stuck.get(1, 1));

  Relation inter = eval_action(m, env, act_intersect(q, act_label(sig, "p")));
  CHECK(inter == eval_action(m, env, q));
}

TEST_CASE("satisfaction of ground and propositional sentences") {
  FiniteModel fm = two_elem_model();
  const Signature& sig = fm.sig;
  Term c0 = make_const(sig, "c0"), c1 = make_const(sig, "c1");
  Action q = act_label(sig, "q");

  CHECK(satisfies(fm, sen_true()));
  CHECK(!satisfies(fm, sen_false()));
  CHECK(satisfies(fm, sen_trans(c0, q, c1)));
  CHECK(!satisfies(fm, sen_trans(c1, q, c0)));
  CHECK(!satisfies(fm, sen_eq(c0, c1)));
  CHECK(satisfies(fm, sen_implies(sen_eq(c0, c1), sen_false())));
  CHECK(satisfies(fm, sen_or({sen_eq(c0, c1), sen_trans(c0, q, c1)})));
  CHECK(!satisfies(fm, sen_and({sen_eq(c0, c1), sen_trans(c0, q, c1)})));
}

TEST_CASE("first-order quantifiers enumerate the carrier") {
  FiniteModel fm = two_elem_model();
  const Signature& sig = fm.sig;

  // p is total: forall x exists y. x =[p]=> y
  Block bx;
  bx.vars["x"] = "S";
  Signature ex = extend_block(sig, bx);
  Block by;
  by.vars["y"] = "S";
  Signature exy = extend_block(ex, by);
  Sentence body = sen_trans(make_const(exy, "x"), act_label(sig, "p"),
                            make_const(exy, "y"));
  Sentence phi = sen_forall(bx, sen_exists(by, body));
  CHECK(satisfies(fm, phi));

  // q is not total.
  Sentence bodyq = sen_trans(make_const(exy, "x"), act_label(sig, "q"),
                             make_const(exy, "y"));
  Sentence phiq = sen_forall(bx, sen_exists(by, bodyq));
  CHECK(!satisfies(fm, phiq));

  CHECK(satisfies(fm, exactly_two(sig, "S")));
  FiniteModel one = fm;
  one.carrier["S"] = 1;
  one.funcs["c0"] = {0};
  one.funcs["c1"] = {0};
  one.labels["p"] = Relation::full(1);
  one.labels["q"] = Relation::empty(1);
  CHECK(!satisfies(one, exactly_two(sig, "S")));
}

TEST_CASE("label variables range over all relations on standard sorts") {
  FiniteModel fm = two_elem_model();
  const Signature& sig = fm.sig;
  Term c0 = make_const(sig, "c0"), c1 = make_const(sig, "c1");

  Block lb;
  lb.lvars["pi"] = "S";
  Signature ext = extend_block(sig, lb);
  Action pi = act_label(ext, "pi");

  CHECK(satisfies(fm, sen_exists(lb, sen_trans(c0, pi, c1))));
  CHECK(!satisfies(fm, sen_forall(lb, sen_trans(c0, pi, c1))));
  // exists pi with pi empty and pi full simultaneously impossible
  Sentence both = sen_and({sen_trans(c0, pi, c1), sen_trans(c1, pi, c0)});
  CHECK(satisfies(fm, sen_exists(lb, both)));
  Sentence neither =
      sen_and({sen_trans(c0, pi, c1),
               sen_implies(sen_trans(c0, pi, c1), sen_false())});
  CHECK(!satisfies(fm, sen_exists(lb, neither)));
}

TEST_CASE("quantifier budgets") {
  Signature sig;
  sig.sorts = {"S"};
  FiniteModel fm;
  fm.sig = sig;
  fm.carrier["S"] = 7;

  Block b;
  b.vars["x"] = "S";
  Signature ext = extend_block(sig, b);
  Sentence phi = sen_forall(b, sen_eq(make_const(ext, "x"), make_const(ext, "x")));
  CHECK_THROWS_AS((void)satisfies(fm, phi), BudgetError);

  FiniteModel fm4;
  fm4.sig = sig;
  fm4.carrier["S"] = 4;
  Block lb;
  lb.lvars["pi"] = "S";
  Sentence lphi = sen_exists(lb, sen_true());
  CHECK_THROWS_AS((void)satisfies(fm4, lphi), BudgetError);
  fm4.carrier["S"] = 3;
  CHECK(satisfies(fm4, lphi));
}

TEST_CASE("explicit relation families: star table and membership") {
  FiniteModel fm = two_elem_model();
  KleeneModel km;
  km.base = fm;
  km.fam["S"] = powerset_family(2);
  CHECK(kleene_problems(km).empty());

  // Same truth values as the standard model on a label-quantified sentence.
  const Signature& sig = fm.sig;
  Term c0 = make_const(sig, "c0"), c1 = make_const(sig, "c1");
  Block lb;
  lb.lvars["pi"] = "S";
  Signature ext = extend_block(sig, lb);
  Action pi = act_label(ext, "pi");
  Sentence phi = sen_exists(lb, sen_and({sen_trans(c0, pi, c1),
                                         sen_implies(sen_trans(c1, pi, c1),
                                                     sen_false())}));
  CHECK(satisfies(km, phi) == satisfies(fm, phi));

  Env env;
  Action q = act_label(sig, "q");
  CHECK(eval_action(km, env, act_star(q)) ==
        eval_action(standard(fm), env, act_star(q)));

  // A family that is not closed: evaluation escapes it.
  KleeneModel bad;
  bad.base = fm;
  RelFamily small;
  small.rels = {Relation::empty(2), Relation::identity(2), fm.labels["p"],
                fm.labels["q"]};
  small.star = {1, 1, 2, 1};
  bad.fam["S"] = small;
  CHECK(!kleene_problems(bad).empty());
  CHECK_THROWS_AS((void)eval_action(bad, env, act_complement(q)), SemanticsError);

  // Star table that ignores the Kleene laws is reported.
  KleeneModel skew;
  skew.base = fm;
  skew.fam["S"] = powerset_family(2);
  auto& fam = skew.fam["S"];
  size_t empty_idx = size_t(std::find(fam.rels.begin(), fam.rels.end(),
                                      Relation::empty(2)) -
                            fam.rels.begin());
  fam.star[empty_idx] = empty_idx;  // empty* should contain the identity
  CHECK(!kleene_problems(skew).empty());
}

TEST_CASE("model validity reporting") {
  FiniteModel fm = two_elem_model();
  CHECK(model_problems(fm).empty());

  FiniteModel missing = fm;
  missing.funcs.erase("c1");
  CHECK(!model_problems(missing).empty());

  FiniteModel wrong = fm;
  wrong.funcs["c1"] = {5};
  CHECK(!model_problems(wrong).empty());

  FiniteModel dim = fm;
  dim.labels["q"] = Relation::empty(3);
  CHECK(!model_problems(dim).empty());

  FiniteModel extra = fm;
  extra.labels["zz"] = Relation::empty(2);
  CHECK(!model_problems(extra).empty());
}

TEST_CASE("reducts along plain and generalized morphisms") {
  FiniteModel fm = two_elem_model();

  Signature src;
  src.sorts = {"A"};
  src.funcs["k"] = {{}, "A"};
  src.labels["l"] = "A";

  GenMorphism chi;
  chi.src = src;
  chi.dst = fm.sig;
  chi.sort_map["A"] = "S";
  chi.func_map["k"] = make_const(fm.sig, "c1");
  chi.label_map["l"] =
      act_union(act_label(fm.sig, "q"), act_converse(act_label(fm.sig, "q")));
  validate_morphism(chi);

  FiniteModel r = reduct(fm, chi);
  CHECK(r.carrier.at("A") == 2);
  CHECK(r.funcs.at("k") == std::vector<uint32_t>{1});
  CHECK(r.labels.at("l").get(0, 1));
  CHECK(r.labels.at("l").get(1, 0));
  CHECK(!r.labels.at("l").get(0, 0));
  CHECK(model_problems(r).empty());

  // Satisfaction condition samples: r |= phi iff fm |= chi(phi).
  Term k = make_const(src, "k");
  std::vector<Sentence> phis;
  phis.push_back(sen_trans(k, act_label(src, "l"), k));
  phis.push_back(sen_eq(k, k));
  Block b;
  b.vars["v"] = "A";
  Signature ext = extend_block(src, b);
  phis.push_back(
      sen_exists(b, sen_trans(make_const(ext, "v"), act_star(act_label(src, "l")), k)));
  Block lb;
  lb.lvars["pi"] = "A";
  Signature extl = extend_block(src, lb);
  phis.push_back(sen_forall(
      lb, sen_implies(sen_trans(k, act_label(extl, "pi"), k), sen_trans(k, act_label(extl, "pi"), k))));
  for (const Sentence& phi : phis)
    CHECK(satisfies(r, phi) == satisfies(fm, translate_sentence(chi, phi)));
}

TEST_CASE("interpretation equality ignores display names") {
  FiniteModel a = two_elem_model();
  FiniteModel b = a;
  b.elem_names["S"] = {"left", "right"};
  CHECK(same_interpretation(a, b));
  CHECK(elem_display(b, "S", 0) == "left");
  CHECK(elem_display(a, "S", 0) == "e0");
  CHECK(elem_index(b, "S", "right") == uint32_t(1));
  CHECK(!elem_index(b, "S", "middle").has_value());

  FiniteModel c = a;
  c.labels["q"] = Relation::empty(2);
  CHECK(!same_interpretation(a, c));

  KleeneModel ka = standard(a), kb = standard(b);
  kb.fam["S"] = powerset_family(2);
  CHECK(!same_interpretation(ka, kb));
  ka.fam["S"] = powerset_family(2);
  CHECK(same_interpretation(ka, kb));
}

TEST_CASE("bounded search finds the least model in documented order") {
  Signature sig = one_sort_sig();
  SearchOutcome out = bounded_model_search(sig, {}, {}, 3);
  REQUIRE(out.model.has_value());
  CHECK(!out.exhausted);
  CHECK(out.model->carrier.at("S") == 1);
  CHECK(out.model->funcs.at("c0") == std::vector<uint32_t>{0});
  CHECK(out.model->labels.at("p") == Relation::empty(1));

  // Repeatable.
  SearchOutcome again = bounded_model_search(sig, {}, {}, 3);
  CHECK(same_interpretation(*again.model, *out.model));
}

TEST_CASE("bounded search honors constraints and exhaustion") {
  Signature sig = one_sort_sig();
  Term c0 = make_const(sig, "c0"), c1 = make_const(sig, "c1");
  Action p = act_label(sig, "p");

  std::vector<Sentence> t;
  t.push_back(exactly_two(sig, "S"));
  t.push_back(sen_trans(c0, p, c1));
  std::vector<Sentence> f;
  f.push_back(sen_eq(c0, c1));
  f.push_back(sen_trans(c1, p, c0));
  SearchOutcome out = bounded_model_search(sig, t, f, 3);
  REQUIRE(out.model.has_value());
  CHECK(out.model->carrier.at("S") == 2);
  FiniteModel& m = *out.model;
  uint32_t v0 = m.funcs.at("c0")[0], v1 = m.funcs.at("c1")[0];
  CHECK(v0 != v1);
  CHECK(m.labels.at("p").get(v0, v1));
  CHECK(!m.labels.at("p").get(v1, v0));
  for (const Sentence& s : t) CHECK(satisfies(m, s));
  for (const Sentence& s : f) CHECK(!satisfies(m, s));

  // c0 != c1 together with "every element equals c0" is unsatisfiable.
  Block b;
  b.vars["z"] = "S";
  Signature ext = extend_block(sig, b);
  Sentence allc0 = sen_forall(b, sen_eq(make_const(ext, "z"), c0));
  SearchOutcome bad = bounded_model_search(sig, {allc0}, {sen_eq(c0, c1)}, 3);
  CHECK(bad.exhausted);
  CHECK(!bad.model.has_value());
  CHECK(bad.constraint_evals > 0);

  // Conflicting unit transitions prune immediately.
  SearchOutcome clash =
      bounded_model_search(sig, {sen_trans(c0, p, c1), sen_eq(c0, c1)},
                           {sen_trans(c0, p, c1)}, 2);
  CHECK(clash.exhausted);
}

TEST_CASE("bounded search handles label-quantified constraints") {
  Signature sig;
  sig.sorts = {"S"};
  sig.funcs["c0"] = {{}, "S"};

  Term c0 = make_const(sig, "c0");
  Block lb;
  lb.lvars["pi"] = "S";
  Signature ext = extend_block(sig, lb);
  Action pi = act_label(ext, "pi");
  // forall pi. c0 =[pi]=> c0 is false in every model: pi can be empty.
  Sentence all_pi = sen_forall(lb, sen_trans(c0, pi, c0));
  SearchOutcome out = bounded_model_search(sig, {all_pi}, {}, 2);
  CHECK(out.exhausted);

  Sentence some_pi = sen_exists(lb, sen_trans(c0, pi, c0));
  SearchOutcome ok = bounded_model_search(sig, {some_pi}, {}, 2);
  REQUIRE(ok.model.has_value());
  CHECK(ok.model->carrier.at("S") == 1);
}
