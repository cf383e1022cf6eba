#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "tak/amalgam.hpp"

using namespace tak;

namespace {

// plain morphism: unmapped symbols keep their names
GenMorphism plain(const Signature& src, const Signature& dst,
                  std::map<Name, Name> sort_map) {
  GenMorphism m;
  m.src = src;
  m.dst = dst;
  for (const auto& s : src.sorts)
    m.sort_map[s] = sort_map.count(s) ? sort_map.at(s) : s;
  for (const auto& [f, p] : src.funcs) {
    std::vector<Term> hs;
    for (size_t i = 0; i < p.args.size(); ++i)
      hs.push_back(hole(int(i + 1), m.sort_map.at(p.args[i])));
    m.func_map[f] = Term{f, std::move(hs), m.sort_map.at(p.result)};
  }
  for (const auto& [l, s] : src.labels)
    m.label_map[l] = Action{ActOp::Label, l, m.sort_map.at(s), {}};
  validate_morphism(m);
  return m;
}

// two sorts with one constant each, merged to a single sort by both legs
Cospan two_sort_merge() {
  Signature base;
  base.sorts = {"s'", "s''"};
  base.funcs["d'"] = {{}, "s'"};
  base.funcs["d''"] = {{}, "s''"};
  Signature tgt;
  tgt.sorts = {"s"};
  tgt.funcs["d'"] = {{}, "s"};
  tgt.funcs["d''"] = {{}, "s"};
  GenMorphism chi = plain(base, tgt, {{"s'", "s"}, {"s''", "s"}});
  return {chi, chi};
}

// three sorts; the left leg merges the first two, the right leg the last two
Cospan three_sort_merge() {
  Signature base;
  base.sorts = {"s'", "s''", "s'''"};
  base.funcs["d'"] = {{}, "s'"};
  base.funcs["d''"] = {{}, "s''"};
  base.funcs["d'''"] = {{}, "s'''"};
  Signature t0;
  t0.sorts = {"s", "s'''"};
  t0.funcs["d'"] = {{}, "s"};
  t0.funcs["d''"] = {{}, "s"};
  t0.funcs["d'''"] = {{}, "s'''"};
  Signature t1;
  t1.sorts = {"s'", "s"};
  t1.funcs["d'"] = {{}, "s'"};
  t1.funcs["d''"] = {{}, "s"};
  t1.funcs["d'''"] = {{}, "s"};
  return {plain(base, t0, {{"s'", "s"}, {"s''", "s"}}),
          plain(base, t1, {{"s''", "s"}, {"s'''", "s"}})};
}

KleeneModel tiny_model(const Signature& sig, uint32_t n) {
  FiniteModel m;
  m.sig = sig;
  for (const auto& s : sig.sorts) m.carrier[s] = n;
  for (const auto& [f, p] : sig.funcs) {
    size_t rows = 1;
    for (size_t i = 0; i < p.args.size(); ++i) rows *= n;
    m.funcs[f] = std::vector<uint32_t>(rows, 0);
  }
  for (const auto& [l, s] : sig.labels) {
    (void)s;
    m.labels[l] = Relation::identity(n);
  }
  return standard(std::move(m));
}

}  // namespace

TEST_CASE("pushout merges shared preimages into one class") {
  Cospan c = two_sort_merge();
  PushoutResult p = pushout(c);
  CHECK(p.sig.sorts == std::set<Name>{"s"});
  CHECK(p.sig.funcs.size() == 2);
  CHECK(p.sig.funcs.at("d'").result == "s");
  CHECK(p.sig.funcs.at("d''").result == "s");
  CHECK(p.sort_classes.at("s").size() == 2);
  CHECK(p.func_classes.at("d'") ==
        std::vector<SideSym>{{0, "d'"}, {1, "d'"}});
  // the injections agree because the two legs do
  CHECK(p.inj0.sort_map == p.inj1.sort_map);
}

TEST_CASE("pushout along an identity leg reproduces the other target") {
  Signature base;
  base.sorts = {"s1", "s2"};
  base.funcs["d"] = {{}, "s1"};
  base.labels["p"] = "s2";
  Signature tgt;
  tgt.sorts = {"m"};
  tgt.funcs["d"] = {{}, "m"};
  tgt.labels["p"] = "m";
  GenMorphism chi = plain(base, tgt, {{"s1", "m"}, {"s2", "m"}});
  Cospan c{identity_morphism(base), chi};
  PushoutResult p = pushout(c);
  // same shape as the codomain of chi; the class keeps its least member's name
  CHECK(p.sig.sorts == std::set<Name>{"s1"});
  CHECK(p.sig.funcs.at("d").result == "s1");
  CHECK(p.sig.labels.at("p") == "s1");
  CHECK(p.inj0.sort_map.at("s1") == "s1");
  CHECK(p.inj0.sort_map.at("s2") == "s1");
  CHECK(p.inj1.sort_map.at("m") == "s1");
  CHECK(p.sort_classes.at("s1").size() == 3);
}

TEST_CASE("unrelated same-named symbols get side prefixes") {
  Signature base;
  base.sorts = {"s"};
  Signature t0;
  t0.sorts = {"s"};
  t0.funcs["d"] = {{}, "s"};
  Signature t1;
  t1.sorts = {"s"};
  t1.funcs["d"] = {{}, "s"};
  Cospan c{plain(base, t0, {}), plain(base, t1, {})};
  PushoutResult p = pushout(c);
  CHECK(p.sig.sorts == std::set<Name>{"s"});
  REQUIRE(p.sig.funcs.size() == 2);
  CHECK(p.sig.funcs.count("l_d") == 1);
  CHECK(p.sig.funcs.count("r_d") == 1);
  CHECK(p.func_classes.at("l_d") == std::vector<SideSym>{{0, "d"}});
  CHECK(p.func_classes.at("r_d") == std::vector<SideSym>{{1, "d"}});
}

TEST_CASE("pushout squares commute on translated sentences") {
  Cospan c = three_sort_merge();
  PushoutResult p = pushout(c);
  CHECK(p.sig.sorts == std::set<Name>{"s"});
  CHECK(p.sig.funcs.size() == 3);
  Sentence phi = sen_eq(make_const(c.left.src, "d'"),
                        Term{"d'", {}, "s'"});
  // d' and d''' live in different source sorts, so compare one-sided pairs
  Sentence via0 = translate_sentence(
      p.inj0, translate_sentence(c.left, phi));
  Sentence via1 = translate_sentence(
      p.inj1, translate_sentence(c.right, phi));
  CHECK(via0 == via1);
}

TEST_CASE("disjointness reports the least doubly merged sort") {
  DisjointReport d1 = is_disjoint(two_sort_merge());
  CHECK_FALSE(d1.disjoint);
  CHECK(d1.witness == Name("s'"));

  DisjointReport d2 = is_disjoint(three_sort_merge());
  CHECK_FALSE(d2.disjoint);
  CHECK(d2.witness == Name("s''"));

  Signature base;
  base.sorts = {"a", "b"};
  Cospan inj{identity_morphism(base), identity_morphism(base)};
  CHECK(is_disjoint(inj).disjoint);
}

TEST_CASE("amalgamating a model with itself over the identity returns it") {
  Signature sig;
  sig.sorts = {"s"};
  sig.funcs["d"] = {{}, "s"};
  sig.labels["p"] = "s";
  Cospan c{identity_morphism(sig), identity_morphism(sig)};
  PushoutResult p = pushout(c);
  KleeneModel m = tiny_model(sig, 2);
  auto r = amalgamate(c, p, m, m);
  REQUIRE(std::holds_alternative<KleeneModel>(r));
  CHECK(same_interpretation(std::get<KleeneModel>(r), m));
}

TEST_CASE("amalgam of reduct-equal models restores both inputs") {
  // base: one shared sort with a constant; each side adds a private sort
  Signature base;
  base.sorts = {"sh"};
  base.funcs["d"] = {{}, "sh"};
  base.labels["p"] = "sh";
  Signature t0 = base;
  t0.sorts.insert("a0");
  t0.funcs["e0"] = {{}, "a0"};
  Signature t1 = base;
  t1.sorts.insert("a1");
  t1.labels["q"] = "a1";
  Cospan c{plain(base, t0, {}), plain(base, t1, {})};
  CHECK(is_disjoint(c).disjoint);
  PushoutResult p = pushout(c);

  KleeneModel m0 = tiny_model(t0, 2);
  KleeneModel m1 = tiny_model(t1, 2);
  Relation r = Relation::empty(2);
  r.set(0, 1, true);
  m0.base.labels["p"] = r;
  m1.base.labels["p"] = r;  // keep the shared reduct equal
  m0 = standard(m0.base);
  m1 = standard(m1.base);

  auto res = amalgamate(c, p, m0, m1);
  REQUIRE(std::holds_alternative<KleeneModel>(res));
  const KleeneModel& merged = std::get<KleeneModel>(res);
  CHECK(same_interpretation(reduct(merged, p.inj0), m0));
  CHECK(same_interpretation(reduct(merged, p.inj1), m1));
}

TEST_CASE("reduct disagreement names the offending component") {
  Signature base;
  base.sorts = {"sh"};
  base.funcs["d"] = {{}, "sh"};
  Cospan c{identity_morphism(base), identity_morphism(base)};
  PushoutResult p = pushout(c);
  KleeneModel m0 = tiny_model(base, 2);
  KleeneModel m1 = tiny_model(base, 2);
  m1.base.funcs["d"] = {1};
  auto res = amalgamate(c, p, m0, m1);
  REQUIRE(std::holds_alternative<ReductMismatch>(res));
  CHECK(std::get<ReductMismatch>(res).component == "function d");

  m1.base.funcs["d"] = {0};
  m1.base.carrier["sh"] = 3;
  m1.base.labels.clear();
  m1 = standard(m1.base);
  auto res2 = amalgamate(c, p, m0, m1);
  REQUIRE(std::holds_alternative<ReductMismatch>(res2));
  CHECK(std::get<ReductMismatch>(res2).component ==
        "sort sh: carrier 2 vs 3");
}

TEST_CASE("cospans with mismatched sources are rejected") {
  Signature a;
  a.sorts = {"s"};
  Signature b;
  b.sorts = {"t"};
  Cospan c{identity_morphism(a), identity_morphism(b)};
  CHECK_THROWS_AS(pushout(c), AmalgamError);
}
