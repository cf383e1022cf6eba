#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tak/surface.hpp"

using namespace tak;

namespace {

const char* kTheory = R"(theory tst
sorts S
funcs
  c0 : S
  c1 : S
  f : S S -> S
labels
  p : S ~ S
  q : S ~ S
actions
  pq = p ; q
axioms
  refl = forall {x : S} . x == x
)";

TheoryDoc tst() { return parse_theory(kTheory); }

// parse an action by wrapping it in a transition sentence
Action pa(const TheoryDoc& th, const std::string& a) {
  Sentence s = parse_sentence("c0 =[" + a + "]=> c1", th.sig, &th);
  return *s.act;
}

Diag diag_of(const std::string& text) {
  try {
    parse_theory(text);
  } catch (const ParseError& e) {
    return e.diag;
  }
  FAIL("expected a parse error");
  return {};
}

}  // namespace

TEST_CASE("lexer basics") {
  TheoryDoc th = parse_theory("theory t -- trailing comment\r\n-- whole line\n");
  CHECK(th.name == "t");

  Diag d = diag_of("theory t\nsorts %");
  CHECK(d.kind == DiagKind::Lexical);
  CHECK(d.line == 2);
  CHECK(d.col == 7);

  CHECK_THROWS_AS(parse_theory("theory t <-"), ParseError);
  CHECK_THROWS_AS(parse_theory("theory t |"), ParseError);
}

TEST_CASE("reserved words are not names") {
  Diag d = diag_of("theory step");
  CHECK(d.kind == DiagKind::Parse);
  CHECK(d.message.find("reserved") != std::string::npos);
}

TEST_CASE("action precedence and shorthands") {
  TheoryDoc th = tst();
  Action p = act_label(th.sig, "p");
  Action q = act_label(th.sig, "q");

  CHECK(pa(th, "p ; q U q") == act_union(act_comp(p, q), q));
  CHECK(pa(th, "p U q ; q") == act_union(p, act_comp(q, q)));
  CHECK(pa(th, "p ; q ; p") == act_comp(act_comp(p, q), p));
  CHECK(pa(th, "p |> q") == act_resid(p, q));
  CHECK(pa(th, "p -o q") == act_preimp(p, q));
  CHECK(pa(th, "p U q cap p") == act_intersect(act_union(p, q), p));
  CHECK(pa(th, "p ; q*") == act_comp(p, act_star(q)));
  CHECK(pa(th, "(p ; q)*") == act_star(act_comp(p, q)));
  CHECK(pa(th, "p**") == act_star(act_star(p)));
  CHECK(pa(th, "p^c") == act_complement(p));
  CHECK(pa(th, "p^-1") == act_converse(p));
  CHECK(pa(th, "p^3") == act_power(p, 3));
  CHECK(pa(th, "p^0") == act_one("S"));
  CHECK(pa(th, "p^+") == act_plus(p));
  CHECK(pa(th, "p^bot") == act_stuck(p));
  CHECK(pa(th, "p^top") == act_live(p));
  CHECK(pa(th, "0[S]") == act_zero("S"));
  CHECK(pa(th, "1[S] ; p") == act_comp(act_one("S"), p));
  CHECK(pa(th, "pq") == act_comp(p, q));  // shorthand expands at parse
}

TEST_CASE("sentence precedence") {
  TheoryDoc th = tst();
  Signature sig = th.sig;
  Term c0 = make_const(sig, "c0");
  Term c1 = make_const(sig, "c1");
  Sentence e00 = sen_eq(c0, c0);
  Sentence e01 = sen_eq(c0, c1);

  CHECK(parse_sentence("c0 == c0", sig) == e00);
  CHECK(parse_sentence("true", sig) == sen_true());
  CHECK(parse_sentence("false", sig) == sen_false());
  CHECK(parse_sentence("not c0 == c0", sig) == sen_not(e00));
  CHECK(parse_sentence("c0 == c0 /\\ c0 == c1 \\/ c0 == c1", sig) ==
        sen_or({sen_and({e00, e01}), e01}));
  CHECK(parse_sentence("c0 == c0 -> c0 == c1 -> c0 == c0", sig) ==
        sen_implies(e00, sen_implies(e01, e00)));
  CHECK(parse_sentence("c0 == c0 <-> c0 == c1", sig) == sen_iff(e00, e01));
  CHECK(parse_sentence("and { c0 == c0 }", sig) == sen_and({e00}));
  CHECK(parse_sentence("or {}", sig) == sen_false());
  CHECK(parse_sentence("f(c0, c1) == c1", sig) ==
        sen_eq(make_term(sig, "f", {c0, c1}), c1));

  Block b;
  b.vars["u"] = "S";
  Signature ext = extend_block(sig, b);
  Sentence body = sen_and({sen_eq(make_const(ext, "u"), c0),
                           sen_eq(make_const(ext, "u"), c1)});
  CHECK(parse_sentence("forall {u : S} . u == c0 /\\ u == c1", sig) ==
        sen_forall(b, body));

  Block lb;
  lb.lvars["r"] = "S";
  Signature lext = extend_block(sig, lb);
  CHECK(parse_sentence("exists {r : S ~ S} . c0 =[r]=> c1", sig) ==
        sen_exists(lb, sen_trans(c0, act_label(lext, "r"), c1)));

  CHECK(parse_sentence("@refl", sig, &th) == *th.axiom("refl"));
}

TEST_CASE("theory documents round-trip") {
  TheoryDoc th = tst();
  CHECK(th.name == "tst");
  CHECK(th.sig.sorts == std::set<Name>{"S"});
  CHECK(th.sig.funcs.at("f").args == std::vector<Name>{"S", "S"});
  CHECK(th.sig.labels.at("q") == "S");
  REQUIRE(th.abbrevs.size() == 1);
  CHECK(th.abbrevs[0].second ==
        act_comp(act_label(th.sig, "p"), act_label(th.sig, "q")));
  REQUIRE(th.axioms.size() == 1);

  std::string one = pretty(th);
  TheoryDoc th2 = parse_theory(one);
  CHECK(th2.name == th.name);
  CHECK(th2.sig == th.sig);
  CHECK(th2.abbrevs == th.abbrevs);
  CHECK(th2.axioms == th.axioms);
  CHECK(pretty(th2) == one);
}

TEST_CASE("theory diagnostics") {
  Diag d = diag_of("theory t\nsorts S S");
  CHECK(d.kind == DiagKind::WellFormedness);
  CHECK(d.line == 2);
  CHECK(d.col == 9);

  d = diag_of("theory t\nsorts S\nfuncs\n  c : T");
  CHECK(d.kind == DiagKind::WellFormedness);
  CHECK(d.line == 4);
  CHECK(d.col == 7);

  d = diag_of("theory t\nsorts S T\nlabels\n  l : S ~ T");
  CHECK(d.message.find("share one sort") != std::string::npos);

  d = diag_of("theory t\nsorts S\nlabels\n  l : S ~ S\nactions\n  l = l");
  CHECK(d.message.find("already taken") != std::string::npos);
}

TEST_CASE("proof scripts parse with signature tracking") {
  TheoryDoc th = tst();
  const char* text = R"(proof demo
use tst
mode intuitionistic
rules ind

step forall_r
  on forall {x : S, y : S} . x == y -> x =[p*]=> y
  |- forall {x : S, y : S} . x == y -> x =[p*]=> y
{
  step imp_r
    on x == y -> x =[p*]=> y
    x == y |- x =[p*]=> y
  {
    step comp_l
      on x =[p ; q]=> y
      fresh z
      x == y, x =[p ; q]=> y |- x =[p*]=> y
    {
      step init
        x == y, x =[p]=> z, z =[q]=> y |- x =[p]=> z
    }
  }
}
)";
  ProofDoc doc = parse_proof(text, &th);
  CHECK(doc.name == "demo");
  CHECK(doc.theory == "tst");
  CHECK(doc.intuitionistic);
  CHECK(doc.ruleset == RuleSet::Ind);
  CHECK(doc.root.rule == Rule::ForallR);
  REQUIRE(doc.root.premises.size() == 1);
  const ProofNode& imp = doc.root.premises[0];
  CHECK(imp.rule == Rule::ImpR);
  CHECK(imp.seq.left.size() == 1);
  const ProofNode& comp = imp.premises[0];
  CHECK(comp.rule == Rule::CompL);
  CHECK(comp.choice.fresh == std::vector<Name>{"z"});
  const ProofNode& leaf = comp.premises[0];
  CHECK(leaf.seq.left.size() == 3);
  CHECK(leaf.premises.empty());

  std::string one = pretty(doc);
  ProofDoc doc2 = parse_proof(one, &th);
  CHECK(pretty(doc2) == one);
}

TEST_CASE("proof clause forms") {
  TheoryDoc th = tst();
  const char* text = R"(proof clauses
use tst

step forall_l
  on @refl
  with x := f(c0, c1)
  @refl |- f(c0, c1) == f(c0, c1)
{
  step or_r
    at 1
    f(c0, c1) == f(c0, c1) |- c0 == c1 \/ f(c0, c1) == f(c0, c1)
  step kel
    axiom comp_le_left(p, q)
    via c0
    |- c0 == c0
}
)";
  ProofDoc doc = parse_proof(text, &th);
  const RuleChoice& top = doc.root.choice;
  CHECK(top.principal == *th.axiom("refl"));
  CHECK(top.term_images.at("x") == make_term(th.sig, "f", {make_const(th.sig, "c0"),
                                                           make_const(th.sig, "c1")}));
  REQUIRE(doc.root.premises.size() == 2);
  CHECK(doc.root.premises[0].choice.index == 1);
  const RuleChoice& kel = doc.root.premises[1].choice;
  CHECK(kel.axiom == KleeneAxiom::CompLeLeft);
  REQUIRE(kel.axiom_args.size() == 2);
  CHECK(kel.axiom_args[1] == act_label(th.sig, "q"));
  CHECK(kel.witness == make_const(th.sig, "c0"));

  std::string one = pretty(doc);
  CHECK(pretty(parse_proof(one, &th)) == one);
}

TEST_CASE("modify carries an inline morphism") {
  TheoryDoc th = tst();
  const char* text = R"(proof reindex
use tst

step modify
  morphism {
    src {
      sorts T
      funcs
        e0 : T
        g : T -> T
      labels
        r : T ~ T
    }
    dst {
      sorts S
      funcs
        c0 : S
        c1 : S
        f : S S -> S
      labels
        p : S ~ S
        q : S ~ S
    }
    map sort T => S
    map func e0 => f(c0, c1)
    map func g => f($1, c0)
    map label r => p ; q
  }
  |- c0 == c0
{
  step init
    e0 == e0, g(e0) == e0 |- e0 == e0
}
)";
  ProofDoc doc = parse_proof(text, &th);
  REQUIRE(doc.root.choice.morphism.has_value());
  const GenMorphism& m = *doc.root.choice.morphism;
  CHECK(m.sort_map.at("T") == "S");
  CHECK(m.func_map.at("g") ==
        make_term(th.sig, "f", {hole(1, "S"), make_const(th.sig, "c0")}));
  CHECK(m.label_map.at("r") ==
        act_comp(act_label(th.sig, "p"), act_label(th.sig, "q")));
  CHECK(doc.root.premises[0].seq.left.size() == 2);

  std::string one = pretty(doc);
  CHECK(pretty(parse_proof(one, &th)) == one);
}

TEST_CASE("proof diagnostics") {
  TheoryDoc th = tst();
  auto bad = [&](const char* text) {
    try {
      parse_proof(text, &th);
    } catch (const ParseError& e) {
      return e.diag;
    }
    FAIL("expected a parse error");
    return Diag{};
  };

  Diag d = bad("proof x\nuse tst\nstep frobnicate |- c0 == c0");
  CHECK(d.kind == DiagKind::Parse);
  CHECK(d.message.find("unknown rule") != std::string::npos);

  d = bad("proof x\nuse tst\nstep comp_l\n  on c0 =[p]=> c1\n  |- c0 == c0\n{\n  step init |- c0 == c0\n}");
  CHECK(d.message.find("one fresh name") != std::string::npos);

  d = bad("proof x\nuse tst\nstep forall_l\n  on @refl\n  with y := c0\n  |- c0 == c0");
  CHECK(d.message.find("not bound") != std::string::npos);

  d = bad("proof x\nuse tst\nstep init\n  on c0 == c0\n  on c0 == c0\n  |- c0 == c0");
  CHECK(d.message.find("duplicate 'on'") != std::string::npos);

  d = bad("proof x\nuse other\nstep init |- c0 == c0");
  CHECK(d.kind == DiagKind::WellFormedness);
}

TEST_CASE("model documents round-trip") {
  TheoryDoc th = tst();
  const char* text = R"(model m0
use tst

carrier S = a0 a1

func c0 = a0
func c1 = a1
func f(a0, a0) = a0
func f(a0, a1) = a1
func f(a1, a0) = a1
func f(a1, a1) = a0

label p = { (a0, a1) }
label q = {}
)";
  ModelDoc doc = parse_model(text, th);
  CHECK(doc.name == "m0");
  CHECK(doc.model.base.carrier.at("S") == 2);
  CHECK(doc.model.base.funcs.at("f") == std::vector<uint32_t>{0, 1, 1, 0});
  CHECK(doc.model.base.labels.at("p").get(0, 1));
  CHECK(!doc.model.base.labels.at("p").get(1, 0));
  CHECK(doc.model.fam.empty());
  CHECK(satisfies(doc.model, *th.axiom("refl")));

  std::string one = pretty(doc);
  ModelDoc doc2 = parse_model(one, th);
  CHECK(same_interpretation(doc2.model, doc.model));
  CHECK(pretty(doc2) == one);
}

TEST_CASE("model documents with explicit families") {
  TheoryDoc th = tst();
  const char* text = R"(model tiny
use tst
carrier S = e
func c0 = e
func c1 = e
func f(e, e) = e
label p = { (e, e) }
label q = {}
kleene S {
  rel r0 = {}
  rel r1 = { (e, e) }
  star r0 = r1
  star r1 = r1
}
)";
  ModelDoc doc = parse_model(text, th);
  REQUIRE(doc.model.fam.count("S") == 1);
  CHECK(doc.model.fam.at("S").rels.size() == 2);
  CHECK(doc.model.fam.at("S").star == std::vector<size_t>{1, 1});

  std::string one = pretty(doc);
  ModelDoc doc2 = parse_model(one, th);
  CHECK(same_interpretation(doc2.model, doc.model));
  CHECK(doc2.model.fam.at("S").star == doc.model.fam.at("S").star);
  CHECK(pretty(doc2) == one);
}

TEST_CASE("model diagnostics") {
  TheoryDoc th = tst();
  auto bad = [&](const std::string& text) {
    try {
      parse_model(text, th);
    } catch (const ParseError& e) {
      return e.diag;
    }
    FAIL("expected a parse error");
    return Diag{};
  };

  CHECK(bad("model m\nuse tst\ncarrier S = a\nfunc c0 = a\nfunc c1 = a\n"
            "label p = {}\nlabel q = {}")
            .message.find("no table for function 'f'") != std::string::npos);
  CHECK(bad("model m\nuse tst\ncarrier S = a b\nfunc c0 = a\nfunc c1 = a\n"
            "func f(a, a) = a\nlabel p = {}\nlabel q = {}")
            .message.find("missing rows") != std::string::npos);
  CHECK(bad("model m\nuse tst\ncarrier S = a\nfunc c0 = z\n").message.find(
            "unknown element") != std::string::npos);
  CHECK(bad("model m\nuse wrong\ncarrier S = a").message.find("for theory") !=
        std::string::npos);
  // empty relation is not star-closed: its star contains the diagonal
  CHECK(bad("model m\nuse tst\ncarrier S = e\nfunc c0 = e\nfunc c1 = e\n"
            "func f(e, e) = e\nlabel p = {}\nlabel q = {}\n"
            "kleene S { rel r0 = {} rel r1 = { (e, e) } star r0 = r0 star r1 = r1 }")
            .kind == DiagKind::WellFormedness);
}

TEST_CASE("cospan documents round-trip") {
  const char* text = R"(cospan d1
base
  sorts s' s''
  funcs
    d' : s'
    d'' : s''
left
  sorts s
  funcs
    d' : s
    d'' : s
  map sort s' => s
  map sort s'' => s
right
  sorts s
  funcs
    d' : s
    d'' : s
  map sort s' => s
  map sort s'' => s
)";
  CospanDoc doc = parse_cospan(text);
  CHECK(doc.name == "d1");
  CHECK(doc.cospan.left.src.sorts == std::set<Name>{"s'", "s''"});
  CHECK(doc.cospan.left.sort_map.at("s'") == "s");
  CHECK(doc.cospan.left.sort_map.at("s''") == "s");
  CHECK(is_plain(doc.cospan.left));

  DisjointReport rep = is_disjoint(doc.cospan);
  CHECK(!rep.disjoint);
  CHECK(rep.witness == Name("s'"));

  std::string one = pretty(doc);
  CospanDoc doc2 = parse_cospan(one);
  CHECK(doc2.cospan.left.sort_map == doc.cospan.left.sort_map);
  CHECK(doc2.cospan.right.func_map == doc.cospan.right.func_map);
  CHECK(pretty(doc2) == one);
}

TEST_CASE("cospan diagnostics") {
  auto bad = [&](const std::string& text) {
    try {
      parse_cospan(text);
    } catch (const ParseError& e) {
      return e.diag;
    }
    FAIL("expected a parse error");
    return Diag{};
  };
  // a base sort with no same-named target sort needs an explicit map
  CHECK(bad("cospan c\nbase\n  sorts a\nleft\n  sorts b\nright\n  sorts b\n"
            "  map sort a => b")
            .message.find("no image") != std::string::npos);
  // symbol-to-symbol images with name defaulting parse fine
  CHECK_NOTHROW(parse_cospan(
      "cospan c\nbase\n  sorts a\n  funcs\n    d : a\nleft\n  sorts b\n"
      "  funcs\n    e : b\n  map sort a => b\n  map func d => e\n"
      "right\n  sorts b\n  funcs\n    d : b\n  map sort a => b\n"));
  // cospan legs only accept symbol-to-symbol images
  CHECK(bad("cospan c\nbase\n  sorts a\n  funcs\n    d : a\nleft\n  sorts b\n"
            "  funcs\n    e : b\n    w : b -> b\n  map sort a => b\n"
            "  map func d => w(e)\n"
            "right\n  sorts b\n  funcs\n    d : b\n  map sort a => b\n")
            .message.find("plain symbol images") != std::string::npos);
}

TEST_CASE("sequent printing") {
  TheoryDoc th = tst();
  Sequent q;
  q.right.push_back(*th.axiom("refl"));
  CHECK(pretty(q) == "|- forall {x : S} . x == x");
  q.left.push_back(sen_true());
  q.right.clear();
  CHECK(pretty(q) == "true |-");
}
