#pragma once
// Core term language: many-sorted signatures with transition labels,
// regular-expression-like actions over diagonal sort pairs, and first-order
// sentences built from equations, transitions, connectives and block
// quantifiers.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tak {

using Name = std::string;

struct SyntaxError : std::runtime_error {
  explicit SyntaxError(const std::string& what) : std::runtime_error(what) {}
};

struct FuncProfile {
  std::vector<Name> args;
  Name result;
  friend bool operator==(const FuncProfile&, const FuncProfile&) = default;
};

// Sorts, function symbols, transition labels. Labels are binary relation
// symbols over a diagonal sort pair <s,s>; we store the single sort s.
// The three namespaces are independent.
struct Signature {
  std::set<Name> sorts;
  std::map<Name, FuncProfile> funcs;
  std::map<Name, Name> labels;

  bool has_sort(const Name& s) const { return sorts.count(s) != 0; }
  const FuncProfile* func(const Name& f) const;
  const Name* label_sort(const Name& l) const;
  friend bool operator==(const Signature&, const Signature&) = default;
};

void validate_signature(const Signature& sig);

// Variables to adjoin to a signature: first-order variables become fresh
// constants, label variables become fresh labels.
struct Block {
  std::map<Name, Name> vars;   // name -> sort
  std::map<Name, Name> lvars;  // name -> sort of the diagonal pair
  bool empty() const { return vars.empty() && lvars.empty(); }
  friend bool operator==(const Block&, const Block&) = default;
};

// Throws when a block name is already taken in its namespace: shadowing is
// ill-formed by construction.
Signature extend_block(const Signature& sig, const Block& x);

struct Term {
  Name sym;  // function symbol; "$k" marks argument hole k (1-based)
  std::vector<Term> args;
  Name sort;
  friend bool operator==(const Term&, const Term&) = default;
};

bool is_hole(const Term& t);
Term hole(int k, const Name& sort);
Term make_term(const Signature& sig, const Name& sym, std::vector<Term> args);
Term make_const(const Signature& sig, const Name& sym);

enum class ActOp { Label, Zero, One, Union, PreImp, Comp, Resid, Star };

struct Action {
  ActOp op = ActOp::Zero;
  Name label;  // when op == Label
  Name sort;
  std::vector<Action> kids;
  friend bool operator==(const Action&, const Action&) = default;
};

Action act_label(const Signature& sig, const Name& l);
Action act_zero(const Name& sort);
Action act_one(const Name& sort);
Action act_union(Action a, Action b);
Action act_preimp(Action a, Action b);
Action act_comp(Action a, Action b);
Action act_resid(Action a, Action b);
Action act_star(Action a);
// Derived constructors; each expands to the core grammar above.
Action act_complement(Action a);             // a ⊸ 0
Action act_converse(Action a);               // a ▷ 1
Action act_power(Action a, uint64_t n);      // 1, then left-nested ;
Action act_plus(Action a);                   // a ; a*
Action act_intersect(Action a, Action b);    // de Morgan through ⊸ 0
Action act_stuck(Action a);                  // (1 ⊸ a;a^-1)^c
Action act_live(Action a);                   // 1 ∩ a;a^-1

enum class SenOp { Eq, Trans, Implies, Or, And, Exists, Forall };

struct Sentence {
  SenOp op = SenOp::And;
  std::vector<Term> terms;     // Eq, Trans: exactly 2
  std::optional<Action> act;   // Trans
  std::vector<Sentence> kids;  // Implies: 2; Or/And: any; quantifiers: 1
  std::optional<Block> block;  // Exists/Forall
  friend bool operator==(const Sentence&, const Sentence&) = default;
};

Sentence sen_eq(Term t0, Term t1);
Sentence sen_trans(Term t0, Action a, Term t1);
Sentence sen_implies(Sentence a, Sentence b);
Sentence sen_or(std::vector<Sentence> kids);
Sentence sen_and(std::vector<Sentence> kids);
Sentence sen_exists(Block x, Sentence body);
Sentence sen_forall(Block x, Sentence body);
Sentence sen_true();   // empty conjunction
Sentence sen_false();  // empty disjunction
Sentence sen_not(Sentence a);
Sentence sen_iff(Sentence a, Sentence b);
// a1 <= a2 as a universally quantified implication between transitions;
// binder names are chosen fresh over sig.
Sentence action_le(const Signature& sig, const Action& a1, const Action& a2);
Sentence action_equiv(const Signature& sig, const Action& a1, const Action& a2);

void validate_term(const Signature& sig, const Term& t);
// Term with holes $1..$n of the given sorts (morphism images).
void validate_hterm(const Signature& sig, const Term& t,
                    const std::vector<Name>& hole_sorts);
void validate_action(const Signature& sig, const Action& a);
void validate_sentence(const Signature& sig, const Sentence& s);

// Alpha-canonical form: binders renamed to "%k" in first-use order ('%' is
// not a surface identifier character). Used for all set membership tests.
Sentence alpha_canon(const Sentence& s);
std::string term_key(const Term& t);
std::string action_key(const Action& a);
std::string sentence_key(const Sentence& s);
bool alpha_eq(const Sentence& a, const Sentence& b);

// Termination measure w^2*alpha + w*beta + gamma with lexicographic compare;
// components saturate at 2^63.
struct ActCost {
  uint64_t beta = 0, gamma = 0;
  auto operator<=>(const ActCost&) const = default;
};
struct Cost {
  uint64_t alpha = 0, beta = 0, gamma = 0;
  auto operator<=>(const Cost&) const = default;
};
ActCost action_complexity(const Action& a);
Cost complexity(const Sentence& s);

// Signature morphism in Kleisli style: sorts to sorts, function symbols to
// target terms with holes $1..$arity, labels to target actions.
struct GenMorphism {
  Signature src, dst;
  std::map<Name, Name> sort_map;
  std::map<Name, Term> func_map;
  std::map<Name, Action> label_map;
};

void validate_morphism(const GenMorphism& m);
bool is_plain(const GenMorphism& m);  // every image a single symbol
GenMorphism identity_morphism(const Signature& sig);
GenMorphism compose(const GenMorphism& g, const GenMorphism& f);  // g after f

Name translate_sort(const GenMorphism& m, const Name& s);
Term translate_term(const GenMorphism& m, const Term& t);
Action translate_action(const GenMorphism& m, const Action& a);
Sentence translate_sentence(const GenMorphism& m, const Sentence& s);

// Extend a morphism by a block on both sides; block names that are taken in
// the target are renamed fresh. Returns the morphism and the renaming used.
std::pair<GenMorphism, std::map<Name, Name>> extend_morphism(
    const GenMorphism& m, const Block& x);

// Substitution: identity-on-base morphism from base^D[X] into target (which
// must contain base). Variable images are terms/actions over target.
GenMorphism make_substitution(const Signature& base, const Block& x,
                              const Signature& target,
                              const std::map<Name, Term>& var_images,
                              const std::map<Name, Action>& lvar_images);

// Plug a quantifier body directly: every binder must receive an image, and
// images may not mention the binders (guaranteed when the quantified
// sentence is well-formed over the signature the images live in).
Sentence instantiate(const Sentence& quantified,
                     const std::map<Name, Term>& var_images,
                     const std::map<Name, Action>& lvar_images);

Name fresh_name(const Signature& sig, const Name& base);

}  // namespace tak
