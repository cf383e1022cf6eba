#pragma once
// Proof kernel: a decision procedure for the atomic fragment (congruence
// closure plus transition transport) and a local checker for induction-style
// proof trees over sequents of sentence sets.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tak/syntax.hpp"

namespace tak {

// Both sides are finite sets; vectors may carry duplicates, membership and
// cardinality are always taken modulo alpha-renaming of binders.
struct Sequent {
  std::vector<Sentence> left;
  std::vector<Sentence> right;
  friend bool operator==(const Sequent&, const Sequent&) = default;
};

enum class Rule {
  Init,      // conclusion shares a sentence on both sides
  InitStar,  // same, restricted to a starred transition
  Cut,       // mediating sentence: right of premise 0, left of premise 1
  CutStar,   // same, restricted to a starred transition
  Modify,    // translate a premise along a signature morphism
  Atom,      // atomic side condition decided by decide_basic
  ZeroL,
  OneL,
  OneR,
  UnionL,
  UnionR,
  PreImpL,
  PreImpR,
  CompL,
  CompR,
  ResidL,
  ResidR,
  ImpL,
  ImpR,
  OrL,
  OrR,
  AndL,
  AndR,
  ExistsL,
  ExistsR,
  ForallL,
  ForallR,
  IndR0,      // collapse a starred transition to an equation
  IndRPlus,   // peel one step off the right end of a starred transition
  IndRMinus,  // peel one step off the left end
  IndLPlus,   // eliminate a starred transition on the left, forward invariant
  IndLMinus,  // same, backward invariant
  Kel,        // introduce a Kleene-algebra axiom instance on the left
};

const char* rule_name(Rule r);
std::optional<Rule> rule_from_name(const std::string& name);

enum class KleeneAxiom {
  OneLeStar,       // 1 <= a*
  StarAbsorbRight, // a*;a <= a*
  StarAbsorbLeft,  // a;a* <= a*
  CompLeLeft,      // a1;a2 <= a1  ->  a1;a2* <= a1
  CompLeRight,     // a1;a2 <= a2  ->  a1*;a2 <= a2
};

const char* axiom_name(KleeneAxiom a);
std::optional<KleeneAxiom> axiom_from_name(const std::string& name);

// The closed sentence asserting the chosen axiom for the given actions.
// The two-action forms take a second argument; the rest ignore it.
Sentence axiom_sentence(const Signature& sig, KleeneAxiom form,
                        const Action& a1,
                        const std::optional<Action>& a2 = std::nullopt);

// Rule-specific data a script must pin down so checking stays local.
// principal: the sentence introduced by the conclusion; for the cut rules it
// is the mediating sentence instead. witness: the middle term of the
// two-premise composition/residual/induction rules. target: the invariant
// action of the left induction rules. fresh: names adjoined to the premise
// signature (one for CompL/ResidL, three for the left induction rules).
// term_images/act_images: the substitution of ExistsR/ForallL.
struct RuleChoice {
  std::optional<Sentence> principal;
  std::size_t index = 0;  // UnionR, OrR, AndL
  std::optional<Term> witness;
  std::optional<Action> target;
  std::vector<Name> fresh;
  std::map<Name, Term> term_images;
  std::map<Name, Action> act_images;
  std::optional<KleeneAxiom> axiom;       // Kel
  std::vector<Action> axiom_args;        // Kel: one or two actions
  std::optional<GenMorphism> morphism;   // Modify
};

struct ProofNode {
  Rule rule = Rule::Init;
  RuleChoice choice;
  Sequent seq;
  std::vector<ProofNode> premises;
};

enum class RuleSet { Ind, Kel };

struct ProofDoc {
  Name name;
  Name theory;  // name of the theory document the script was written against
  bool intuitionistic = false;
  RuleSet ruleset = RuleSet::Ind;
  ProofNode root;
};

// node_path: child indices from the root, "0.2.1"; empty for the root or for
// document-level failures. rule: name of the rule at the offending node.
struct Verdict {
  bool ok = true;
  std::string node_path;
  std::string rule;
  std::string message;
};

// Entailment for atomic sentences: equations and single-label transitions
// between ground terms. Sound and complete for the fragment: congruence
// closure over all subterms, then some conclusion must be a congruent
// equation or a transition transported along congruent endpoints.
// Throws SyntaxError on sentences outside the fragment.
bool decide_basic(const Signature& sig, const std::vector<Sentence>& lhs,
                  const std::vector<Sentence>& rhs);

// Checks every node locally: stated sentences well-formed over the node's
// signature, choice data present and well-shaped, premise actives present,
// and the stated contexts within the bounds the rule allows. Signatures are
// tracked top-down; fresh names must be absent from the conclusion's
// signature. In intuitionistic mode every right side has at most one
// sentence modulo alpha. The ruleset selects induction or axiom-elimination
// rules; the other family is rejected.
Verdict check_proof(const Signature& sig, const ProofDoc& doc);

}  // namespace tak
