#pragma once
// Finite models: carriers per sort, total function tables, one binary
// relation per label. Actions evaluate to relations; sentences to booleans.
// A model may designate, per sort, a family of relations closed under the
// action operations together with an explicit star table; sorts without an
// explicit family use the full powerset with reflexive-transitive closure.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tak/syntax.hpp"

namespace tak {

struct SemanticsError : std::runtime_error {
  explicit SemanticsError(const std::string& what) : std::runtime_error(what) {}
};

// Quantifier enumeration limits (see README): sorts quantified by a label
// variable must have carrier <= 3; plain first-order binders allow <= 6.
struct BudgetError : SemanticsError {
  explicit BudgetError(const std::string& what) : SemanticsError(what) {}
};

inline constexpr uint32_t kMaxRelationDim = 64;
inline constexpr uint32_t kMaxFirstOrderCarrier = 6;
inline constexpr uint32_t kMaxLabelQuantCarrier = 3;

// Binary relation on {0..n-1} as a bit matrix; bit j of rows[i] = (i,j).
struct Relation {
  uint32_t n = 0;
  std::vector<uint64_t> rows;

  static Relation empty(uint32_t n);
  static Relation identity(uint32_t n);
  static Relation full(uint32_t n);
  bool get(uint32_t i, uint32_t j) const { return (rows[i] >> j) & 1; }
  void set(uint32_t i, uint32_t j, bool v) {
    if (v)
      rows[i] |= uint64_t(1) << j;
    else
      rows[i] &= ~(uint64_t(1) << j);
  }
  uint32_t count() const;
  friend bool operator==(const Relation&, const Relation&) = default;
  auto operator<=>(const Relation&) const = default;
};

Relation rel_union(const Relation& a, const Relation& b);
Relation rel_intersect(const Relation& a, const Relation& b);
Relation rel_complement(const Relation& a);
Relation rel_compose(const Relation& a, const Relation& b);  // first a, then b
Relation rel_converse(const Relation& a);
Relation rel_star(const Relation& a);  // reflexive-transitive closure
bool rel_subset(const Relation& a, const Relation& b);

struct FiniteModel {
  Signature sig;
  std::map<Name, uint32_t> carrier;                // sort -> size, >= 1
  std::map<Name, std::vector<Name>> elem_names;    // optional display names
  std::map<Name, std::vector<uint32_t>> funcs;     // flat tables; first
                                                   // argument most significant
  std::map<Name, Relation> labels;
};

uint32_t carrier_of(const FiniteModel& m, const Name& sort);
Name elem_display(const FiniteModel& m, const Name& sort, uint32_t idx);
// Index of a display name in a sort's carrier, or nullopt.
std::optional<uint32_t> elem_index(const FiniteModel& m, const Name& sort,
                                   const Name& display);

// Designated relation family with its star table: star[i] indexes rels.
struct RelFamily {
  std::vector<Relation> rels;
  std::vector<size_t> star;
};

struct KleeneModel {
  FiniteModel base;
  std::map<Name, RelFamily> fam;  // sorts absent here are standard
};

KleeneModel standard(FiniteModel base);

// Valuation overlay for block-extended signatures.
struct Env {
  std::map<Name, uint32_t> vars;
  std::map<Name, Relation> lvars;
};

uint32_t eval_term(const KleeneModel& m, const Env& env, const Term& t);
Relation eval_action(const KleeneModel& m, const Env& env, const Action& a);
bool satisfies(const KleeneModel& m, const Env& env, const Sentence& s);
bool satisfies(const KleeneModel& m, const Sentence& s);
bool satisfies(const FiniteModel& m, const Sentence& s);

// Structural well-formedness; empty result means valid.
std::vector<std::string> model_problems(const FiniteModel& m);
// Base validity, closure of each explicit family under the action
// operations, label membership, star-table totality and the Kleene laws
// for the star (unit containment, absorption both ways, both induction
// implications).
std::vector<std::string> kleene_problems(const KleeneModel& m);

// Reduct along a morphism: carrier copied from the image sort, symbols
// interpreted through their image terms/actions, relation families copied.
FiniteModel reduct(const FiniteModel& m, const GenMorphism& chi);
KleeneModel reduct(const KleeneModel& m, const GenMorphism& chi);

// Interpretation equality; element display names are ignored.
bool same_interpretation(const FiniteModel& a, const FiniteModel& b);
bool same_interpretation(const KleeneModel& a, const KleeneModel& b);

struct SearchOutcome {
  bool exhausted = false;            // no model up to the bound
  std::optional<FiniteModel> model;  // first hit in enumeration order
  uint64_t constraint_evals = 0;     // satisfaction checks performed
};

// Enumerates standard models over sig with every carrier in 1..max_carrier,
// returning the first that makes every require_true sentence true and every
// require_false sentence false. Order: carrier vectors by total size then
// lexicographically (sorts in name order); function tables in symbol name
// order, each filled row-major counting up from all zeros; label relations
// in name order, bits row-major with 0 before 1. Candidates violating an
// already-decidable constraint are pruned before completion.
SearchOutcome bounded_model_search(const Signature& sig,
                                   const std::vector<Sentence>& require_true,
                                   const std::vector<Sentence>& require_false,
                                   uint32_t max_carrier);

}  // namespace tak
