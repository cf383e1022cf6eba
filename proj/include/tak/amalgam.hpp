#pragma once
// Signature pushouts by quotienting the disjoint symbol sum, and model
// amalgamation over a shared reduct.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tak/semantics.hpp"
#include "tak/syntax.hpp"

namespace tak {

struct AmalgamError : std::runtime_error {
  explicit AmalgamError(const std::string& what) : std::runtime_error(what) {}
};

// Two morphisms out of one shared source signature.
struct Cospan {
  GenMorphism left;   // into the first target
  GenMorphism right;  // into the second target
};

// Shared source, both legs valid and plain (symbols to symbols).
void validate_cospan(const Cospan& c);

// A target symbol tagged by which leg it came from: 0 = left, 1 = right.
struct SideSym {
  int side = 0;
  Name name;
  auto operator<=>(const SideSym&) const = default;
};

// The quotient signature with the two injections and, per namespace, the
// merged-symbol class behind every quotient symbol.
struct PushoutResult {
  Signature sig;
  GenMorphism inj0;  // left target -> sig
  GenMorphism inj1;  // right target -> sig
  std::map<Name, std::vector<SideSym>> sort_classes;
  std::map<Name, std::vector<SideSym>> func_classes;
  std::map<Name, std::vector<SideSym>> label_classes;
};

// Relates two target symbols when some source symbol maps onto both, closes
// transitively, and names each class after its least (side, name) member;
// clashes between distinct classes get an l_/r_ prefix.
PushoutResult pushout(const Cospan& c);

// A source sort is entangled under a leg when that leg identifies it with
// some other sort. The cospan is disjoint when no sort is entangled under
// both legs; otherwise the least offender is reported.
struct DisjointReport {
  bool disjoint = true;
  std::optional<Name> witness;
};
DisjointReport is_disjoint(const Cospan& c);

// First component on which the two reducts along the legs differ, in a fixed
// scan order: carriers, function tables, label relations, relation families.
struct ReductMismatch {
  std::string component;
};

// Merges two models over the pushout. Requires the reducts along the two
// legs to agree exactly; each quotient symbol is then interpreted by any of
// its members (they all agree). The reducts of the result along the
// injections reproduce the inputs.
std::variant<KleeneModel, ReductMismatch> amalgamate(const Cospan& c,
                                                     const PushoutResult& p,
                                                     const KleeneModel& m0,
                                                     const KleeneModel& m1);

}  // namespace tak
