#pragma once
// Concrete text syntax: parsing and pretty-printing for theory, proof,
// model and cospan documents. docs/grammar.md is the normative grammar.

#include <string>
#include <vector>

#include "tak/amalgam.hpp"
#include "tak/calculus.hpp"
#include "tak/semantics.hpp"
#include "tak/syntax.hpp"

namespace tak {

// lexical: malformed characters or tokens. parse: token stream does not
// match the grammar. wf: grammatical input that breaks a side condition
// (unknown symbol, sort clash, duplicate name, bad reference).
enum class DiagKind { Lexical, Parse, WellFormedness };

struct Diag {
  DiagKind kind = DiagKind::Parse;
  int line = 0;  // 1-based
  int col = 0;   // 1-based
  std::string message;
};

std::string diag_string(const Diag& d);

struct ParseError : std::runtime_error {
  Diag diag;
  explicit ParseError(Diag d) : std::runtime_error(diag_string(d)), diag(std::move(d)) {}
};

// A named signature with named axioms and optional named action shorthands.
// Shorthands are expanded during parsing; axiom and shorthand lists keep
// their declaration order.
struct TheoryDoc {
  Name name;
  Signature sig;
  std::vector<std::pair<Name, Action>> abbrevs;
  std::vector<std::pair<Name, Sentence>> axioms;

  const Sentence* axiom(const Name& n) const;
  const Action* abbrev(const Name& n) const;
};

// A finite interpretation of a theory's signature, with optional designated
// relation families. The referenced theory supplies the signature.
struct ModelDoc {
  Name name;
  Name theory;
  KleeneModel model;
};

// A named pair of plain morphisms with inline signatures.
struct CospanDoc {
  Name name;
  Cospan cospan;
};

TheoryDoc parse_theory(const std::string& text);

// The theory resolves @axiom references and action shorthands and supplies
// the root signature; without one those features become errors.
ProofDoc parse_proof(const std::string& text, const TheoryDoc* theory = nullptr);

ModelDoc parse_model(const std::string& text, const TheoryDoc& theory);

CospanDoc parse_cospan(const std::string& text);

// A sentence on its own, for command-line arguments. The signature may be
// the theory's or an extension of it.
Sentence parse_sentence(const std::string& text, const Signature& sig,
                        const TheoryDoc* theory = nullptr);

// Canonical text. Parsing the result yields the same value back (documents:
// equal up to alpha-renaming of binders). Emits LF line ends, expands all
// shorthands, never emits comments.
std::string pretty(const Term& t);
std::string pretty(const Action& a);
std::string pretty(const Sentence& s);
std::string pretty(const Sequent& q);
std::string pretty(const Signature& sig);  // the sorts/funcs/labels sections
std::string pretty(const TheoryDoc& d);
std::string pretty(const ProofDoc& d);
std::string pretty(const ModelDoc& d);
std::string pretty(const CospanDoc& d);

}  // namespace tak
