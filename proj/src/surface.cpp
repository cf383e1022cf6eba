#include "tak/surface.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace tak {

std::string diag_string(const Diag& d) {
  const char* kind = "parse error";
  if (d.kind == DiagKind::Lexical) kind = "lexical error";
  if (d.kind == DiagKind::WellFormedness) kind = "ill-formed document";
  return std::to_string(d.line) + ":" + std::to_string(d.col) + ": " +
         std::string(kind) + ": " + d.message;
}

const Sentence* TheoryDoc::axiom(const Name& n) const {
  for (const auto& [name, s] : axioms)
    if (name == n) return &s;
  return nullptr;
}

const Action* TheoryDoc::abbrev(const Name& n) const {
  for (const auto& [name, a] : abbrevs)
    if (name == n) return &a;
  return nullptr;
}

namespace {

[[noreturn]] void raise(DiagKind k, int line, int col, std::string msg) {
  throw ParseError(Diag{k, line, col, std::move(msg)});
}

// ---------------------------------------------------------------------------
// Lexer

enum class Tok {
  Word,     // identifier or keyword: [A-Za-z0-9_']+, not all digits
  Number,   // all digits
  LParen, RParen, LBrace, RBrace, LBrack, RBrack,
  Comma, Dot, Colon, Assign, Tilde, Semi, Star, Caret, Plus, Minus, Dollar,
  Eq, EqEq, FatArrow, LTrans, RTrans,
  Arrow, Iff, PreImp, And, Or, Turnstile, Resid, At,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1, col = 1;
};

bool word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_' || c == '\'';
}

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  size_t i = 0;
  int line = 1, col = 1;
  auto bump = [&](size_t n) {
    col += static_cast<int>(n);
    i += n;
  };
  auto peek = [&](size_t k) -> char { return i + k < s.size() ? s[i + k] : '\0'; };
  while (i < s.size()) {
    char c = s[i];
    if (c == ' ' || c == '\t') {
      bump(1);
      continue;
    }
    if (c == '\n') {
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (c == '\r') {
      if (peek(1) != '\n') raise(DiagKind::Lexical, line, col, "stray carriage return");
      i += 2;
      ++line;
      col = 1;
      continue;
    }
    if (c == '-' && peek(1) == '-') {
      while (i < s.size() && s[i] != '\n') bump(1);
      continue;
    }
    int tl = line, tc = col;
    auto one = [&](Tok k, size_t n) {
      out.push_back({k, s.substr(i, n), tl, tc});
      bump(n);
    };
    if (word_char(c)) {
      size_t j = i;
      bool digits = true;
      while (j < s.size() && word_char(s[j])) {
        if (!(s[j] >= '0' && s[j] <= '9')) digits = false;
        ++j;
      }
      one(digits ? Tok::Number : Tok::Word, j - i);
      continue;
    }
    switch (c) {
      case '(': one(Tok::LParen, 1); continue;
      case ')': one(Tok::RParen, 1); continue;
      case '{': one(Tok::LBrace, 1); continue;
      case '}': one(Tok::RBrace, 1); continue;
      case '[': one(Tok::LBrack, 1); continue;
      case ']':
        if (peek(1) == '=' && peek(2) == '>') one(Tok::RTrans, 3);
        else one(Tok::RBrack, 1);
        continue;
      case ',': one(Tok::Comma, 1); continue;
      case '.': one(Tok::Dot, 1); continue;
      case ':':
        if (peek(1) == '=') one(Tok::Assign, 2);
        else one(Tok::Colon, 1);
        continue;
      case '~': one(Tok::Tilde, 1); continue;
      case ';': one(Tok::Semi, 1); continue;
      case '*': one(Tok::Star, 1); continue;
      case '^': one(Tok::Caret, 1); continue;
      case '+': one(Tok::Plus, 1); continue;
      case '$': one(Tok::Dollar, 1); continue;
      case '@': one(Tok::At, 1); continue;
      case '=':
        if (peek(1) == '=') one(Tok::EqEq, 2);
        else if (peek(1) == '[') one(Tok::LTrans, 2);
        else if (peek(1) == '>') one(Tok::FatArrow, 2);
        else one(Tok::Eq, 1);
        continue;
      case '-':
        if (peek(1) == '>') one(Tok::Arrow, 2);
        else if (peek(1) == 'o' && !word_char(peek(2))) one(Tok::PreImp, 2);
        else one(Tok::Minus, 1);
        continue;
      case '|':
        if (peek(1) == '-') one(Tok::Turnstile, 2);
        else if (peek(1) == '>') one(Tok::Resid, 2);
        else raise(DiagKind::Lexical, line, col, "expected '|-' or '|>'");
        continue;
      case '/':
        if (peek(1) == '\\') one(Tok::And, 2);
        else raise(DiagKind::Lexical, line, col, "expected '/\\'");
        continue;
      case '\\':
        if (peek(1) == '/') one(Tok::Or, 2);
        else raise(DiagKind::Lexical, line, col, "expected '\\/'");
        continue;
      case '<':
        if (peek(1) == '-' && peek(2) == '>') one(Tok::Iff, 3);
        else raise(DiagKind::Lexical, line, col, "expected '<->'");
        continue;
      default:
        raise(DiagKind::Lexical, line, col,
              std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

const std::set<std::string>& reserved_words() {
  static const std::set<std::string> r = {
      "theory", "proof",  "model",  "cospan", "use",     "mode",   "rules",
      "sorts",  "funcs",  "labels", "actions", "axioms",
      "step",   "on",     "at",     "via",    "target",  "fresh",  "with",
      "axiom",  "morphism", "src",  "dst",    "map",
      "sort",   "func",   "label",  "carrier", "kleene", "rel",    "star",
      "base",   "left",   "right",
      "forall", "exists", "and",    "or",     "not",     "true",   "false",
      "U",      "cap",
      "classical", "intuitionistic", "ind",   "kel",
  };
  return r;
}

bool is_reserved(const std::string& w) { return reserved_words().count(w) != 0; }

const char* token_label(Tok k) {
  switch (k) {
    case Tok::Word: return "identifier";
    case Tok::Number: return "number";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Colon: return "':'";
    case Tok::Assign: return "':='";
    case Tok::Tilde: return "'~'";
    case Tok::Semi: return "';'";
    case Tok::Star: return "'*'";
    case Tok::Caret: return "'^'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Dollar: return "'$'";
    case Tok::Eq: return "'='";
    case Tok::EqEq: return "'=='";
    case Tok::FatArrow: return "'=>'";
    case Tok::LTrans: return "'=['";
    case Tok::RTrans: return "']=>'";
    case Tok::Arrow: return "'->'";
    case Tok::Iff: return "'<->'";
    case Tok::PreImp: return "'-o'";
    case Tok::And: return "'/\\'";
    case Tok::Or: return "'\\/'";
    case Tok::Turnstile: return "'|-'";
    case Tok::Resid: return "'|>'";
    case Tok::At: return "'@'";
    case Tok::End: return "end of input";
  }
  return "?";
}

std::string shown(const Token& t) {
  if (t.kind == Tok::Word || t.kind == Tok::Number) return "'" + t.text + "'";
  return token_label(t.kind);
}

// ---------------------------------------------------------------------------
// Parser

struct Parser {
  std::vector<Token> toks;
  size_t pos = 0;
  const TheoryDoc* theory = nullptr;
  // During theory parsing these point into the document under construction so
  // that later entries can use earlier ones.
  const std::vector<std::pair<Name, Action>>* local_abbrevs = nullptr;
  const std::vector<std::pair<Name, Sentence>>* local_axioms = nullptr;

  explicit Parser(const std::string& text, const TheoryDoc* th = nullptr)
      : toks(lex(text)), theory(th) {}

  const Token& cur() const { return toks[pos]; }
  const Token& ahead(size_t k) const {
    return toks[std::min(pos + k, toks.size() - 1)];
  }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_word(const char* w) const {
    return cur().kind == Tok::Word && cur().text == w;
  }
  bool at_name() const { return at(Tok::Word) && !is_reserved(cur().text); }
  Token take() { return toks[pos++]; }

  [[noreturn]] void err(const std::string& msg) const {
    raise(DiagKind::Parse, cur().line, cur().col, msg);
  }
  [[noreturn]] void wf(const Token& t, const std::string& msg) const {
    raise(DiagKind::WellFormedness, t.line, t.col, msg);
  }
  [[noreturn]] void wf_here(const std::string& msg) const { wf(cur(), msg); }

  Token expect(Tok k) {
    if (!at(k)) err(std::string("expected ") + token_label(k) + ", found " + shown(cur()));
    return take();
  }
  void expect_word(const char* w) {
    if (!at_word(w)) err(std::string("expected '") + w + "', found " + shown(cur()));
    take();
  }
  Token name(const char* what) {
    if (at(Tok::Word) && is_reserved(cur().text))
      err(std::string("'") + cur().text + "' is a reserved word, expected " + what);
    if (!at(Tok::Word)) err(std::string("expected ") + what + ", found " + shown(cur()));
    return take();
  }

  // Runs a syntax builder and reports its failure at the given token.
  template <class F>
  auto built(const Token& t, F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const SyntaxError& e) {
      raise(DiagKind::WellFormedness, t.line, t.col, e.what());
    } catch (const AmalgamError& e) {
      raise(DiagKind::WellFormedness, t.line, t.col, e.what());
    }
  }

  uint64_t number(const Token& t) const {
    try {
      return std::stoull(t.text);
    } catch (const std::exception&) {
      raise(DiagKind::WellFormedness, t.line, t.col, "number out of range");
    }
  }

  const Action* find_abbrev(const Name& n) const {
    if (local_abbrevs)
      for (const auto& [an, a] : *local_abbrevs)
        if (an == n) return &a;
    return theory ? theory->abbrev(n) : nullptr;
  }
  const Sentence* find_axiom(const Name& n) const {
    if (local_axioms)
      for (const auto& [an, s] : *local_axioms)
        if (an == n) return &s;
    return theory ? theory->axiom(n) : nullptr;
  }

  Name sort_name(const Signature& sig) {
    Token t = name("a sort name");
    if (!sig.has_sort(t.text)) wf(t, "unknown sort '" + t.text + "'");
    return t.text;
  }

  // ---- terms ----------------------------------------------------------

  Term parse_term(const Signature& sig, const std::vector<Name>* hole_sorts = nullptr) {
    if (at(Tok::Dollar)) {
      Token d = take();
      Token k = expect(Tok::Number);
      uint64_t n = number(k);
      if (!hole_sorts) wf(d, "argument holes are only allowed in morphism images");
      if (n < 1 || n > hole_sorts->size())
        wf(k, "hole index out of range, have " + std::to_string(hole_sorts->size()) +
               " argument(s)");
      return hole(static_cast<int>(n), (*hole_sorts)[n - 1]);
    }
    Token f = name("a term");
    std::vector<Term> args;
    // An argument list follows only symbols with positive arity; a '(' after
    // a constant belongs to the surrounding sentence or morphism context.
    const FuncProfile* prof = sig.func(f.text);
    if (at(Tok::LParen) && (!prof || !prof->args.empty())) {
      take();
      if (!at(Tok::RParen)) {
        args.push_back(parse_term(sig, hole_sorts));
        while (at(Tok::Comma)) {
          take();
          args.push_back(parse_term(sig, hole_sorts));
        }
      }
      expect(Tok::RParen);
    }
    return built(f, [&] { return make_term(sig, f.text, std::move(args)); });
  }

  // ---- actions --------------------------------------------------------

  Action parse_action(const Signature& sig) { return parse_aunion(sig); }

  Action parse_aunion(const Signature& sig) {
    Action a = parse_acomp(sig);
    for (;;) {
      if (at_word("U")) {
        Token t = take();
        Action b = parse_acomp(sig);
        a = built(t, [&] { return act_union(std::move(a), std::move(b)); });
      } else if (at(Tok::PreImp)) {
        Token t = take();
        Action b = parse_acomp(sig);
        a = built(t, [&] { return act_preimp(std::move(a), std::move(b)); });
      } else if (at_word("cap")) {
        Token t = take();
        Action b = parse_acomp(sig);
        a = built(t, [&] { return act_intersect(std::move(a), std::move(b)); });
      } else {
        return a;
      }
    }
  }

  Action parse_acomp(const Signature& sig) {
    Action a = parse_apost(sig);
    for (;;) {
      if (at(Tok::Semi)) {
        Token t = take();
        Action b = parse_apost(sig);
        a = built(t, [&] { return act_comp(std::move(a), std::move(b)); });
      } else if (at(Tok::Resid)) {
        Token t = take();
        Action b = parse_apost(sig);
        a = built(t, [&] { return act_resid(std::move(a), std::move(b)); });
      } else {
        return a;
      }
    }
  }

  Action parse_apost(const Signature& sig) {
    Action a = parse_aatom(sig);
    for (;;) {
      if (at(Tok::Star)) {
        take();
        a = act_star(std::move(a));
      } else if (at(Tok::Caret)) {
        Token t = take();
        if (at_word("c")) {
          take();
          a = act_complement(std::move(a));
        } else if (at_word("bot")) {
          take();
          a = act_stuck(std::move(a));
        } else if (at_word("top")) {
          take();
          a = act_live(std::move(a));
        } else if (at(Tok::Plus)) {
          take();
          a = act_plus(std::move(a));
        } else if (at(Tok::Minus)) {
          take();
          Token k = expect(Tok::Number);
          if (k.text != "1") wf(k, "only '^-1' is a valid converse suffix");
          a = act_converse(std::move(a));
        } else if (at(Tok::Number)) {
          Token k = take();
          a = act_power(std::move(a), number(k));
        } else {
          raise(DiagKind::Parse, t.line, t.col,
                "expected 'c', 'bot', 'top', '+', '-1' or a number after '^'");
        }
      } else {
        return a;
      }
    }
  }

  Action parse_aatom(const Signature& sig) {
    if (at(Tok::Number)) {
      Token z = take();
      if (z.text != "0" && z.text != "1")
        raise(DiagKind::Parse, z.line, z.col, "expected an action");
      expect(Tok::LBrack);
      Name s = sort_name(sig);
      expect(Tok::RBrack);
      return z.text == "0" ? act_zero(s) : act_one(s);
    }
    if (at(Tok::LParen)) {
      take();
      Action a = parse_action(sig);
      expect(Tok::RParen);
      return a;
    }
    Token l = name("an action");
    // A label in the current signature wins over a shorthand: blocks may
    // bind label variables that shadow a theory shorthand.
    if (sig.label_sort(l.text)) return act_label(sig, l.text);
    if (const Action* a = find_abbrev(l.text)) return *a;
    wf(l, "unknown label '" + l.text + "'");
  }

  // ---- sentences ------------------------------------------------------

  bool at_sentence_start() const {
    if (at(Tok::LParen) || at(Tok::At)) return true;
    if (!at(Tok::Word)) return false;
    const std::string& w = cur().text;
    if (!is_reserved(w)) return true;
    return w == "true" || w == "false" || w == "not" || w == "and" ||
           w == "or" || w == "forall" || w == "exists";
  }

  Sentence parse_sentence(const Signature& sig) {
    Sentence a = parse_imp(sig);
    if (at(Tok::Iff)) {
      Token t = take();
      Sentence b = parse_imp(sig);
      return built(t, [&] { return sen_iff(std::move(a), std::move(b)); });
    }
    return a;
  }

  Sentence parse_imp(const Signature& sig) {
    Sentence a = parse_or(sig);
    if (at(Tok::Arrow)) {
      Token t = take();
      Sentence b = parse_imp(sig);
      return built(t, [&] { return sen_implies(std::move(a), std::move(b)); });
    }
    return a;
  }

  Sentence parse_or(const Signature& sig) {
    Sentence a = parse_and(sig);
    if (!at(Tok::Or)) return a;
    std::vector<Sentence> kids;
    kids.push_back(std::move(a));
    while (at(Tok::Or)) {
      take();
      kids.push_back(parse_and(sig));
    }
    return sen_or(std::move(kids));
  }

  Sentence parse_and(const Signature& sig) {
    Sentence a = parse_satom(sig);
    if (!at(Tok::And)) return a;
    std::vector<Sentence> kids;
    kids.push_back(std::move(a));
    while (at(Tok::And)) {
      take();
      kids.push_back(parse_satom(sig));
    }
    return sen_and(std::move(kids));
  }

  std::vector<Sentence> parse_sen_family(const Signature& sig) {
    expect(Tok::LBrace);
    std::vector<Sentence> kids;
    if (!at(Tok::RBrace)) {
      kids.push_back(parse_sentence(sig));
      while (at(Tok::Comma)) {
        take();
        kids.push_back(parse_sentence(sig));
      }
    }
    expect(Tok::RBrace);
    return kids;
  }

  Block parse_block(const Signature& sig) {
    expect(Tok::LBrace);
    Block b;
    for (;;) {
      Token v = name("a binder");
      expect(Tok::Colon);
      Name s = sort_name(sig);
      bool lvar = false;
      if (at(Tok::Tilde)) {
        take();
        Token s2 = name("a sort name");
        if (s2.text != s) wf(s2, "label variable endpoints must share one sort");
        lvar = true;
      }
      if (b.vars.count(v.text) || b.lvars.count(v.text))
        wf(v, "duplicate binder '" + v.text + "'");
      if (lvar)
        b.lvars[v.text] = s;
      else
        b.vars[v.text] = s;
      if (at(Tok::Comma)) {
        take();
        continue;
      }
      break;
    }
    expect(Tok::RBrace);
    return b;
  }

  Sentence parse_quant(const Signature& sig, bool universal) {
    Token q = cur();
    take();
    Block b = parse_block(sig);
    Signature ext = built(q, [&] { return extend_block(sig, b); });
    expect(Tok::Dot);
    Sentence body = parse_sentence(ext);
    return universal ? sen_forall(std::move(b), std::move(body))
                     : sen_exists(std::move(b), std::move(body));
  }

  Sentence parse_satom(const Signature& sig) {
    if (at(Tok::At)) {
      take();
      Token n = name("an axiom name");
      const Sentence* s = find_axiom(n.text);
      if (!s) wf(n, "unknown axiom '" + n.text + "'");
      return *s;
    }
    if (at_word("true")) {
      take();
      return sen_true();
    }
    if (at_word("false")) {
      take();
      return sen_false();
    }
    if (at_word("not")) {
      take();
      return sen_not(parse_satom(sig));
    }
    if (at_word("and")) {
      take();
      return sen_and(parse_sen_family(sig));
    }
    if (at_word("or")) {
      take();
      return sen_or(parse_sen_family(sig));
    }
    if (at_word("forall")) return parse_quant(sig, true);
    if (at_word("exists")) return parse_quant(sig, false);
    if (at(Tok::LParen)) {
      take();
      Sentence s = parse_sentence(sig);
      expect(Tok::RParen);
      return s;
    }
    Term t0 = parse_term(sig);
    if (at(Tok::EqEq)) {
      Token op = take();
      Term t1 = parse_term(sig);
      return built(op, [&] { return sen_eq(std::move(t0), std::move(t1)); });
    }
    if (at(Tok::LTrans)) {
      Token op = take();
      Action a = parse_action(sig);
      expect(Tok::RTrans);
      Term t1 = parse_term(sig);
      return built(op, [&] { return sen_trans(std::move(t0), std::move(a), std::move(t1)); });
    }
    err("expected '==' or '=[' after a term");
  }

  std::vector<Sentence> parse_senlist(const Signature& sig) {
    std::vector<Sentence> out;
    if (!at_sentence_start()) return out;
    out.push_back(parse_sentence(sig));
    while (at(Tok::Comma)) {
      take();
      out.push_back(parse_sentence(sig));
    }
    return out;
  }

  Sequent parse_sequent(const Signature& sig) {
    Sequent q;
    q.left = parse_senlist(sig);
    expect(Tok::Turnstile);
    q.right = parse_senlist(sig);
    return q;
  }

  // ---- signature sections ----------------------------------------------

  void parse_sig_sections(Signature& sig) {
    if (at_word("sorts")) {
      take();
      while (at_name()) {
        Token s = take();
        if (!sig.sorts.insert(s.text).second) wf(s, "duplicate sort '" + s.text + "'");
      }
    }
    if (at_word("funcs")) {
      take();
      while (at_name() && ahead(1).kind == Tok::Colon) {
        Token f = take();
        take();  // ':'
        std::vector<Name> parts;
        std::vector<Token> part_toks;
        while (at_name() && ahead(1).kind != Tok::Colon) {
          part_toks.push_back(cur());
          parts.push_back(take().text);
        }
        FuncProfile p;
        if (at(Tok::Arrow)) {
          take();
          Token r = name("a sort name");
          p.args = std::move(parts);
          p.result = r.text;
          part_toks.push_back(r);
        } else if (parts.size() == 1) {
          p.result = parts[0];
        } else {
          err("expected '->' in a function profile");
        }
        for (size_t k = 0; k < part_toks.size(); ++k) {
          const Name& s = k < p.args.size() ? p.args[k] : p.result;
          if (!sig.has_sort(s)) wf(part_toks[k], "unknown sort '" + s + "'");
        }
        if (!sig.funcs.emplace(f.text, std::move(p)).second)
          wf(f, "duplicate function '" + f.text + "'");
      }
    }
    if (at_word("labels")) {
      take();
      while (at_name()) {
        Token l = take();
        expect(Tok::Colon);
        Name s = sort_name(sig);
        expect(Tok::Tilde);
        Token s2 = name("a sort name");
        if (s2.text != s) wf(s2, "label endpoints must share one sort");
        if (!sig.labels.emplace(l.text, s).second)
          wf(l, "duplicate label '" + l.text + "'");
      }
    }
  }

  // ---- morphisms ---------------------------------------------------------

  // Shared by proof scripts (general images, braced) and cospan legs
  // (plain images only). The source signature is given; map lines must be
  // grouped by kind in the order sort, func, label.
  GenMorphism parse_morphism_maps(Signature src, Signature dst, bool plain_only) {
    GenMorphism m;
    m.src = std::move(src);
    m.dst = std::move(dst);
    int stage = 0;
    std::set<Name> seen_sorts, seen_funcs, seen_labels;
    while (at_word("map")) {
      Token mt = take();
      int kind = at_word("sort") ? 0 : at_word("func") ? 1 : at_word("label") ? 2 : -1;
      if (kind < 0) err("expected 'sort', 'func' or 'label' after 'map'");
      if (kind < stage)
        raise(DiagKind::Parse, mt.line, mt.col,
              "map lines must be grouped: sorts, then funcs, then labels");
      stage = kind;
      take();
      Token a = name("a symbol");
      expect(Tok::FatArrow);
      if (kind == 0) {
        if (!m.src.has_sort(a.text)) wf(a, "unknown sort '" + a.text + "'");
        if (!seen_sorts.insert(a.text).second) wf(a, "duplicate map for sort '" + a.text + "'");
        m.sort_map[a.text] = sort_name(m.dst);
      } else if (kind == 1) {
        const FuncProfile* p = m.src.func(a.text);
        if (!p) wf(a, "unknown function '" + a.text + "'");
        if (!seen_funcs.insert(a.text).second)
          wf(a, "duplicate map for function '" + a.text + "'");
        complete_sorts(m);
        std::vector<Name> hs;
        for (const Name& s : p->args) hs.push_back(translate_sort(m, s));
        m.func_map[a.text] = parse_func_image(m.dst, hs, plain_only);
      } else {
        if (!m.src.label_sort(a.text)) wf(a, "unknown label '" + a.text + "'");
        if (!seen_labels.insert(a.text).second)
          wf(a, "duplicate map for label '" + a.text + "'");
        Token img = cur();
        if (plain_only) {
          Token g = name("a label");
          if (!m.dst.label_sort(g.text)) wf(g, "unknown label '" + g.text + "'");
          m.label_map[a.text] = act_label(m.dst, g.text);
        } else {
          m.label_map[a.text] = built(img, [&] { return parse_action(m.dst); });
        }
      }
    }
    complete_sorts(m);
    return m;
  }

  void complete_sorts(GenMorphism& m) {
    for (const Name& s : m.src.sorts)
      if (!m.sort_map.count(s)) {
        if (!m.dst.has_sort(s)) wf_here("sort '" + s + "' has no image");
        m.sort_map[s] = s;
      }
  }

  Term parse_func_image(const Signature& dst, const std::vector<Name>& hole_sorts,
                        bool plain_only) {
    // A bare symbol of positive arity stands for itself applied to the
    // argument holes in order.
    if (at(Tok::Word) && ahead(1).kind != Tok::LParen) {
      Token g = name("a function");
      const FuncProfile* p = dst.func(g.text);
      if (!p) wf(g, "unknown function '" + g.text + "'");
      std::vector<Term> holes;
      for (size_t k = 0; k < p->args.size(); ++k)
        holes.push_back(hole(static_cast<int>(k) + 1,
                             k < hole_sorts.size() ? hole_sorts[k] : p->args[k]));
      return built(g, [&] { return make_term(dst, g.text, std::move(holes)); });
    }
    if (plain_only) err("cospan legs take plain symbol images");
    Token start = cur();
    Term t = parse_term(dst, &hole_sorts);
    return built(start, [&] {
      validate_hterm(dst, t, hole_sorts);
      return t;
    });
  }

  // Fills every unmapped function and label by name, then validates.
  GenMorphism finish_morphism(GenMorphism m, const Token& site) {
    for (const auto& [f, p] : m.src.funcs) {
      if (m.func_map.count(f)) continue;
      const FuncProfile* q = m.dst.func(f);
      if (!q) wf(site, "function '" + f + "' has no image");
      std::vector<Term> holes;
      for (size_t k = 0; k < p.args.size(); ++k)
        holes.push_back(hole(static_cast<int>(k) + 1, translate_sort(m, p.args[k])));
      m.func_map[f] = Term{f, std::move(holes), q->result};
    }
    for (const auto& [l, s] : m.src.labels) {
      (void)s;
      if (m.label_map.count(l)) continue;
      if (!m.dst.label_sort(l)) wf(site, "label '" + l + "' has no image");
      m.label_map[l] = act_label(m.dst, l);
    }
    return built(site, [&] {
      validate_morphism(m);
      return m;
    });
  }

  GenMorphism parse_inline_morphism() {
    Token site = cur();
    expect(Tok::LBrace);
    expect_word("src");
    expect(Tok::LBrace);
    Signature src;
    parse_sig_sections(src);
    expect(Tok::RBrace);
    expect_word("dst");
    expect(Tok::LBrace);
    Signature dst;
    parse_sig_sections(dst);
    expect(Tok::RBrace);
    built(site, [&] {
      validate_signature(src);
      validate_signature(dst);
      return 0;
    });
    GenMorphism m = parse_morphism_maps(std::move(src), std::move(dst), false);
    expect(Tok::RBrace);
    return finish_morphism(std::move(m), site);
  }

  // ---- proof scripts -----------------------------------------------------

  ProofNode parse_node(const Signature& sig) {
    expect_word("step");
    // rule names may coincide with reserved words ("kel"), so take any word
    Token rt = expect(Tok::Word);
    std::optional<Rule> rule = rule_from_name(rt.text);
    if (!rule) raise(DiagKind::Parse, rt.line, rt.col, "unknown rule '" + rt.text + "'");

    ProofNode node;
    node.rule = *rule;
    RuleChoice& ch = node.choice;
    bool have_on = false, have_at = false, have_via = false, have_target = false,
         have_fresh = false, have_with = false, have_axiom = false, have_morphism = false;
    auto once = [&](bool& flag, const Token& t) {
      if (flag) wf(t, "duplicate '" + t.text + "' clause");
      flag = true;
    };
    for (;;) {
      if (at_word("on")) {
        Token t = take();
        once(have_on, t);
        ch.principal = parse_sentence(sig);
      } else if (at_word("at")) {
        Token t = take();
        once(have_at, t);
        ch.index = static_cast<std::size_t>(number(expect(Tok::Number)));
      } else if (at_word("via")) {
        Token t = take();
        once(have_via, t);
        ch.witness = parse_term(sig);
      } else if (at_word("target")) {
        Token t = take();
        once(have_target, t);
        ch.target = parse_action(sig);
      } else if (at_word("fresh")) {
        Token t = take();
        once(have_fresh, t);
        ch.fresh.push_back(name("a fresh name").text);
        while (at(Tok::Comma)) {
          take();
          ch.fresh.push_back(name("a fresh name").text);
        }
      } else if (at_word("with")) {
        Token t = take();
        once(have_with, t);
        if (!ch.principal || !ch.principal->block)
          wf(t, "'with' needs a quantified 'on' clause first");
        const Block& b = *ch.principal->block;
        for (;;) {
          Token k = name("a binder");
          expect(Tok::Assign);
          if (b.vars.count(k.text)) {
            ch.term_images[k.text] = parse_term(sig);
          } else if (b.lvars.count(k.text)) {
            ch.act_images[k.text] = parse_action(sig);
          } else {
            wf(k, "'" + k.text + "' is not bound by the principal sentence");
          }
          if (at(Tok::Comma)) {
            take();
            continue;
          }
          break;
        }
      } else if (at_word("axiom")) {
        Token t = take();
        once(have_axiom, t);
        Token an = name("an axiom form");
        ch.axiom = axiom_from_name(an.text);
        if (!ch.axiom)
          raise(DiagKind::Parse, an.line, an.col, "unknown axiom form '" + an.text + "'");
        expect(Tok::LParen);
        ch.axiom_args.push_back(parse_action(sig));
        if (at(Tok::Comma)) {
          take();
          ch.axiom_args.push_back(parse_action(sig));
        }
        expect(Tok::RParen);
      } else if (at_word("morphism")) {
        Token t = take();
        once(have_morphism, t);
        ch.morphism = parse_inline_morphism();
      } else {
        break;
      }
    }

    node.seq = parse_sequent(sig);

    if (at(Tok::LBrace)) {
      Token brace = take();
      size_t idx = 0;
      while (!at(Tok::RBrace)) {
        if (at(Tok::End)) raise(DiagKind::Parse, brace.line, brace.col, "unclosed premise block");
        node.premises.push_back(parse_node(premise_sig(sig, node, idx, brace)));
        ++idx;
      }
      take();
    }
    return node;
  }

  // The signature a premise's sentences are read against. Mirrors the
  // checker's signature tracking; rules whose premises need data the script
  // does not supply are reported here.
  Signature premise_sig(const Signature& sig, const ProofNode& node, size_t idx,
                        const Token& site) {
    const RuleChoice& ch = node.choice;
    auto need_trans_sort = [&]() -> Name {
      if (!ch.principal || ch.principal->op != SenOp::Trans)
        wf(site, std::string(rule_name(node.rule)) + " needs a transition 'on' clause");
      return ch.principal->act->sort;
    };
    switch (node.rule) {
      case Rule::ExistsL:
      case Rule::ForallR: {
        if (!ch.principal || !ch.principal->block)
          wf(site, std::string(rule_name(node.rule)) + " needs a quantified 'on' clause");
        return built(site, [&] { return extend_block(sig, *ch.principal->block); });
      }
      case Rule::CompL:
      case Rule::ResidL: {
        if (ch.fresh.size() != 1)
          wf(site, std::string(rule_name(node.rule)) + " needs one fresh name");
        Block b;
        b.vars[ch.fresh[0]] = need_trans_sort();
        return built(site, [&] { return extend_block(sig, b); });
      }
      case Rule::IndLPlus:
      case Rule::IndLMinus: {
        if (ch.fresh.size() != 3)
          wf(site, std::string(rule_name(node.rule)) + " needs three fresh names");
        if (idx != 1) return sig;
        Name s = need_trans_sort();
        Block b;
        for (const Name& f : ch.fresh) {
          if (b.vars.count(f)) wf(site, "duplicate fresh name '" + f + "'");
          b.vars[f] = s;
        }
        return built(site, [&] { return extend_block(sig, b); });
      }
      case Rule::Modify: {
        if (!ch.morphism) wf(site, "modify needs a 'morphism' clause");
        return ch.morphism->src;
      }
      default:
        return sig;
    }
  }
};

// ---------------------------------------------------------------------------
// Pretty printing

void print_term(std::string& out, const Term& t) {
  out += t.sym;
  if (!t.args.empty()) {
    out += "(";
    for (size_t i = 0; i < t.args.size(); ++i) {
      if (i) out += ", ";
      print_term(out, t.args[i]);
    }
    out += ")";
  }
}

int act_level(const Action& a) {
  switch (a.op) {
    case ActOp::Union:
    case ActOp::PreImp: return 0;
    case ActOp::Comp:
    case ActOp::Resid: return 1;
    case ActOp::Star: return 2;
    default: return 3;
  }
}

void print_action(std::string& out, const Action& a, int min_level) {
  if (act_level(a) < min_level) {
    out += "(";
    print_action(out, a, 0);
    out += ")";
    return;
  }
  switch (a.op) {
    case ActOp::Label: out += a.label; return;
    case ActOp::Zero: out += "0[" + a.sort + "]"; return;
    case ActOp::One: out += "1[" + a.sort + "]"; return;
    case ActOp::Union:
      print_action(out, a.kids[0], 0);
      out += " U ";
      print_action(out, a.kids[1], 1);
      return;
    case ActOp::PreImp:
      print_action(out, a.kids[0], 0);
      out += " -o ";
      print_action(out, a.kids[1], 1);
      return;
    case ActOp::Comp:
      print_action(out, a.kids[0], 1);
      out += " ; ";
      print_action(out, a.kids[1], 2);
      return;
    case ActOp::Resid:
      print_action(out, a.kids[0], 1);
      out += " |> ";
      print_action(out, a.kids[1], 2);
      return;
    case ActOp::Star:
      print_action(out, a.kids[0], 2);
      out += "*";
      return;
  }
}

void print_block(std::string& out, const Block& b) {
  out += "{";
  bool first = true;
  for (const auto& [v, s] : b.vars) {
    if (!first) out += ", ";
    first = false;
    out += v + " : " + s;
  }
  for (const auto& [v, s] : b.lvars) {
    if (!first) out += ", ";
    first = false;
    out += v + " : " + s + " ~ " + s;
  }
  out += "}";
}

int sen_level(const Sentence& s) {
  switch (s.op) {
    case SenOp::Implies:
    case SenOp::Exists:
    case SenOp::Forall: return 0;
    case SenOp::Or: return s.kids.size() >= 2 ? 1 : 3;
    case SenOp::And: return s.kids.size() >= 2 ? 2 : 3;
    default: return 3;
  }
}

void print_sentence(std::string& out, const Sentence& s, int min_level) {
  if (sen_level(s) < min_level) {
    out += "(";
    print_sentence(out, s, 0);
    out += ")";
    return;
  }
  switch (s.op) {
    case SenOp::Eq:
      print_term(out, s.terms[0]);
      out += " == ";
      print_term(out, s.terms[1]);
      return;
    case SenOp::Trans:
      print_term(out, s.terms[0]);
      out += " =[";
      print_action(out, *s.act, 0);
      out += "]=> ";
      print_term(out, s.terms[1]);
      return;
    case SenOp::Implies:
      print_sentence(out, s.kids[0], 1);
      out += " -> ";
      print_sentence(out, s.kids[1], 0);
      return;
    case SenOp::Or:
    case SenOp::And: {
      const char* word = s.op == SenOp::Or ? "false" : "true";
      const char* family = s.op == SenOp::Or ? "or" : "and";
      const char* sep = s.op == SenOp::Or ? " \\/ " : " /\\ ";
      int kid_level = s.op == SenOp::Or ? 2 : 3;
      if (s.kids.empty()) {
        out += word;
        return;
      }
      if (s.kids.size() == 1) {
        out += std::string(family) + " { ";
        print_sentence(out, s.kids[0], 0);
        out += " }";
        return;
      }
      for (size_t i = 0; i < s.kids.size(); ++i) {
        if (i) out += sep;
        print_sentence(out, s.kids[i], kid_level);
      }
      return;
    }
    case SenOp::Exists:
    case SenOp::Forall:
      out += s.op == SenOp::Exists ? "exists " : "forall ";
      print_block(out, *s.block);
      out += " . ";
      print_sentence(out, s.kids[0], 0);
      return;
  }
}

void print_senlist(std::string& out, const std::vector<Sentence>& ss) {
  for (size_t i = 0; i < ss.size(); ++i) {
    if (i) out += ", ";
    print_sentence(out, ss[i], 0);
  }
}

void print_sequent(std::string& out, const Sequent& q) {
  print_senlist(out, q.left);
  if (!q.left.empty()) out += " ";
  out += "|-";
  if (!q.right.empty()) out += " ";
  print_senlist(out, q.right);
}

void print_sig_sections(std::string& out, const Signature& sig, const std::string& pad) {
  if (!sig.sorts.empty()) {
    out += pad + "sorts";
    for (const Name& s : sig.sorts) out += " " + s;
    out += "\n";
  }
  if (!sig.funcs.empty()) {
    out += pad + "funcs\n";
    for (const auto& [f, p] : sig.funcs) {
      out += pad + "  " + f + " :";
      for (const Name& a : p.args) out += " " + a;
      if (!p.args.empty()) out += " ->";
      out += " " + p.result + "\n";
    }
  }
  if (!sig.labels.empty()) {
    out += pad + "labels\n";
    for (const auto& [l, s] : sig.labels)
      out += pad + "  " + l + " : " + s + " ~ " + s + "\n";
  }
}

bool is_identity_image(const Term& t) {
  for (size_t i = 0; i < t.args.size(); ++i) {
    const Term& a = t.args[i];
    if (!is_hole(a) || a.sym != "$" + std::to_string(i + 1)) return false;
  }
  return true;
}

void print_morphism_maps(std::string& out, const GenMorphism& m, const std::string& pad) {
  for (const auto& [a, b] : m.sort_map) out += pad + "map sort " + a + " => " + b + "\n";
  for (const auto& [f, img] : m.func_map) {
    out += pad + "map func " + f + " => ";
    if (is_identity_image(img)) {
      out += img.sym;
    } else {
      print_term(out, img);
    }
    out += "\n";
  }
  for (const auto& [l, img] : m.label_map) {
    out += pad + "map label " + l + " => ";
    print_action(out, img, 0);
    out += "\n";
  }
}

void print_inline_morphism(std::string& out, const GenMorphism& m, const std::string& pad) {
  out += "morphism {\n";
  out += pad + "  src {\n";
  print_sig_sections(out, m.src, pad + "    ");
  out += pad + "  }\n";
  out += pad + "  dst {\n";
  print_sig_sections(out, m.dst, pad + "    ");
  out += pad + "  }\n";
  print_morphism_maps(out, m, pad + "  ");
  out += pad + "}";
}

bool rule_uses_index(Rule r) {
  return r == Rule::UnionR || r == Rule::OrR || r == Rule::AndL;
}

void print_node(std::string& out, const ProofNode& n, int depth) {
  std::string pad(static_cast<size_t>(depth) * 2, ' ');
  out += pad + "step " + rule_name(n.rule) + "\n";
  const RuleChoice& ch = n.choice;
  std::string cpad = pad + "  ";
  if (ch.principal) {
    out += cpad + "on ";
    print_sentence(out, *ch.principal, 0);
    out += "\n";
  }
  if (rule_uses_index(n.rule)) out += cpad + "at " + std::to_string(ch.index) + "\n";
  if (ch.witness) {
    out += cpad + "via ";
    print_term(out, *ch.witness);
    out += "\n";
  }
  if (ch.target) {
    out += cpad + "target ";
    print_action(out, *ch.target, 0);
    out += "\n";
  }
  if (!ch.fresh.empty()) {
    out += cpad + "fresh ";
    for (size_t i = 0; i < ch.fresh.size(); ++i) {
      if (i) out += ", ";
      out += ch.fresh[i];
    }
    out += "\n";
  }
  if (!ch.term_images.empty() || !ch.act_images.empty()) {
    out += cpad + "with ";
    bool first = true;
    for (const auto& [k, t] : ch.term_images) {
      if (!first) out += ", ";
      first = false;
      out += k + " := ";
      print_term(out, t);
    }
    for (const auto& [k, a] : ch.act_images) {
      if (!first) out += ", ";
      first = false;
      out += k + " := ";
      print_action(out, a, 0);
    }
    out += "\n";
  }
  if (ch.axiom) {
    out += cpad + "axiom " + axiom_name(*ch.axiom) + "(";
    for (size_t i = 0; i < ch.axiom_args.size(); ++i) {
      if (i) out += ", ";
      print_action(out, ch.axiom_args[i], 0);
    }
    out += ")\n";
  }
  if (ch.morphism) {
    out += cpad;
    print_inline_morphism(out, *ch.morphism, cpad);
    out += "\n";
  }
  out += cpad;
  print_sequent(out, n.seq);
  out += "\n";
  if (!n.premises.empty()) {
    out += pad + "{\n";
    for (const ProofNode& p : n.premises) print_node(out, p, depth + 1);
    out += pad + "}\n";
  }
}

void print_pairs(std::string& out, const FiniteModel& fm, const Name& sort,
                 const Relation& r) {
  if (r.count() == 0) {
    out += "{}";
    return;
  }
  out += "{ ";
  bool first = true;
  for (uint32_t i = 0; i < r.n; ++i)
    for (uint32_t j = 0; j < r.n; ++j)
      if (r.get(i, j)) {
        if (!first) out += ", ";
        first = false;
        out += "(" + elem_display(fm, sort, i) + ", " + elem_display(fm, sort, j) + ")";
      }
  out += " }";
}

}  // namespace

// ---------------------------------------------------------------------------
// Entry points

TheoryDoc parse_theory(const std::string& text) {
  Parser p(text);
  TheoryDoc doc;
  p.local_abbrevs = &doc.abbrevs;
  p.local_axioms = &doc.axioms;
  p.expect_word("theory");
  Token nt = p.name("a theory name");
  doc.name = nt.text;
  p.parse_sig_sections(doc.sig);
  p.built(nt, [&] {
    validate_signature(doc.sig);
    return 0;
  });
  if (p.at_word("actions")) {
    p.take();
    while (p.at_name()) {
      Token a = p.take();
      if (doc.sig.label_sort(a.text) || doc.abbrev(a.text))
        p.wf(a, "action name '" + a.text + "' is already taken");
      p.expect(Tok::Eq);
      doc.abbrevs.emplace_back(a.text, p.parse_action(doc.sig));
    }
  }
  if (p.at_word("axioms")) {
    p.take();
    while (p.at_name()) {
      Token a = p.take();
      if (doc.axiom(a.text)) p.wf(a, "duplicate axiom '" + a.text + "'");
      p.expect(Tok::Eq);
      Sentence s = p.parse_sentence(doc.sig);
      p.built(a, [&] {
        validate_sentence(doc.sig, s);
        return 0;
      });
      doc.axioms.emplace_back(a.text, std::move(s));
    }
  }
  p.expect(Tok::End);
  return doc;
}

ProofDoc parse_proof(const std::string& text, const TheoryDoc* theory) {
  Parser p(text, theory);
  ProofDoc doc;
  p.expect_word("proof");
  doc.name = p.name("a proof name").text;
  if (p.at_word("use")) {
    p.take();
    Token t = p.name("a theory name");
    doc.theory = t.text;
    if (!theory) p.wf(t, "script needs theory '" + t.text + "' but none was supplied");
    if (theory->name != t.text)
      p.wf(t, "script is for theory '" + t.text + "', got '" + theory->name + "'");
  } else if (theory) {
    doc.theory = theory->name;
  }
  if (p.at_word("mode")) {
    p.take();
    if (p.at_word("classical")) {
      p.take();
      doc.intuitionistic = false;
    } else if (p.at_word("intuitionistic")) {
      p.take();
      doc.intuitionistic = true;
    } else {
      p.err("expected 'classical' or 'intuitionistic'");
    }
  }
  if (p.at_word("rules")) {
    p.take();
    if (p.at_word("ind")) {
      p.take();
      doc.ruleset = RuleSet::Ind;
    } else if (p.at_word("kel")) {
      p.take();
      doc.ruleset = RuleSet::Kel;
    } else {
      p.err("expected 'ind' or 'kel'");
    }
  }
  Signature root = theory ? theory->sig : Signature{};
  doc.root = p.parse_node(root);
  p.expect(Tok::End);
  return doc;
}

ModelDoc parse_model(const std::string& text, const TheoryDoc& theory) {
  Parser p(text, &theory);
  ModelDoc doc;
  p.expect_word("model");
  Token nt = p.name("a model name");
  doc.name = nt.text;
  p.expect_word("use");
  Token ut = p.name("a theory name");
  if (ut.text != theory.name)
    p.wf(ut, "model is for theory '" + ut.text + "', got '" + theory.name + "'");
  doc.theory = ut.text;

  FiniteModel fm;
  fm.sig = theory.sig;
  while (p.at_word("carrier")) {
    p.take();
    Token st = p.name("a sort name");
    if (!fm.sig.has_sort(st.text)) p.wf(st, "unknown sort '" + st.text + "'");
    if (fm.carrier.count(st.text)) p.wf(st, "duplicate carrier for sort '" + st.text + "'");
    p.expect(Tok::Eq);
    std::vector<Name> elems;
    while (p.at_name() || p.at(Tok::Number)) {
      Token e = p.take();
      if (std::find(elems.begin(), elems.end(), e.text) != elems.end())
        p.wf(e, "duplicate element '" + e.text + "'");
      elems.push_back(e.text);
    }
    if (elems.empty()) p.wf(st, "empty carrier for sort '" + st.text + "'");
    if (elems.size() > kMaxRelationDim)
      p.wf(st, "carrier larger than " + std::to_string(kMaxRelationDim));
    fm.carrier[st.text] = static_cast<uint32_t>(elems.size());
    fm.elem_names[st.text] = std::move(elems);
  }
  for (const Name& s : fm.sig.sorts)
    if (!fm.carrier.count(s)) p.wf(nt, "no carrier for sort '" + s + "'");

  auto elem = [&](const Name& sort) -> uint32_t {
    if (!p.at_name() && !p.at(Tok::Number)) p.err("expected an element name");
    Token e = p.take();
    std::optional<uint32_t> idx = elem_index(fm, sort, e.text);
    if (!idx) p.wf(e, "unknown element '" + e.text + "' of sort '" + sort + "'");
    return *idx;
  };

  std::map<Name, std::vector<bool>> filled;
  while (p.at_word("func")) {
    p.take();
    Token ft = p.name("a function name");
    const FuncProfile* prof = fm.sig.func(ft.text);
    if (!prof) p.wf(ft, "unknown function '" + ft.text + "'");
    size_t rows = 1;
    for (const Name& a : prof->args) rows *= fm.carrier.at(a);
    if (!fm.funcs.count(ft.text)) {
      fm.funcs[ft.text] = std::vector<uint32_t>(rows, 0);
      filled[ft.text] = std::vector<bool>(rows, false);
    }
    size_t idx = 0;
    if (!prof->args.empty()) {
      p.expect(Tok::LParen);
      for (size_t k = 0; k < prof->args.size(); ++k) {
        if (k) p.expect(Tok::Comma);
        idx = idx * fm.carrier.at(prof->args[k]) + elem(prof->args[k]);
      }
      p.expect(Tok::RParen);
    }
    p.expect(Tok::Eq);
    uint32_t v = elem(prof->result);
    if (filled[ft.text][idx]) p.wf(ft, "duplicate table row for '" + ft.text + "'");
    filled[ft.text][idx] = true;
    fm.funcs[ft.text][idx] = v;
  }
  for (const auto& [f, prof] : fm.sig.funcs) {
    (void)prof;
    auto it = filled.find(f);
    if (it == filled.end()) p.wf(nt, "no table for function '" + f + "'");
    for (bool b : it->second)
      if (!b) p.wf(nt, "table for function '" + f + "' is missing rows");
  }

  auto pair_set = [&](const Name& sort) {
    Relation r = Relation::empty(fm.carrier.at(sort));
    p.expect(Tok::LBrace);
    while (p.at(Tok::LParen)) {
      p.take();
      uint32_t i = elem(sort);
      p.expect(Tok::Comma);
      uint32_t j = elem(sort);
      p.expect(Tok::RParen);
      r.set(i, j, true);
      if (p.at(Tok::Comma)) p.take();
    }
    p.expect(Tok::RBrace);
    return r;
  };

  while (p.at_word("label")) {
    p.take();
    Token lt = p.name("a label name");
    const Name* sort = fm.sig.label_sort(lt.text);
    if (!sort) p.wf(lt, "unknown label '" + lt.text + "'");
    if (fm.labels.count(lt.text)) p.wf(lt, "duplicate relation for label '" + lt.text + "'");
    p.expect(Tok::Eq);
    fm.labels[lt.text] = pair_set(*sort);
  }
  for (const auto& [l, s] : fm.sig.labels) {
    (void)s;
    if (!fm.labels.count(l)) p.wf(nt, "no relation for label '" + l + "'");
  }

  std::map<Name, RelFamily> fams;
  while (p.at_word("kleene")) {
    p.take();
    Token st = p.name("a sort name");
    if (!fm.sig.has_sort(st.text)) p.wf(st, "unknown sort '" + st.text + "'");
    if (fams.count(st.text)) p.wf(st, "duplicate family for sort '" + st.text + "'");
    p.expect(Tok::LBrace);
    RelFamily fam;
    std::vector<Name> rel_names;
    while (p.at_word("rel")) {
      p.take();
      Token rt = p.name("a relation name");
      if (std::find(rel_names.begin(), rel_names.end(), rt.text) != rel_names.end())
        p.wf(rt, "duplicate relation '" + rt.text + "'");
      p.expect(Tok::Eq);
      rel_names.push_back(rt.text);
      fam.rels.push_back(pair_set(st.text));
    }
    fam.star.assign(fam.rels.size(), fam.rels.size());
    while (p.at_word("star")) {
      p.take();
      Token at = p.name("a relation name");
      auto ia = std::find(rel_names.begin(), rel_names.end(), at.text);
      if (ia == rel_names.end()) p.wf(at, "unknown relation '" + at.text + "'");
      p.expect(Tok::Eq);
      Token bt = p.name("a relation name");
      auto ib = std::find(rel_names.begin(), rel_names.end(), bt.text);
      if (ib == rel_names.end()) p.wf(bt, "unknown relation '" + bt.text + "'");
      size_t i = static_cast<size_t>(ia - rel_names.begin());
      if (fam.star[i] != fam.rels.size()) p.wf(at, "duplicate star entry for '" + at.text + "'");
      fam.star[i] = static_cast<size_t>(ib - rel_names.begin());
    }
    for (size_t i = 0; i < fam.star.size(); ++i)
      if (fam.star[i] == fam.rels.size())
        p.wf(st, "no star entry for relation '" + rel_names[i] + "'");
    p.expect(Tok::RBrace);
    fams[st.text] = std::move(fam);
  }
  p.expect(Tok::End);

  KleeneModel km{std::move(fm), std::move(fams)};
  std::vector<std::string> problems =
      km.fam.empty() ? model_problems(km.base) : kleene_problems(km);
  if (!problems.empty()) p.wf(nt, problems.front());
  doc.model = std::move(km);
  return doc;
}

CospanDoc parse_cospan(const std::string& text) {
  Parser p(text);
  CospanDoc doc;
  p.expect_word("cospan");
  Token nt = p.name("a cospan name");
  doc.name = nt.text;
  p.expect_word("base");
  Signature base;
  p.parse_sig_sections(base);
  p.built(nt, [&] {
    validate_signature(base);
    return 0;
  });
  auto leg = [&](const char* side) {
    p.expect_word(side);
    Token st = p.cur();
    Signature sig;
    p.parse_sig_sections(sig);
    p.built(st, [&] {
      validate_signature(sig);
      return 0;
    });
    GenMorphism m = p.parse_morphism_maps(base, std::move(sig), true);
    return p.finish_morphism(std::move(m), st);
  };
  doc.cospan.left = leg("left");
  doc.cospan.right = leg("right");
  p.expect(Tok::End);
  p.built(nt, [&] {
    validate_cospan(doc.cospan);
    return 0;
  });
  return doc;
}

Sentence parse_sentence(const std::string& text, const Signature& sig,
                        const TheoryDoc* theory) {
  Parser p(text, theory);
  Sentence s = p.parse_sentence(sig);
  p.expect(Tok::End);
  return s;
}

std::string pretty(const Term& t) {
  std::string out;
  print_term(out, t);
  return out;
}

std::string pretty(const Action& a) {
  std::string out;
  print_action(out, a, 0);
  return out;
}

std::string pretty(const Sentence& s) {
  std::string out;
  print_sentence(out, s, 0);
  return out;
}

std::string pretty(const Sequent& q) {
  std::string out;
  print_sequent(out, q);
  return out;
}

std::string pretty(const Signature& sig) {
  std::string out;
  print_sig_sections(out, sig, "");
  return out;
}

std::string pretty(const TheoryDoc& d) {
  std::string out = "theory " + d.name + "\n";
  std::string sections;
  print_sig_sections(sections, d.sig, "");
  if (!sections.empty()) out += "\n" + sections;
  if (!d.abbrevs.empty()) {
    out += "\nactions\n";
    for (const auto& [n, a] : d.abbrevs) {
      out += "  " + n + " = ";
      print_action(out, a, 0);
      out += "\n";
    }
  }
  if (!d.axioms.empty()) {
    out += "\naxioms\n";
    for (const auto& [n, s] : d.axioms) {
      out += "  " + n + " = ";
      print_sentence(out, s, 0);
      out += "\n";
    }
  }
  return out;
}

std::string pretty(const ProofDoc& d) {
  std::string out = "proof " + d.name + "\n";
  if (!d.theory.empty()) out += "use " + d.theory + "\n";
  out += std::string("mode ") + (d.intuitionistic ? "intuitionistic" : "classical") + "\n";
  out += std::string("rules ") + (d.ruleset == RuleSet::Kel ? "kel" : "ind") + "\n";
  out += "\n";
  print_node(out, d.root, 0);
  return out;
}

std::string pretty(const ModelDoc& d) {
  std::string out = "model " + d.name + "\n";
  out += "use " + d.theory + "\n";
  const FiniteModel& fm = d.model.base;
  if (!fm.carrier.empty()) out += "\n";
  for (const auto& [s, n] : fm.carrier) {
    out += "carrier " + s + " =";
    for (uint32_t i = 0; i < n; ++i) out += " " + elem_display(fm, s, i);
    out += "\n";
  }
  if (!fm.funcs.empty()) out += "\n";
  for (const auto& [f, table] : fm.funcs) {
    const FuncProfile& prof = fm.sig.funcs.at(f);
    std::vector<uint32_t> sizes;
    for (const Name& a : prof.args) sizes.push_back(fm.carrier.at(a));
    for (size_t row = 0; row < table.size(); ++row) {
      out += "func " + f;
      if (!sizes.empty()) {
        std::vector<uint32_t> ix(sizes.size());
        size_t rest = row;
        for (size_t k = sizes.size(); k-- > 0;) {
          ix[k] = static_cast<uint32_t>(rest % sizes[k]);
          rest /= sizes[k];
        }
        out += "(";
        for (size_t k = 0; k < ix.size(); ++k) {
          if (k) out += ", ";
          out += elem_display(fm, prof.args[k], ix[k]);
        }
        out += ")";
      }
      out += " = " + elem_display(fm, prof.result, table[row]) + "\n";
    }
  }
  if (!fm.labels.empty()) out += "\n";
  for (const auto& [l, r] : fm.labels) {
    out += "label " + l + " = ";
    print_pairs(out, fm, fm.sig.labels.at(l), r);
    out += "\n";
  }
  for (const auto& [s, fam] : d.model.fam) {
    out += "\nkleene " + s + " {\n";
    for (size_t i = 0; i < fam.rels.size(); ++i) {
      out += "  rel r" + std::to_string(i) + " = ";
      print_pairs(out, fm, s, fam.rels[i]);
      out += "\n";
    }
    for (size_t i = 0; i < fam.star.size(); ++i)
      out += "  star r" + std::to_string(i) + " = r" + std::to_string(fam.star[i]) + "\n";
    out += "}\n";
  }
  return out;
}

std::string pretty(const CospanDoc& d) {
  std::string out = "cospan " + d.name + "\n";
  out += "\nbase\n";
  print_sig_sections(out, d.cospan.left.src, "  ");
  auto side = [&](const char* word, const GenMorphism& m) {
    out += std::string("\n") + word + "\n";
    print_sig_sections(out, m.dst, "  ");
    print_morphism_maps(out, m, "  ");
  };
  side("left", d.cospan.left);
  side("right", d.cospan.right);
  return out;
}

}  // namespace tak
