#include "tak/syntax.hpp"

#include <algorithm>
#include <sstream>

namespace tak {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw SyntaxError(msg); }

constexpr uint64_t kCap = uint64_t(1) << 63;

uint64_t sat_add(uint64_t a, uint64_t b) {
  uint64_t r = a + b;
  if (r < a || r > kCap) return kCap;
  return r;
}

}  // namespace

const FuncProfile* Signature::func(const Name& f) const {
  auto it = funcs.find(f);
  return it == funcs.end() ? nullptr : &it->second;
}

const Name* Signature::label_sort(const Name& l) const {
  auto it = labels.find(l);
  return it == labels.end() ? nullptr : &it->second;
}

void validate_signature(const Signature& sig) {
  for (const auto& s : sig.sorts)
    if (s.empty()) fail("signature: empty sort name");
  for (const auto& [f, p] : sig.funcs) {
    if (f.empty()) fail("signature: empty function name");
    if (!sig.has_sort(p.result))
      fail("signature: function " + f + " has unknown result sort " + p.result);
    for (const auto& a : p.args)
      if (!sig.has_sort(a))
        fail("signature: function " + f + " has unknown argument sort " + a);
  }
  for (const auto& [l, s] : sig.labels) {
    if (l.empty()) fail("signature: empty label name");
    if (!sig.has_sort(s)) fail("signature: label " + l + " has unknown sort " + s);
  }
}

Signature extend_block(const Signature& sig, const Block& x) {
  Signature out = sig;
  for (const auto& [v, s] : x.vars) {
    if (!sig.has_sort(s)) fail("block: unknown sort " + s + " for variable " + v);
    if (out.funcs.count(v)) fail("block: name " + v + " already bound");
    out.funcs.emplace(v, FuncProfile{{}, s});
  }
  for (const auto& [v, s] : x.lvars) {
    if (!sig.has_sort(s)) fail("block: unknown sort " + s + " for label variable " + v);
    if (out.labels.count(v)) fail("block: label name " + v + " already bound");
    out.labels.emplace(v, s);
  }
  return out;
}

bool is_hole(const Term& t) { return !t.sym.empty() && t.sym[0] == '$'; }

Term hole(int k, const Name& sort) {
  return Term{"$" + std::to_string(k), {}, sort};
}

Term make_term(const Signature& sig, const Name& sym, std::vector<Term> args) {
  const FuncProfile* p = sig.func(sym);
  if (!p) fail("term: unknown function symbol " + sym);
  if (p->args.size() != args.size())
    fail("term: " + sym + " expects " + std::to_string(p->args.size()) +
         " arguments, got " + std::to_string(args.size()));
  for (size_t i = 0; i < args.size(); ++i)
    if (args[i].sort != p->args[i])
      fail("term: argument " + std::to_string(i + 1) + " of " + sym +
           " has sort " + args[i].sort + ", expected " + p->args[i]);
  return Term{sym, std::move(args), p->result};
}

Term make_const(const Signature& sig, const Name& sym) {
  return make_term(sig, sym, {});
}

Action act_label(const Signature& sig, const Name& l) {
  const Name* s = sig.label_sort(l);
  if (!s) fail("action: unknown label " + l);
  return Action{ActOp::Label, l, *s, {}};
}

Action act_zero(const Name& sort) { return Action{ActOp::Zero, "", sort, {}}; }
Action act_one(const Name& sort) { return Action{ActOp::One, "", sort, {}}; }

namespace {
Action binary(ActOp op, Action a, Action b) {
  if (a.sort != b.sort)
    fail("action: operands over different sorts " + a.sort + " and " + b.sort);
  Name s = a.sort;
  return Action{op, "", s, {std::move(a), std::move(b)}};
}
}  // namespace

Action act_union(Action a, Action b) { return binary(ActOp::Union, std::move(a), std::move(b)); }
Action act_preimp(Action a, Action b) { return binary(ActOp::PreImp, std::move(a), std::move(b)); }
Action act_comp(Action a, Action b) { return binary(ActOp::Comp, std::move(a), std::move(b)); }
Action act_resid(Action a, Action b) { return binary(ActOp::Resid, std::move(a), std::move(b)); }

Action act_star(Action a) {
  Name s = a.sort;
  return Action{ActOp::Star, "", s, {std::move(a)}};
}

Action act_complement(Action a) {
  Name s = a.sort;
  return act_preimp(std::move(a), act_zero(s));
}

Action act_converse(Action a) {
  Name s = a.sort;
  return act_resid(std::move(a), act_one(s));
}

Action act_power(Action a, uint64_t n) {
  Action out = act_one(a.sort);
  for (uint64_t i = 0; i < n; ++i) out = act_comp(std::move(out), a);
  return out;
}

Action act_plus(Action a) {
  Action s = act_star(a);
  return act_comp(std::move(a), std::move(s));
}

Action act_intersect(Action a, Action b) {
  return act_complement(act_union(act_complement(std::move(a)), act_complement(std::move(b))));
}

Action act_stuck(Action a) {
  Action back = act_comp(a, act_converse(a));
  return act_complement(act_preimp(act_one(a.sort), std::move(back)));
}

Action act_live(Action a) {
  Action back = act_comp(a, act_converse(a));
  return act_intersect(act_one(a.sort), std::move(back));
}

Sentence sen_eq(Term t0, Term t1) {
  if (t0.sort != t1.sort)
    fail("sentence: equation between sorts " + t0.sort + " and " + t1.sort);
  Sentence s;
  s.op = SenOp::Eq;
  s.terms = {std::move(t0), std::move(t1)};
  return s;
}

Sentence sen_trans(Term t0, Action a, Term t1) {
  if (t0.sort != a.sort || t1.sort != a.sort)
    fail("sentence: transition endpoints must have the action sort " + a.sort);
  Sentence s;
  s.op = SenOp::Trans;
  s.terms = {std::move(t0), std::move(t1)};
  s.act = std::move(a);
  return s;
}

Sentence sen_implies(Sentence a, Sentence b) {
  Sentence s;
  s.op = SenOp::Implies;
  s.kids = {std::move(a), std::move(b)};
  return s;
}

Sentence sen_or(std::vector<Sentence> kids) {
  Sentence s;
  s.op = SenOp::Or;
  s.kids = std::move(kids);
  return s;
}

Sentence sen_and(std::vector<Sentence> kids) {
  Sentence s;
  s.op = SenOp::And;
  s.kids = std::move(kids);
  return s;
}

Sentence sen_exists(Block x, Sentence body) {
  Sentence s;
  s.op = SenOp::Exists;
  s.block = std::move(x);
  s.kids = {std::move(body)};
  return s;
}

Sentence sen_forall(Block x, Sentence body) {
  Sentence s;
  s.op = SenOp::Forall;
  s.block = std::move(x);
  s.kids = {std::move(body)};
  return s;
}

Sentence sen_true() { return sen_and({}); }
Sentence sen_false() { return sen_or({}); }
Sentence sen_not(Sentence a) { return sen_implies(std::move(a), sen_false()); }

Sentence sen_iff(Sentence a, Sentence b) {
  return sen_and({sen_implies(a, b), sen_implies(std::move(b), std::move(a))});
}

Sentence action_le(const Signature& sig, const Action& a1, const Action& a2) {
  if (a1.sort != a2.sort) fail("action_le: actions over different sorts");
  Name x = fresh_name(sig, "x");
  Block bx;
  bx.vars[x] = a1.sort;
  Name y = fresh_name(extend_block(sig, bx), "y");
  Block b;
  b.vars[x] = a1.sort;
  b.vars[y] = a1.sort;
  Signature ext = extend_block(sig, b);
  Term tx = make_const(ext, x), ty = make_const(ext, y);
  return sen_forall(b, sen_implies(sen_trans(tx, a1, ty), sen_trans(tx, a2, ty)));
}

Sentence action_equiv(const Signature& sig, const Action& a1, const Action& a2) {
  return sen_and({action_le(sig, a1, a2), action_le(sig, a2, a1)});
}

void validate_term(const Signature& sig, const Term& t) {
  if (is_hole(t)) fail("term: unexpected hole " + t.sym);
  const FuncProfile* p = sig.func(t.sym);
  if (!p) fail("term: unknown function symbol " + t.sym);
  if (p->args.size() != t.args.size())
    fail("term: wrong arity for " + t.sym);
  if (t.sort != p->result) fail("term: wrong sort annotation on " + t.sym);
  for (size_t i = 0; i < t.args.size(); ++i) {
    if (t.args[i].sort != p->args[i])
      fail("term: argument sort mismatch at " + t.sym);
    validate_term(sig, t.args[i]);
  }
}

void validate_hterm(const Signature& sig, const Term& t,
                    const std::vector<Name>& hole_sorts) {
  if (is_hole(t)) {
    size_t k = 0;
    try {
      k = std::stoul(t.sym.substr(1));
    } catch (...) {
      fail("term: malformed hole " + t.sym);
    }
    if (k < 1 || k > hole_sorts.size()) fail("term: hole index out of range: " + t.sym);
    if (t.sort != hole_sorts[k - 1]) fail("term: hole " + t.sym + " has wrong sort");
    return;
  }
  const FuncProfile* p = sig.func(t.sym);
  if (!p) fail("term: unknown function symbol " + t.sym);
  if (p->args.size() != t.args.size()) fail("term: wrong arity for " + t.sym);
  if (t.sort != p->result) fail("term: wrong sort annotation on " + t.sym);
  for (size_t i = 0; i < t.args.size(); ++i) {
    if (t.args[i].sort != p->args[i]) fail("term: argument sort mismatch at " + t.sym);
    validate_hterm(sig, t.args[i], hole_sorts);
  }
}

void validate_action(const Signature& sig, const Action& a) {
  if (!sig.has_sort(a.sort)) fail("action: unknown sort " + a.sort);
  switch (a.op) {
    case ActOp::Label: {
      const Name* s = sig.label_sort(a.label);
      if (!s) fail("action: unknown label " + a.label);
      if (*s != a.sort) fail("action: label " + a.label + " has wrong sort annotation");
      if (!a.kids.empty()) fail("action: label with children");
      return;
    }
    case ActOp::Zero:
    case ActOp::One:
      if (!a.kids.empty()) fail("action: constant with children");
      return;
    case ActOp::Star:
      if (a.kids.size() != 1) fail("action: star expects one child");
      if (a.kids[0].sort != a.sort) fail("action: star sort mismatch");
      validate_action(sig, a.kids[0]);
      return;
    case ActOp::Union:
    case ActOp::PreImp:
    case ActOp::Comp:
    case ActOp::Resid:
      if (a.kids.size() != 2) fail("action: binary operator expects two children");
      for (const auto& k : a.kids) {
        if (k.sort != a.sort) fail("action: operand sort mismatch");
        validate_action(sig, k);
      }
      return;
  }
  fail("action: corrupt node");
}

void validate_sentence(const Signature& sig, const Sentence& s) {
  switch (s.op) {
    case SenOp::Eq:
      if (s.terms.size() != 2 || s.act || !s.kids.empty() || s.block)
        fail("sentence: malformed equation");
      validate_term(sig, s.terms[0]);
      validate_term(sig, s.terms[1]);
      if (s.terms[0].sort != s.terms[1].sort) fail("sentence: equation sort mismatch");
      return;
    case SenOp::Trans:
      if (s.terms.size() != 2 || !s.act || !s.kids.empty() || s.block)
        fail("sentence: malformed transition");
      validate_term(sig, s.terms[0]);
      validate_term(sig, s.terms[1]);
      validate_action(sig, *s.act);
      if (s.terms[0].sort != s.act->sort || s.terms[1].sort != s.act->sort)
        fail("sentence: transition sort mismatch");
      return;
    case SenOp::Implies:
      if (s.kids.size() != 2 || !s.terms.empty() || s.act || s.block)
        fail("sentence: malformed implication");
      validate_sentence(sig, s.kids[0]);
      validate_sentence(sig, s.kids[1]);
      return;
    case SenOp::Or:
    case SenOp::And:
      if (!s.terms.empty() || s.act || s.block) fail("sentence: malformed connective");
      for (const auto& k : s.kids) validate_sentence(sig, k);
      return;
    case SenOp::Exists:
    case SenOp::Forall: {
      if (s.kids.size() != 1 || !s.block || !s.terms.empty() || s.act)
        fail("sentence: malformed quantifier");
      Signature ext = extend_block(sig, *s.block);
      validate_sentence(ext, s.kids[0]);
      return;
    }
  }
  fail("sentence: corrupt node");
}

// ---------------------------------------------------------------------------
// Alpha-canonical forms and keys.

namespace {

using Renaming = std::map<Name, Name>;

Term rename_term(const Term& t, const Renaming& r) {
  Term out = t;
  auto it = r.find(t.sym);
  if (it != r.end() && t.args.empty()) out.sym = it->second;
  for (auto& a : out.args) a = rename_term(a, r);
  return out;
}

Action rename_action(const Action& a, const Renaming& r) {
  Action out = a;
  if (a.op == ActOp::Label) {
    auto it = r.find(a.label);
    if (it != r.end()) out.label = it->second;
  }
  for (auto& k : out.kids) k = rename_action(k, r);
  return out;
}

// First occurrence order of the given names in a sentence, terms scanned
// left to right, actions depth-first.
void occ_term(const Term& t, const std::set<Name>& want, std::vector<Name>& out,
              std::set<Name>& seen) {
  if (want.count(t.sym) && t.args.empty() && !seen.count(t.sym)) {
    seen.insert(t.sym);
    out.push_back(t.sym);
  }
  for (const auto& a : t.args) occ_term(a, want, out, seen);
}

void occ_action(const Action& a, const std::set<Name>& want, std::vector<Name>& out,
                std::set<Name>& seen) {
  if (a.op == ActOp::Label && want.count(a.label) && !seen.count(a.label)) {
    seen.insert(a.label);
    out.push_back(a.label);
  }
  for (const auto& k : a.kids) occ_action(k, want, out, seen);
}

void occ_sentence(const Sentence& s, const std::set<Name>& want,
                  std::vector<Name>& out, std::set<Name>& seen) {
  for (const auto& t : s.terms) occ_term(t, want, out, seen);
  if (s.act) occ_action(*s.act, want, out, seen);
  for (const auto& k : s.kids) occ_sentence(k, want, out, seen);
}

Sentence canon_rec(const Sentence& s, const Renaming& env, uint64_t& counter) {
  Sentence out = s;
  switch (s.op) {
    case SenOp::Eq:
    case SenOp::Trans:
      for (auto& t : out.terms) t = rename_term(t, env);
      if (out.act) *out.act = rename_action(*out.act, env);
      return out;
    case SenOp::Implies:
    case SenOp::Or:
    case SenOp::And:
      for (auto& k : out.kids) k = canon_rec(k, env, counter);
      return out;
    case SenOp::Exists:
    case SenOp::Forall: {
      const Block& b = *s.block;
      std::set<Name> names;
      for (const auto& [n, _] : b.vars) names.insert(n);
      for (const auto& [n, _] : b.lvars) names.insert(n);
      std::vector<Name> order;
      std::set<Name> seen;
      occ_sentence(s.kids[0], names, order, seen);
      // Unused binders after the used ones, grouped by kind then sort.
      std::vector<std::pair<std::pair<int, Name>, Name>> unused;
      for (const auto& [n, srt] : b.vars)
        if (!seen.count(n)) unused.push_back({{0, srt}, n});
      for (const auto& [n, srt] : b.lvars)
        if (!seen.count(n)) unused.push_back({{1, srt}, n});
      std::sort(unused.begin(), unused.end());
      for (const auto& u : unused) order.push_back(u.second);

      Renaming env2 = env;
      Block nb;
      for (const auto& n : order) {
        Name fresh = "%" + std::to_string(counter++);
        env2[n] = fresh;
        auto vi = b.vars.find(n);
        if (vi != b.vars.end())
          nb.vars[fresh] = vi->second;
        else
          nb.lvars[fresh] = b.lvars.at(n);
      }
      out.block = nb;
      out.kids[0] = canon_rec(s.kids[0], env2, counter);
      return out;
    }
  }
  return out;
}

void key_term(const Term& t, std::ostream& os) {
  os << '(' << t.sym;
  for (const auto& a : t.args) {
    os << ' ';
    key_term(a, os);
  }
  os << ')';
}

void key_action(const Action& a, std::ostream& os) {
  os << '(';
  switch (a.op) {
    case ActOp::Label: os << 'l' << a.label; break;
    case ActOp::Zero: os << "0@" << a.sort; break;
    case ActOp::One: os << "1@" << a.sort; break;
    case ActOp::Union: os << 'u'; break;
    case ActOp::PreImp: os << 'p'; break;
    case ActOp::Comp: os << 'c'; break;
    case ActOp::Resid: os << 'r'; break;
    case ActOp::Star: os << '*'; break;
  }
  for (const auto& k : a.kids) {
    os << ' ';
    key_action(k, os);
  }
  os << ')';
}

void key_sentence(const Sentence& s, std::ostream& os) {
  os << '(';
  switch (s.op) {
    case SenOp::Eq: os << "eq"; break;
    case SenOp::Trans: os << "tr"; break;
    case SenOp::Implies: os << "im"; break;
    case SenOp::Or: os << "or"; break;
    case SenOp::And: os << "an"; break;
    case SenOp::Exists: os << "ex"; break;
    case SenOp::Forall: os << "fa"; break;
  }
  if (s.block) {
    os << '[';
    for (const auto& [n, srt] : s.block->vars) os << n << ':' << srt << ' ';
    for (const auto& [n, srt] : s.block->lvars) os << n << "::" << srt << ' ';
    os << ']';
  }
  for (const auto& t : s.terms) {
    os << ' ';
    key_term(t, os);
  }
  if (s.act) {
    os << ' ';
    key_action(*s.act, os);
  }
  for (const auto& k : s.kids) {
    os << ' ';
    key_sentence(k, os);
  }
  os << ')';
}

}  // namespace

Sentence alpha_canon(const Sentence& s) {
  uint64_t counter = 0;
  return canon_rec(s, {}, counter);
}

std::string term_key(const Term& t) {
  std::ostringstream os;
  key_term(t, os);
  return os.str();
}

std::string action_key(const Action& a) {
  std::ostringstream os;
  key_action(a, os);
  return os.str();
}

std::string sentence_key(const Sentence& s) {
  std::ostringstream os;
  key_sentence(alpha_canon(s), os);
  return os.str();
}

bool alpha_eq(const Sentence& a, const Sentence& b) {
  return sentence_key(a) == sentence_key(b);
}

// ---------------------------------------------------------------------------
// Complexity.

ActCost action_complexity(const Action& a) {
  switch (a.op) {
    case ActOp::Label:
      return {0, 0};
    case ActOp::Zero:
    case ActOp::One:
      return {0, 1};
    case ActOp::Star: {
      ActCost c = action_complexity(a.kids[0]);
      return {sat_add(c.beta, 1), c.gamma};
    }
    default: {
      ActCost l = action_complexity(a.kids[0]);
      ActCost r = action_complexity(a.kids[1]);
      return {std::max(l.beta, r.beta), sat_add(l.gamma, r.gamma)};
    }
  }
}

Cost complexity(const Sentence& s) {
  switch (s.op) {
    case SenOp::Eq:
      return {0, 0, 0};
    case SenOp::Trans: {
      ActCost c = action_complexity(*s.act);
      return {0, c.beta, c.gamma};
    }
    case SenOp::Implies:
    case SenOp::Or:
    case SenOp::And: {
      Cost out{1, 0, 0};
      for (const auto& k : s.kids) {
        Cost c = complexity(k);
        out.alpha = sat_add(out.alpha, c.alpha);
        out.beta = std::max(out.beta, c.beta);
        out.gamma = sat_add(out.gamma, c.gamma);
      }
      return out;
    }
    case SenOp::Exists:
    case SenOp::Forall: {
      Cost c = complexity(s.kids[0]);
      return {sat_add(c.alpha, 1), c.beta, c.gamma};
    }
  }
  return {0, 0, 0};
}

// ---------------------------------------------------------------------------
// Morphisms.

void validate_morphism(const GenMorphism& m) {
  validate_signature(m.src);
  validate_signature(m.dst);
  for (const auto& s : m.src.sorts) {
    auto it = m.sort_map.find(s);
    if (it == m.sort_map.end()) fail("morphism: sort " + s + " has no image");
    if (!m.dst.has_sort(it->second))
      fail("morphism: sort image " + it->second + " not in target");
  }
  for (const auto& [f, p] : m.src.funcs) {
    auto it = m.func_map.find(f);
    if (it == m.func_map.end()) fail("morphism: function " + f + " has no image");
    std::vector<Name> hole_sorts;
    for (const auto& a : p.args) hole_sorts.push_back(m.sort_map.at(a));
    validate_hterm(m.dst, it->second, hole_sorts);
    if (it->second.sort != m.sort_map.at(p.result))
      fail("morphism: image of " + f + " has wrong sort");
  }
  for (const auto& [l, s] : m.src.labels) {
    auto it = m.label_map.find(l);
    if (it == m.label_map.end()) fail("morphism: label " + l + " has no image");
    validate_action(m.dst, it->second);
    if (it->second.sort != m.sort_map.at(s))
      fail("morphism: image of label " + l + " has wrong sort");
  }
}

bool is_plain(const GenMorphism& m) {
  for (const auto& [f, img] : m.func_map) {
    (void)f;
    if (is_hole(img)) return false;
    for (size_t i = 0; i < img.args.size(); ++i) {
      const Term& a = img.args[i];
      if (!is_hole(a) || a.sym != "$" + std::to_string(i + 1)) return false;
    }
  }
  for (const auto& [l, img] : m.label_map) {
    (void)l;
    if (img.op != ActOp::Label) return false;
  }
  return true;
}

GenMorphism identity_morphism(const Signature& sig) {
  GenMorphism m;
  m.src = m.dst = sig;
  for (const auto& s : sig.sorts) m.sort_map[s] = s;
  for (const auto& [f, p] : sig.funcs) {
    std::vector<Term> hs;
    for (size_t i = 0; i < p.args.size(); ++i) hs.push_back(hole(int(i + 1), p.args[i]));
    m.func_map[f] = Term{f, std::move(hs), p.result};
  }
  for (const auto& [l, s] : sig.labels) m.label_map[l] = Action{ActOp::Label, l, s, {}};
  return m;
}

Name translate_sort(const GenMorphism& m, const Name& s) {
  auto it = m.sort_map.find(s);
  if (it == m.sort_map.end()) fail("morphism: sort " + s + " has no image");
  return it->second;
}

namespace {
Term plug(const Term& image, const std::vector<Term>& args) {
  if (is_hole(image)) {
    size_t k = std::stoul(image.sym.substr(1));
    if (k < 1 || k > args.size()) fail("morphism: hole index out of range");
    return args[k - 1];
  }
  Term out = image;
  for (auto& a : out.args) a = plug(a, args);
  return out;
}
}  // namespace

Term translate_term(const GenMorphism& m, const Term& t) {
  if (is_hole(t)) return hole(int(std::stoul(t.sym.substr(1))), translate_sort(m, t.sort));
  auto it = m.func_map.find(t.sym);
  if (it == m.func_map.end()) fail("morphism: function " + t.sym + " has no image");
  std::vector<Term> args;
  args.reserve(t.args.size());
  for (const auto& a : t.args) args.push_back(translate_term(m, a));
  return plug(it->second, args);
}

Action translate_action(const GenMorphism& m, const Action& a) {
  switch (a.op) {
    case ActOp::Label: {
      auto it = m.label_map.find(a.label);
      if (it == m.label_map.end()) fail("morphism: label " + a.label + " has no image");
      return it->second;
    }
    case ActOp::Zero:
      return act_zero(translate_sort(m, a.sort));
    case ActOp::One:
      return act_one(translate_sort(m, a.sort));
    case ActOp::Star:
      return act_star(translate_action(m, a.kids[0]));
    default: {
      Action out;
      out.op = a.op;
      out.sort = translate_sort(m, a.sort);
      out.kids = {translate_action(m, a.kids[0]), translate_action(m, a.kids[1])};
      return out;
    }
  }
}

std::pair<GenMorphism, std::map<Name, Name>> extend_morphism(const GenMorphism& m,
                                                             const Block& x) {
  GenMorphism out = m;
  std::map<Name, Name> ren;
  out.src = extend_block(m.src, x);
  Block target_block;
  for (const auto& [v, s] : x.vars) {
    Name nv = fresh_name(out.dst, v);
    ren[v] = nv;
    target_block.vars[nv] = translate_sort(m, s);
  }
  for (const auto& [v, s] : x.lvars) {
    Name nv = fresh_name(out.dst, v);
    ren[v] = nv;
    target_block.lvars[nv] = translate_sort(m, s);
  }
  out.dst = extend_block(out.dst, target_block);
  for (const auto& [v, s] : x.vars)
    out.func_map[v] = Term{ren[v], {}, translate_sort(m, s)};
  for (const auto& [v, s] : x.lvars)
    out.label_map[v] = Action{ActOp::Label, ren[v], translate_sort(m, s), {}};
  return {out, ren};
}

Sentence translate_sentence(const GenMorphism& m, const Sentence& s) {
  Sentence out = s;
  switch (s.op) {
    case SenOp::Eq:
    case SenOp::Trans:
      for (auto& t : out.terms) t = translate_term(m, t);
      if (out.act) *out.act = translate_action(m, *out.act);
      return out;
    case SenOp::Implies:
    case SenOp::Or:
    case SenOp::And:
      for (auto& k : out.kids) k = translate_sentence(m, k);
      return out;
    case SenOp::Exists:
    case SenOp::Forall: {
      auto [m2, ren] = extend_morphism(m, *s.block);
      Block nb;
      for (const auto& [v, srt] : s.block->vars) nb.vars[ren.at(v)] = translate_sort(m, srt);
      for (const auto& [v, srt] : s.block->lvars) nb.lvars[ren.at(v)] = translate_sort(m, srt);
      out.block = nb;
      out.kids[0] = translate_sentence(m2, s.kids[0]);
      return out;
    }
  }
  return out;
}

GenMorphism compose(const GenMorphism& g, const GenMorphism& f) {
  GenMorphism out;
  out.src = f.src;
  out.dst = g.dst;
  for (const auto& [s, img] : f.sort_map) out.sort_map[s] = translate_sort(g, img);
  for (const auto& [fn, img] : f.func_map) out.func_map[fn] = translate_term(g, img);
  for (const auto& [l, img] : f.label_map) out.label_map[l] = translate_action(g, img);
  return out;
}

GenMorphism make_substitution(const Signature& base, const Block& x,
                              const Signature& target,
                              const std::map<Name, Term>& var_images,
                              const std::map<Name, Action>& lvar_images) {
  GenMorphism m;
  m.src = extend_block(base, x);
  m.dst = target;
  for (const auto& s : base.sorts) m.sort_map[s] = s;
  for (const auto& [f, p] : base.funcs) {
    std::vector<Term> hs;
    for (size_t i = 0; i < p.args.size(); ++i) hs.push_back(hole(int(i + 1), p.args[i]));
    m.func_map[f] = Term{f, std::move(hs), p.result};
  }
  for (const auto& [l, s] : base.labels) m.label_map[l] = Action{ActOp::Label, l, s, {}};
  for (const auto& [v, s] : x.vars) {
    auto it = var_images.find(v);
    if (it == var_images.end()) fail("substitution: variable " + v + " has no image");
    if (it->second.sort != s) fail("substitution: image of " + v + " has wrong sort");
    m.func_map[v] = it->second;
  }
  for (const auto& [v, s] : x.lvars) {
    auto it = lvar_images.find(v);
    if (it == lvar_images.end()) fail("substitution: label variable " + v + " has no image");
    if (it->second.sort != s) fail("substitution: image of " + v + " has wrong sort");
    m.label_map[v] = it->second;
  }
  validate_morphism(m);
  return m;
}

namespace {

Term subst_term(const Term& t, const std::map<Name, Term>& v) {
  auto it = v.find(t.sym);
  if (it != v.end() && t.args.empty()) return it->second;
  Term out = t;
  for (auto& a : out.args) a = subst_term(a, v);
  return out;
}

Action subst_action(const Action& a, const std::map<Name, Action>& l) {
  if (a.op == ActOp::Label) {
    auto it = l.find(a.label);
    if (it != l.end()) return it->second;
    return a;
  }
  Action out = a;
  for (auto& k : out.kids) k = subst_action(k, l);
  return out;
}

Sentence subst_sentence(const Sentence& s, const std::map<Name, Term>& v,
                        const std::map<Name, Action>& l) {
  Sentence out = s;
  for (auto& t : out.terms) t = subst_term(t, v);
  if (out.act) *out.act = subst_action(*out.act, l);
  for (auto& k : out.kids) k = subst_sentence(k, v, l);
  return out;
}

}  // namespace

Sentence instantiate(const Sentence& quantified,
                     const std::map<Name, Term>& var_images,
                     const std::map<Name, Action>& lvar_images) {
  if (quantified.op != SenOp::Exists && quantified.op != SenOp::Forall)
    fail("instantiate: not a quantified sentence");
  const Block& b = *quantified.block;
  if (var_images.size() != b.vars.size() || lvar_images.size() != b.lvars.size())
    fail("instantiate: image count does not match block");
  for (const auto& [v, s] : b.vars) {
    auto it = var_images.find(v);
    if (it == var_images.end()) fail("instantiate: variable " + v + " has no image");
    if (it->second.sort != s) fail("instantiate: image of " + v + " has wrong sort");
  }
  for (const auto& [v, s] : b.lvars) {
    auto it = lvar_images.find(v);
    if (it == lvar_images.end())
      fail("instantiate: label variable " + v + " has no image");
    if (it->second.sort != s) fail("instantiate: image of " + v + " has wrong sort");
  }
  return subst_sentence(quantified.kids[0], var_images, lvar_images);
}

Name fresh_name(const Signature& sig, const Name& base) {
  auto taken = [&](const Name& n) {
    return sig.has_sort(n) || sig.funcs.count(n) || sig.labels.count(n);
  };
  if (!taken(base)) return base;
  for (int i = 1;; ++i) {
    Name cand = base + "_" + std::to_string(i);
    if (!taken(cand)) return cand;
  }
}

}  // namespace tak
