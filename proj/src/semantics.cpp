#include "tak/semantics.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace tak {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw SemanticsError(msg); }

uint64_t row_mask(uint32_t n) {
  return n >= 64 ? ~uint64_t(0) : (uint64_t(1) << n) - 1;
}

}  // namespace

Relation Relation::empty(uint32_t n) {
  Relation r;
  r.n = n;
  r.rows.assign(n, 0);
  return r;
}

Relation Relation::identity(uint32_t n) {
  Relation r = empty(n);
  for (uint32_t i = 0; i < n; ++i) r.rows[i] = uint64_t(1) << i;
  return r;
}

Relation Relation::full(uint32_t n) {
  Relation r = empty(n);
  for (uint32_t i = 0; i < n; ++i) r.rows[i] = row_mask(n);
  return r;
}

uint32_t Relation::count() const {
  uint32_t c = 0;
  for (uint64_t row : rows) c += uint32_t(__builtin_popcountll(row));
  return c;
}

Relation rel_union(const Relation& a, const Relation& b) {
  Relation r = a;
  for (uint32_t i = 0; i < a.n; ++i) r.rows[i] |= b.rows[i];
  return r;
}

Relation rel_intersect(const Relation& a, const Relation& b) {
  Relation r = a;
  for (uint32_t i = 0; i < a.n; ++i) r.rows[i] &= b.rows[i];
  return r;
}

Relation rel_complement(const Relation& a) {
  Relation r = a;
  for (uint32_t i = 0; i < a.n; ++i) r.rows[i] = ~a.rows[i] & row_mask(a.n);
  return r;
}

Relation rel_compose(const Relation& a, const Relation& b) {
  Relation r = Relation::empty(a.n);
  for (uint32_t i = 0; i < a.n; ++i) {
    uint64_t row = a.rows[i];
    while (row) {
      uint32_t j = uint32_t(__builtin_ctzll(row));
      row &= row - 1;
      r.rows[i] |= b.rows[j];
    }
  }
  return r;
}

Relation rel_converse(const Relation& a) {
  Relation r = Relation::empty(a.n);
  for (uint32_t i = 0; i < a.n; ++i)
    for (uint32_t j = 0; j < a.n; ++j)
      if (a.get(i, j)) r.set(j, i, true);
  return r;
}

Relation rel_star(const Relation& a) {
  Relation r = rel_union(a, Relation::identity(a.n));
  for (;;) {
    Relation next = rel_union(r, rel_compose(r, r));
    if (next == r) return r;
    r = next;
  }
}

bool rel_subset(const Relation& a, const Relation& b) {
  for (uint32_t i = 0; i < a.n; ++i)
    if (a.rows[i] & ~b.rows[i]) return false;
  return true;
}

uint32_t carrier_of(const FiniteModel& m, const Name& sort) {
  auto it = m.carrier.find(sort);
  if (it == m.carrier.end()) fail("model: no carrier for sort " + sort);
  return it->second;
}

Name elem_display(const FiniteModel& m, const Name& sort, uint32_t idx) {
  auto it = m.elem_names.find(sort);
  if (it != m.elem_names.end() && idx < it->second.size()) return it->second[idx];
  return "e" + std::to_string(idx);
}

std::optional<uint32_t> elem_index(const FiniteModel& m, const Name& sort,
                                   const Name& display) {
  uint32_t n = carrier_of(m, sort);
  for (uint32_t i = 0; i < n; ++i)
    if (elem_display(m, sort, i) == display) return i;
  return std::nullopt;
}

KleeneModel standard(FiniteModel base) { return KleeneModel{std::move(base), {}}; }

namespace {

const RelFamily* family_of(const KleeneModel& m, const Name& sort) {
  auto it = m.fam.find(sort);
  return it == m.fam.end() ? nullptr : &it->second;
}

void check_member(const KleeneModel& m, const Name& sort, const Relation& r) {
  const RelFamily* f = family_of(m, sort);
  if (!f) return;
  if (std::find(f->rels.begin(), f->rels.end(), r) == f->rels.end())
    fail("action interpretation escapes the designated family over sort " + sort);
}

uint32_t eval_hterm(const KleeneModel& m, const Env& env, const Term& t,
                    const std::vector<uint32_t>& holes);

}  // namespace

uint32_t eval_term(const KleeneModel& m, const Env& env, const Term& t) {
  return eval_hterm(m, env, t, {});
}

namespace {

uint32_t eval_hterm(const KleeneModel& m, const Env& env, const Term& t,
                    const std::vector<uint32_t>& holes) {
  if (is_hole(t)) {
    size_t k = std::stoul(t.sym.substr(1));
    if (k < 1 || k > holes.size()) fail("term: unbound hole " + t.sym);
    return holes[k - 1];
  }
  if (t.args.empty()) {
    auto it = env.vars.find(t.sym);
    if (it != env.vars.end()) return it->second;
  }
  auto it = m.base.funcs.find(t.sym);
  if (it == m.base.funcs.end()) fail("model: no table for symbol " + t.sym);
  const FuncProfile* p = m.base.sig.func(t.sym);
  size_t idx = 0;
  for (size_t i = 0; i < t.args.size(); ++i) {
    uint32_t v = eval_hterm(m, env, t.args[i], holes);
    idx = idx * carrier_of(m.base, p ? p->args[i] : t.args[i].sort) + v;
  }
  if (idx >= it->second.size()) fail("model: table for " + t.sym + " is too small");
  return it->second[idx];
}

}  // namespace

Relation eval_action(const KleeneModel& m, const Env& env, const Action& a) {
  Relation r;
  switch (a.op) {
    case ActOp::Label: {
      auto it = env.lvars.find(a.label);
      if (it != env.lvars.end()) {
        r = it->second;
        break;
      }
      auto mt = m.base.labels.find(a.label);
      if (mt == m.base.labels.end()) fail("model: no relation for label " + a.label);
      r = mt->second;
      break;
    }
    case ActOp::Zero:
      r = Relation::empty(carrier_of(m.base, a.sort));
      break;
    case ActOp::One:
      r = Relation::identity(carrier_of(m.base, a.sort));
      break;
    case ActOp::Union:
      r = rel_union(eval_action(m, env, a.kids[0]), eval_action(m, env, a.kids[1]));
      break;
    case ActOp::PreImp:
      r = rel_union(rel_complement(eval_action(m, env, a.kids[0])),
                    eval_action(m, env, a.kids[1]));
      break;
    case ActOp::Comp:
      r = rel_compose(eval_action(m, env, a.kids[0]), eval_action(m, env, a.kids[1]));
      break;
    case ActOp::Resid:
      r = rel_compose(rel_converse(eval_action(m, env, a.kids[0])),
                      eval_action(m, env, a.kids[1]));
      break;
    case ActOp::Star: {
      Relation inner = eval_action(m, env, a.kids[0]);
      const RelFamily* f = family_of(m, a.sort);
      if (!f) {
        r = rel_star(inner);
        break;
      }
      auto it = std::find(f->rels.begin(), f->rels.end(), inner);
      if (it == f->rels.end())
        fail("action interpretation escapes the designated family over sort " + a.sort);
      r = f->rels[f->star[size_t(it - f->rels.begin())]];
      break;
    }
  }
  check_member(m, a.sort, r);
  return r;
}

namespace {

struct Binder {
  Name name;
  Name sort;
  bool is_label = false;
};

bool sat_rec(const KleeneModel& m, Env& env, const Sentence& s);

bool quant_rec(const KleeneModel& m, Env& env, const std::vector<Binder>& bs,
               size_t k, const Sentence& body, bool universal) {
  if (k == bs.size()) return sat_rec(m, env, body);
  const Binder& b = bs[k];
  uint32_t n = carrier_of(m.base, b.sort);
  if (!b.is_label) {
    if (n > kMaxFirstOrderCarrier)
      throw BudgetError("quantifier budget: carrier of " + b.sort + " is " +
                        std::to_string(n) + ", limit " +
                        std::to_string(kMaxFirstOrderCarrier));
    for (uint32_t v = 0; v < n; ++v) {
      env.vars[b.name] = v;
      bool ok = quant_rec(m, env, bs, k + 1, body, universal);
      env.vars.erase(b.name);
      if (ok != universal) return ok;
    }
    return universal;
  }
  if (n > kMaxLabelQuantCarrier)
    throw BudgetError("quantifier budget: label variable over sort " + b.sort +
                      " with carrier " + std::to_string(n) + ", limit " +
                      std::to_string(kMaxLabelQuantCarrier));
  const RelFamily* f = family_of(m, b.sort);
  auto try_one = [&](const Relation& r) {
    env.lvars[b.name] = r;
    bool ok = quant_rec(m, env, bs, k + 1, body, universal);
    env.lvars.erase(b.name);
    return ok;
  };
  if (f) {
    for (const Relation& r : f->rels)
      if (try_one(r) != universal) return !universal;
    return universal;
  }
  uint64_t total = uint64_t(1) << (n * n);
  for (uint64_t bits = 0; bits < total; ++bits) {
    Relation r = Relation::empty(n);
    for (uint32_t i = 0; i < n; ++i)
      for (uint32_t j = 0; j < n; ++j)
        if ((bits >> (i * n + j)) & 1) r.set(i, j, true);
    if (try_one(r) != universal) return !universal;
  }
  return universal;
}

bool sat_rec(const KleeneModel& m, Env& env, const Sentence& s) {
  switch (s.op) {
    case SenOp::Eq:
      return eval_term(m, env, s.terms[0]) == eval_term(m, env, s.terms[1]);
    case SenOp::Trans: {
      Relation r = eval_action(m, env, *s.act);
      return r.get(eval_term(m, env, s.terms[0]), eval_term(m, env, s.terms[1]));
    }
    case SenOp::Implies:
      return !sat_rec(m, env, s.kids[0]) || sat_rec(m, env, s.kids[1]);
    case SenOp::Or:
      for (const auto& k : s.kids)
        if (sat_rec(m, env, k)) return true;
      return false;
    case SenOp::And:
      for (const auto& k : s.kids)
        if (!sat_rec(m, env, k)) return false;
      return true;
    case SenOp::Exists:
    case SenOp::Forall: {
      std::vector<Binder> bs;
      for (const auto& [v, srt] : s.block->vars) bs.push_back({v, srt, false});
      for (const auto& [v, srt] : s.block->lvars) bs.push_back({v, srt, true});
      return quant_rec(m, env, bs, 0, s.kids[0], s.op == SenOp::Forall);
    }
  }
  fail("sentence: corrupt node");
}

}  // namespace

bool satisfies(const KleeneModel& m, const Env& env, const Sentence& s) {
  Env scratch = env;
  return sat_rec(m, scratch, s);
}

bool satisfies(const KleeneModel& m, const Sentence& s) {
  Env env;
  return sat_rec(m, env, s);
}

bool satisfies(const FiniteModel& m, const Sentence& s) {
  return satisfies(standard(m), s);
}

std::vector<std::string> model_problems(const FiniteModel& m) {
  std::vector<std::string> out;
  try {
    validate_signature(m.sig);
  } catch (const SyntaxError& e) {
    out.push_back(e.what());
    return out;
  }
  for (const auto& s : m.sig.sorts) {
    auto it = m.carrier.find(s);
    if (it == m.carrier.end()) {
      out.push_back("no carrier for sort " + s);
      continue;
    }
    if (it->second == 0) out.push_back("empty carrier for sort " + s);
    if (it->second > kMaxRelationDim)
      out.push_back("carrier of sort " + s + " exceeds " +
                    std::to_string(kMaxRelationDim));
    auto en = m.elem_names.find(s);
    if (en != m.elem_names.end() && en->second.size() != it->second)
      out.push_back("element name list for sort " + s + " has wrong length");
  }
  for (const auto& kv : m.carrier)
    if (!m.sig.has_sort(kv.first)) out.push_back("carrier for unknown sort " + kv.first);
  for (const auto& [f, p] : m.sig.funcs) {
    auto it = m.funcs.find(f);
    if (it == m.funcs.end()) {
      out.push_back("no table for function " + f);
      continue;
    }
    size_t want = 1;
    bool sized = true;
    for (const auto& a : p.args) {
      auto c = m.carrier.find(a);
      if (c == m.carrier.end()) {
        sized = false;
        break;
      }
      want *= c->second;
    }
    if (!sized) continue;
    if (it->second.size() != want) {
      out.push_back("table for " + f + " has " + std::to_string(it->second.size()) +
                    " entries, expected " + std::to_string(want));
      continue;
    }
    auto rc = m.carrier.find(p.result);
    if (rc != m.carrier.end())
      for (uint32_t v : it->second)
        if (v >= rc->second) {
          out.push_back("table for " + f + " has out-of-range value");
          break;
        }
  }
  for (const auto& kv : m.funcs)
    if (!m.sig.funcs.count(kv.first))
      out.push_back("table for unknown function " + kv.first);
  for (const auto& [l, s] : m.sig.labels) {
    auto it = m.labels.find(l);
    if (it == m.labels.end()) {
      out.push_back("no relation for label " + l);
      continue;
    }
    auto c = m.carrier.find(s);
    if (c != m.carrier.end() &&
        (it->second.n != c->second || it->second.rows.size() != c->second))
      out.push_back("relation for " + l + " has wrong dimension");
  }
  for (const auto& kv : m.labels)
    if (!m.sig.labels.count(kv.first))
      out.push_back("relation for unknown label " + kv.first);
  return out;
}

std::vector<std::string> kleene_problems(const KleeneModel& m) {
  std::vector<std::string> out = model_problems(m.base);
  if (!out.empty()) return out;
  for (const auto& [sort, f] : m.fam) {
    if (!m.base.sig.has_sort(sort)) {
      out.push_back("relation family for unknown sort " + sort);
      continue;
    }
    uint32_t n = carrier_of(m.base, sort);
    bool dims_ok = true;
    for (const auto& r : f.rels)
      if (r.n != n || r.rows.size() != n) {
        out.push_back("family over " + sort + " contains a wrong-dimension relation");
        dims_ok = false;
        break;
      }
    if (!dims_ok) continue;
    if (f.star.size() != f.rels.size()) {
      out.push_back("star table over " + sort + " is not total");
      continue;
    }
    bool idx_ok = true;
    for (size_t i : f.star)
      if (i >= f.rels.size()) {
        out.push_back("star table over " + sort + " has an out-of-range index");
        idx_ok = false;
        break;
      }
    if (!idx_ok) continue;

    auto member = [&](const Relation& r) {
      return std::find(f.rels.begin(), f.rels.end(), r) != f.rels.end();
    };
    // Star must be a function of the relation value, not of list position.
    std::map<Relation, Relation> star_fn;
    bool fn_ok = true;
    for (size_t i = 0; i < f.rels.size(); ++i) {
      auto [it, fresh] = star_fn.emplace(f.rels[i], f.rels[f.star[i]]);
      if (!fresh && it->second != f.rels[f.star[i]]) {
        out.push_back("star table over " + sort + " disagrees on duplicate entries");
        fn_ok = false;
        break;
      }
    }
    if (!fn_ok) continue;

    for (const auto& [l, s] : m.base.sig.labels)
      if (s == sort && !member(m.base.labels.at(l)))
        out.push_back("label " + l + " is not in the family over " + sort);
    if (!member(Relation::empty(n)))
      out.push_back("family over " + sort + " is missing the empty relation");
    if (!member(Relation::identity(n)))
      out.push_back("family over " + sort + " is missing the identity relation");
    for (const auto& a : f.rels) {
      if (!member(rel_converse(a)))
        out.push_back("family over " + sort + " is not closed under converse");
      if (!member(rel_complement(a)))
        out.push_back("family over " + sort + " is not closed under complement");
      for (const auto& b : f.rels) {
        if (!member(rel_union(a, b)))
          out.push_back("family over " + sort + " is not closed under union");
        if (!member(rel_compose(a, b)))
          out.push_back("family over " + sort + " is not closed under composition");
      }
    }
    if (!out.empty()) return out;

    Relation id = Relation::identity(n);
    auto star_of = [&](const Relation& r) { return star_fn.at(r); };
    for (const auto& a : f.rels) {
      Relation sa = star_of(a);
      if (!rel_subset(id, sa))
        out.push_back("star over " + sort + " violates unit containment");
      if (!rel_subset(rel_compose(sa, a), sa))
        out.push_back("star over " + sort + " violates right absorption");
      if (!rel_subset(rel_compose(a, sa), sa))
        out.push_back("star over " + sort + " violates left absorption");
    }
    for (const auto& a : f.rels)
      for (const auto& b : f.rels) {
        if (rel_subset(rel_compose(a, b), a) &&
            !rel_subset(rel_compose(a, star_of(b)), a))
          out.push_back("star over " + sort + " violates right induction");
        if (rel_subset(rel_compose(a, b), b) &&
            !rel_subset(rel_compose(star_of(a), b), b))
          out.push_back("star over " + sort + " violates left induction");
      }
  }
  return out;
}

KleeneModel reduct(const KleeneModel& m, const GenMorphism& chi) {
  KleeneModel out;
  out.base.sig = chi.src;
  for (const auto& s : chi.src.sorts) {
    Name img = translate_sort(chi, s);
    out.base.carrier[s] = carrier_of(m.base, img);
    auto en = m.base.elem_names.find(img);
    if (en != m.base.elem_names.end()) out.base.elem_names[s] = en->second;
    auto fm = m.fam.find(img);
    if (fm != m.fam.end()) out.fam[s] = fm->second;
  }
  Env env;
  for (const auto& [f, p] : chi.src.funcs) {
    std::vector<uint32_t> dims;
    size_t total = 1;
    for (const auto& a : p.args) {
      dims.push_back(out.base.carrier.at(a));
      total *= dims.back();
    }
    const Term& image = chi.func_map.at(f);
    std::vector<uint32_t> table(total);
    std::vector<uint32_t> tuple(dims.size(), 0);
    for (size_t idx = 0; idx < total; ++idx) {
      table[idx] = eval_hterm(m, env, image, tuple);
      for (size_t k = dims.size(); k-- > 0;) {
        if (++tuple[k] < dims[k]) break;
        tuple[k] = 0;
      }
    }
    out.base.funcs[f] = std::move(table);
  }
  for (const auto& [l, s] : chi.src.labels) {
    (void)s;
    out.base.labels[l] = eval_action(m, env, chi.label_map.at(l));
  }
  return out;
}

FiniteModel reduct(const FiniteModel& m, const GenMorphism& chi) {
  return reduct(standard(m), chi).base;
}

bool same_interpretation(const FiniteModel& a, const FiniteModel& b) {
  return a.sig == b.sig && a.carrier == b.carrier && a.funcs == b.funcs &&
         a.labels == b.labels;
}

namespace {

// Star viewed as a function on relation values.
std::map<Name, std::map<Relation, Relation>> star_functions(const KleeneModel& m) {
  std::map<Name, std::map<Relation, Relation>> out;
  for (const auto& [sort, f] : m.fam) {
    auto& fn = out[sort];
    for (size_t i = 0; i < f.rels.size(); ++i) fn[f.rels[i]] = f.rels[f.star[i]];
  }
  return out;
}

}  // namespace

bool same_interpretation(const KleeneModel& a, const KleeneModel& b) {
  if (!same_interpretation(a.base, b.base)) return false;
  auto keys = [](const KleeneModel& m) {
    std::map<Name, std::set<Relation>> out;
    for (const auto& [sort, f] : m.fam)
      out[sort] = std::set<Relation>(f.rels.begin(), f.rels.end());
    return out;
  };
  return keys(a) == keys(b) && star_functions(a) == star_functions(b);
}

// ---------------------------------------------------------------------------
// Bounded search.

namespace {

void term_support(const Signature& sig, const Term& t, std::set<Name>& fs) {
  if (!is_hole(t) && sig.funcs.count(t.sym)) fs.insert(t.sym);
  for (const auto& a : t.args) term_support(sig, a, fs);
}

void action_support(const Signature& sig, const Action& a, std::set<Name>& ls) {
  if (a.op == ActOp::Label && sig.labels.count(a.label)) ls.insert(a.label);
  for (const auto& k : a.kids) action_support(sig, k, ls);
}

void sentence_support(const Signature& sig, const Sentence& s, std::set<Name>& fs,
                      std::set<Name>& ls) {
  for (const auto& t : s.terms) term_support(sig, t, fs);
  if (s.act) action_support(sig, *s.act, ls);
  for (const auto& k : s.kids) sentence_support(sig, k, fs, ls);
}

bool has_label_quantifier(const Sentence& s) {
  if (s.block && !s.block->lvars.empty()) return true;
  for (const auto& k : s.kids)
    if (has_label_quantifier(k)) return true;
  return false;
}

struct Constraint {
  const Sentence* s = nullptr;
  bool want = true;
  std::set<Name> fsupport, lsupport;
  bool unit = false;  // ground transition along a plain label
};

std::vector<std::vector<uint32_t>> carrier_vectors(size_t nsorts, uint32_t max) {
  std::vector<std::vector<uint32_t>> all;
  std::vector<uint32_t> cur(nsorts, 1);
  for (;;) {
    all.push_back(cur);
    size_t k = nsorts;
    while (k-- > 0) {
      if (++cur[k] <= max) break;
      cur[k] = 1;
      if (k == 0) {
        std::stable_sort(all.begin(), all.end(),
                         [](const std::vector<uint32_t>& a,
                            const std::vector<uint32_t>& b) {
                           uint64_t sa = 0, sb = 0;
                           for (uint32_t x : a) sa += x;
                           for (uint32_t x : b) sb += x;
                           if (sa != sb) return sa < sb;
                           return a < b;
                         });
        return all;
      }
    }
    if (nsorts == 0) {
      return all;  // single empty vector
    }
  }
}

struct Searcher {
  explicit Searcher(const Signature& s) : sig(s) {}

  const Signature& sig;
  std::vector<Constraint> cons;
  uint64_t evals = 0;

  KleeneModel km;  // mutated in place during the walk
  std::vector<Name> func_order, label_order;
  // batch[k]: constraints decidable right after symbol k is assigned.
  std::vector<std::vector<size_t>> batch;

  bool eval_con(const Constraint& c) {
    ++evals;
    return satisfies(km, *c.s) == c.want;
  }

  bool run_batch(size_t k) {
    for (size_t ci : batch[k])
      if (!eval_con(cons[ci])) return false;
    return true;
  }

  bool assign(size_t k) {
    size_t nf = func_order.size();
    if (k == nf + label_order.size()) return true;
    if (k < nf) {
      const Name& f = func_order[k];
      const FuncProfile& p = *sig.func(f);
      size_t total = 1;
      for (const auto& a : p.args) total *= km.base.carrier.at(a);
      uint32_t base = km.base.carrier.at(p.result);
      std::vector<uint32_t>& table = km.base.funcs[f];
      table.assign(total, 0);
      for (;;) {
        if (run_batch(k) && assign(k + 1)) return true;
        size_t i = total;
        bool carried = true;
        while (i-- > 0) {
          if (++table[i] < base) {
            carried = false;
            break;
          }
          table[i] = 0;
        }
        if (carried) break;
      }
      km.base.funcs.erase(f);
      return false;
    }

    const Name& l = label_order[k - nf];
    uint32_t n = km.base.carrier.at(*sig.label_sort(l));
    // Unit constraints pin individual bits; conflicting pins kill the branch.
    std::map<std::pair<uint32_t, uint32_t>, bool> forced;
    for (const auto& c : cons) {
      if (!c.unit || *c.lsupport.begin() != l) continue;
      Env env;
      uint32_t i = eval_term(km, env, c.s->terms[0]);
      uint32_t j = eval_term(km, env, c.s->terms[1]);
      auto [it, fresh] = forced.emplace(std::make_pair(i, j), c.want);
      if (!fresh && it->second != c.want) return false;
    }
    std::vector<std::pair<uint32_t, uint32_t>> free_bits;
    Relation base_rel = Relation::empty(n);
    for (uint32_t i = 0; i < n; ++i)
      for (uint32_t j = 0; j < n; ++j) {
        auto it = forced.find({i, j});
        if (it == forced.end())
          free_bits.push_back({i, j});
        else if (it->second)
          base_rel.set(i, j, true);
      }
    Relation& slot = km.base.labels[l];
    std::vector<bool> vals(free_bits.size(), false);
    for (;;) {
      slot = base_rel;
      for (size_t i = 0; i < free_bits.size(); ++i)
        if (vals[i]) slot.set(free_bits[i].first, free_bits[i].second, true);
      if (run_batch(k) && assign(k + 1)) return true;
      size_t i = free_bits.size();
      bool carried = true;
      while (i-- > 0) {
        if (!vals[i]) {
          vals[i] = true;
          std::fill(vals.begin() + ptrdiff_t(i) + 1, vals.end(), false);
          carried = false;
          break;
        }
      }
      if (carried) break;
    }
    km.base.labels.erase(l);
    return false;
  }
};

}  // namespace

SearchOutcome bounded_model_search(const Signature& sig,
                                   const std::vector<Sentence>& require_true,
                                   const std::vector<Sentence>& require_false,
                                   uint32_t max_carrier) {
  SearchOutcome out;
  Searcher sr{sig};
  for (const Sentence& s : require_true) sr.cons.push_back({&s, true, {}, {}, false});
  for (const Sentence& s : require_false) sr.cons.push_back({&s, false, {}, {}, false});
  for (auto& c : sr.cons) {
    sentence_support(sig, *c.s, c.fsupport, c.lsupport);
    c.unit = c.s->op == SenOp::Trans && c.s->act->op == ActOp::Label &&
             c.lsupport.size() == 1;
  }
  for (const auto& kv : sig.funcs) sr.func_order.push_back(kv.first);
  for (const auto& kv : sig.labels) sr.label_order.push_back(kv.first);

  // Constraints become decidable once the last symbol they mention is set;
  // within a batch, sentences without label quantifiers go first.
  size_t nsym = sr.func_order.size() + sr.label_order.size();
  sr.batch.assign(nsym, {});
  std::vector<size_t> immediate;
  auto sym_pos = [&](const Name& n, bool label) {
    const auto& v = label ? sr.label_order : sr.func_order;
    size_t off = label ? sr.func_order.size() : 0;
    return off + size_t(std::find(v.begin(), v.end(), n) - v.begin());
  };
  for (size_t ci = 0; ci < sr.cons.size(); ++ci) {
    const Constraint& c = sr.cons[ci];
    if (c.unit) continue;  // folded into the label walk
    size_t last = 0;
    bool any = false;
    for (const auto& f : c.fsupport) last = std::max(last, sym_pos(f, false)), any = true;
    for (const auto& l : c.lsupport) last = std::max(last, sym_pos(l, true)), any = true;
    if (any)
      sr.batch[last].push_back(ci);
    else
      immediate.push_back(ci);
  }
  auto cheaper = [&](size_t a, size_t b) {
    bool la = has_label_quantifier(*sr.cons[a].s), lb = has_label_quantifier(*sr.cons[b].s);
    if (la != lb) return lb;
    return complexity(*sr.cons[a].s) < complexity(*sr.cons[b].s);
  };
  for (auto& b : sr.batch) std::stable_sort(b.begin(), b.end(), cheaper);
  std::stable_sort(immediate.begin(), immediate.end(), cheaper);

  std::vector<Name> sort_order(sig.sorts.begin(), sig.sorts.end());
  for (const auto& cv : carrier_vectors(sort_order.size(), max_carrier)) {
    sr.km = KleeneModel{};
    sr.km.base.sig = sig;
    for (size_t i = 0; i < sort_order.size(); ++i)
      sr.km.base.carrier[sort_order[i]] = cv[i];
    bool ok = true;
    for (size_t ci : immediate)
      if (!sr.eval_con(sr.cons[ci])) {
        ok = false;
        break;
      }
    if (ok && sr.assign(0)) {
      out.model = sr.km.base;
      out.constraint_evals = sr.evals;
      return out;
    }
  }
  out.exhausted = true;
  out.constraint_evals = sr.evals;
  return out;
}

}  // namespace tak
