#include "tak/amalgam.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace tak {

namespace {

[[noreturn]] void fail(const std::string& what) { throw AmalgamError(what); }

// Union-find over tagged symbols of one namespace.
struct Classes {
  std::map<SideSym, SideSym> parent;

  void add(const SideSym& x) {
    if (!parent.count(x)) parent[x] = x;
  }
  SideSym find(SideSym x) {
    while (!(parent.at(x) == x)) {
      parent[x] = parent.at(parent.at(x));
      x = parent.at(x);
    }
    return x;
  }
  void join(const SideSym& a, const SideSym& b) {
    SideSym ra = find(a), rb = find(b);
    if (ra == rb) return;
    // keep the smaller representative so class scans are stable
    if (rb < ra) std::swap(ra, rb);
    parent[rb] = ra;
  }

  // groups keyed by least member
  std::map<SideSym, std::vector<SideSym>> groups() {
    std::map<SideSym, std::vector<SideSym>> out;
    for (const auto& [x, p] : parent) {
      (void)p;
      out[find(x)].push_back(x);
    }
    for (auto& [r, v] : out) {
      (void)r;
      std::sort(v.begin(), v.end());
    }
    return out;
  }
};

// Deterministic class names: the least member's own name when unique, else
// side-prefixed, else underscore-extended until free.
std::map<SideSym, Name> name_classes(
    const std::map<SideSym, std::vector<SideSym>>& groups) {
  std::map<Name, std::vector<SideSym>> by_candidate;
  for (const auto& [rep, members] : groups) {
    (void)members;
    by_candidate[rep.name].push_back(rep);
  }
  std::map<SideSym, Name> out;
  std::set<Name> taken;
  for (const auto& [cand, reps] : by_candidate)
    if (reps.size() == 1) taken.insert(cand);
  for (const auto& [cand, reps] : by_candidate) {
    if (reps.size() == 1) {
      out[reps[0]] = cand;
      continue;
    }
    for (const auto& rep : reps) {
      Name n = (rep.side == 0 ? "l_" : "r_") + cand;
      while (taken.count(n)) n += "_";
      taken.insert(n);
      out[rep] = n;
    }
  }
  return out;
}

const Signature& leg_target(const Cospan& c, int side) {
  return side == 0 ? c.left.dst : c.right.dst;
}

}  // namespace

void validate_cospan(const Cospan& c) {
  validate_morphism(c.left);
  validate_morphism(c.right);
  if (!(c.left.src == c.right.src)) fail("cospan: legs differ at the source");
  if (!is_plain(c.left) || !is_plain(c.right))
    fail("cospan: legs must map symbols to symbols");
}

PushoutResult pushout(const Cospan& c) {
  validate_cospan(c);
  const Signature& s0 = c.left.dst;
  const Signature& s1 = c.right.dst;

  Classes sorts, funcs, labels;
  for (const auto& s : s0.sorts) sorts.add({0, s});
  for (const auto& s : s1.sorts) sorts.add({1, s});
  for (const auto& [f, p] : s0.funcs) {
    (void)p;
    funcs.add({0, f});
  }
  for (const auto& [f, p] : s1.funcs) {
    (void)p;
    funcs.add({1, f});
  }
  for (const auto& [l, s] : s0.labels) {
    (void)s;
    labels.add({0, l});
  }
  for (const auto& [l, s] : s1.labels) {
    (void)s;
    labels.add({1, l});
  }

  for (const auto& s : c.left.src.sorts)
    sorts.join({0, c.left.sort_map.at(s)}, {1, c.right.sort_map.at(s)});
  for (const auto& [f, p] : c.left.src.funcs) {
    (void)p;
    funcs.join({0, c.left.func_map.at(f).sym}, {1, c.right.func_map.at(f).sym});
  }
  for (const auto& [l, s] : c.left.src.labels) {
    (void)s;
    labels.join({0, c.left.label_map.at(l).label},
                {1, c.right.label_map.at(l).label});
  }

  auto sort_groups = sorts.groups();
  auto func_groups = funcs.groups();
  auto label_groups = labels.groups();
  auto sort_names = name_classes(sort_groups);
  auto func_names = name_classes(func_groups);
  auto label_names = name_classes(label_groups);

  PushoutResult out;
  // quotient sort of a tagged sort
  auto qsort = [&](const SideSym& s) { return sort_names.at(sorts.find(s)); };

  for (const auto& [rep, members] : sort_groups) {
    out.sig.sorts.insert(sort_names.at(rep));
    out.sort_classes[sort_names.at(rep)] = members;
  }
  for (const auto& [rep, members] : func_groups) {
    const FuncProfile& p = leg_target(c, rep.side).funcs.at(rep.name);
    FuncProfile q;
    for (const auto& a : p.args) q.args.push_back(qsort({rep.side, a}));
    q.result = qsort({rep.side, p.result});
    out.sig.funcs[func_names.at(rep)] = q;
    out.func_classes[func_names.at(rep)] = members;
  }
  for (const auto& [rep, members] : label_groups) {
    const Name& s = leg_target(c, rep.side).labels.at(rep.name);
    out.sig.labels[label_names.at(rep)] = qsort({rep.side, s});
    out.label_classes[label_names.at(rep)] = members;
  }
  validate_signature(out.sig);

  auto build_inj = [&](int side) {
    GenMorphism m;
    m.src = leg_target(c, side);
    m.dst = out.sig;
    for (const auto& s : m.src.sorts) m.sort_map[s] = qsort({side, s});
    for (const auto& [f, p] : m.src.funcs) {
      Name img = func_names.at(funcs.find({side, f}));
      std::vector<Term> hs;
      for (size_t i = 0; i < p.args.size(); ++i)
        hs.push_back(hole(int(i + 1), qsort({side, p.args[i]})));
      m.func_map[f] = Term{img, std::move(hs), qsort({side, p.result})};
    }
    for (const auto& [l, s] : m.src.labels) {
      Name img = label_names.at(labels.find({side, l}));
      m.label_map[l] = Action{ActOp::Label, img, qsort({side, s}), {}};
    }
    validate_morphism(m);
    return m;
  };
  out.inj0 = build_inj(0);
  out.inj1 = build_inj(1);
  return out;
}

DisjointReport is_disjoint(const Cospan& c) {
  validate_cospan(c);
  auto entangled = [&](const GenMorphism& leg) {
    std::map<Name, int> hits;
    for (const auto& s : leg.src.sorts) hits[leg.sort_map.at(s)]++;
    std::set<Name> out;
    for (const auto& s : leg.src.sorts)
      if (hits.at(leg.sort_map.at(s)) > 1) out.insert(s);
    return out;
  };
  std::set<Name> m0 = entangled(c.left), m1 = entangled(c.right);
  for (const auto& s : m0)
    if (m1.count(s)) return {false, s};
  return {true, std::nullopt};
}

namespace {

std::optional<ReductMismatch> first_difference(const KleeneModel& a,
                                               const KleeneModel& b) {
  const FiniteModel& fa = a.base;
  const FiniteModel& fb = b.base;
  for (const auto& [s, n] : fa.carrier) {
    if (fb.carrier.at(s) != n)
      return ReductMismatch{"sort " + s + ": carrier " + std::to_string(n) +
                            " vs " + std::to_string(fb.carrier.at(s))};
  }
  for (const auto& [f, t] : fa.funcs)
    if (fb.funcs.at(f) != t) return ReductMismatch{"function " + f};
  for (const auto& [l, r] : fa.labels)
    if (fb.labels.at(l) != r) return ReductMismatch{"label " + l};
  for (const auto& [s, n] : fa.carrier) {
    (void)n;
    bool ha = a.fam.count(s), hb = b.fam.count(s);
    if (ha != hb) return ReductMismatch{"relation family at sort " + s};
    if (!ha) continue;
    const RelFamily& ra = a.fam.at(s);
    const RelFamily& rb = b.fam.at(s);
    if (ra.rels != rb.rels || ra.star != rb.star)
      return ReductMismatch{"relation family at sort " + s};
  }
  return std::nullopt;
}

}  // namespace

std::variant<KleeneModel, ReductMismatch> amalgamate(const Cospan& c,
                                                     const PushoutResult& p,
                                                     const KleeneModel& m0,
                                                     const KleeneModel& m1) {
  if (!(m0.base.sig == c.left.dst) || !(m1.base.sig == c.right.dst))
    fail("amalgamate: models do not live over the cospan targets");
  KleeneModel r0 = reduct(m0, c.left);
  KleeneModel r1 = reduct(m1, c.right);
  if (auto d = first_difference(r0, r1)) return *d;

  auto pick = [&](const SideSym& s) -> const KleeneModel& {
    return s.side == 0 ? m0 : m1;
  };

  KleeneModel out;
  out.base.sig = p.sig;
  for (const auto& [q, members] : p.sort_classes) {
    const SideSym& rep = members.front();
    const FiniteModel& src = pick(rep).base;
    out.base.carrier[q] = src.carrier.at(rep.name);
    if (src.elem_names.count(rep.name))
      out.base.elem_names[q] = src.elem_names.at(rep.name);
    if (pick(rep).fam.count(rep.name)) out.fam[q] = pick(rep).fam.at(rep.name);
  }
  for (const auto& [q, members] : p.func_classes) {
    const SideSym& rep = members.front();
    out.base.funcs[q] = pick(rep).base.funcs.at(rep.name);
  }
  for (const auto& [q, members] : p.label_classes) {
    const SideSym& rep = members.front();
    out.base.labels[q] = pick(rep).base.labels.at(rep.name);
  }

  auto problems = model_problems(out.base);
  if (!problems.empty()) fail("amalgamate: " + problems.front());
  return out;
}

}  // namespace tak
