#include "tak/calculus.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <utility>

namespace tak {

namespace {

constexpr std::pair<Rule, const char*> kRuleNames[] = {
    {Rule::Init, "init"},           {Rule::InitStar, "init_star"},
    {Rule::Cut, "cut"},             {Rule::CutStar, "cut_star"},
    {Rule::Modify, "modify"},       {Rule::Atom, "atom"},
    {Rule::ZeroL, "zero_l"},        {Rule::OneL, "one_l"},
    {Rule::OneR, "one_r"},          {Rule::UnionL, "union_l"},
    {Rule::UnionR, "union_r"},      {Rule::PreImpL, "preimp_l"},
    {Rule::PreImpR, "preimp_r"},    {Rule::CompL, "comp_l"},
    {Rule::CompR, "comp_r"},        {Rule::ResidL, "resid_l"},
    {Rule::ResidR, "resid_r"},      {Rule::ImpL, "imp_l"},
    {Rule::ImpR, "imp_r"},          {Rule::OrL, "or_l"},
    {Rule::OrR, "or_r"},            {Rule::AndL, "and_l"},
    {Rule::AndR, "and_r"},          {Rule::ExistsL, "exists_l"},
    {Rule::ExistsR, "exists_r"},    {Rule::ForallL, "forall_l"},
    {Rule::ForallR, "forall_r"},    {Rule::IndR0, "ind_r0"},
    {Rule::IndRPlus, "ind_r_plus"}, {Rule::IndRMinus, "ind_r_minus"},
    {Rule::IndLPlus, "ind_l_plus"}, {Rule::IndLMinus, "ind_l_minus"},
    {Rule::Kel, "kel"},
};

constexpr std::pair<KleeneAxiom, const char*> kAxiomNames[] = {
    {KleeneAxiom::OneLeStar, "one_le_star"},
    {KleeneAxiom::StarAbsorbRight, "star_absorb_right"},
    {KleeneAxiom::StarAbsorbLeft, "star_absorb_left"},
    {KleeneAxiom::CompLeLeft, "comp_le_left"},
    {KleeneAxiom::CompLeRight, "comp_le_right"},
};

// Check failure carried to the document boundary.
struct Fail {
  std::string path;
  Rule rule;
  std::string msg;
};

[[noreturn]] void fail(const std::string& path, Rule rule,
                       const std::string& msg) {
  throw Fail{path, rule, msg};
}

using Keys = std::set<std::string>;

Keys side_keys(const std::vector<Sentence>& side) {
  Keys out;
  for (const Sentence& s : side) out.insert(sentence_key(s));
  return out;
}

bool is_basic(const Sentence& s) {
  if (s.op == SenOp::Eq) return true;
  return s.op == SenOp::Trans && s.act->op == ActOp::Label;
}

bool is_star_trans(const Sentence& s) {
  return s.op == SenOp::Trans && s.act->op == ActOp::Star;
}

// What a premise must state: the signature its sequent lives over plus the
// sentences the rule puts on each side.
struct Spec {
  Signature sig;
  std::vector<Sentence> lact, ract;
};

struct Checker {
  const ProofDoc& doc;

  std::string child(const std::string& path, std::size_t i) const {
    std::string out = path.empty() ? "" : path + ".";
    return out + std::to_string(i);
  }

  void validate_side(const Signature& sig, const std::vector<Sentence>& side,
                     const std::string& path, Rule rule,
                     const char* which) const {
    for (const Sentence& s : side) {
      try {
        validate_sentence(sig, s);
      } catch (const SyntaxError& e) {
        fail(path, rule,
             std::string(which) + " sentence not well-formed over the node "
                                  "signature: " +
                 e.what());
      }
    }
  }

  const Sentence& principal(const ProofNode& n, const std::string& path) const {
    if (!n.choice.principal) fail(path, n.rule, "missing principal sentence");
    return *n.choice.principal;
  }

  const Sentence& principal_shaped(const Signature& sig, const ProofNode& n,
                                   const std::string& path, SenOp op,
                                   std::optional<ActOp> aop,
                                   const char* shape) const {
    const Sentence& p = principal(n, path);
    try {
      validate_sentence(sig, p);
    } catch (const SyntaxError& e) {
      fail(path, n.rule,
           std::string("principal not well-formed over the node signature: ") +
               e.what());
    }
    if (p.op != op || (aop && p.act->op != *aop))
      fail(path, n.rule, std::string("principal is not ") + shape);
    return p;
  }

  const Term& witness(const Signature& sig, const ProofNode& n,
                      const std::string& path) const {
    if (!n.choice.witness) fail(path, n.rule, "missing witness term");
    try {
      validate_term(sig, *n.choice.witness);
    } catch (const SyntaxError& e) {
      fail(path, n.rule, std::string("witness term: ") + e.what());
    }
    return *n.choice.witness;
  }

  Signature extend_fresh(const Signature& sig, const ProofNode& n,
                         const std::string& path, std::size_t count,
                         const Name& sort) const {
    if (n.choice.fresh.size() != count ||
        std::set<Name>(n.choice.fresh.begin(), n.choice.fresh.end()).size() !=
            count)
      fail(path, n.rule,
           "needs " + std::to_string(count) + " distinct fresh names");
    Block x;
    for (const Name& v : n.choice.fresh) x.vars.emplace(v, sort);
    try {
      return extend_block(sig, x);
    } catch (const SyntaxError& e) {
      fail(path, n.rule, std::string("fresh name not fresh: ") + e.what());
    }
  }

  // Premise actives must be stated; conclusion must hold the principals and
  // otherwise stay between the union of premise contexts and the union of
  // whole premises. For membership-only rules the conclusion is unconstrained
  // beyond holding the principals.
  void run(const ProofNode& n, const std::string& path,
           const std::vector<Sentence>& left_p,
           const std::vector<Sentence>& right_p, const std::vector<Spec>& specs,
           bool bounded, const Term* mid) const {
    if (n.premises.size() != specs.size())
      fail(path, n.rule,
           "rule takes " + std::to_string(specs.size()) + " premises, " +
               std::to_string(n.premises.size()) + " given");

    for (const Spec& sp : specs) {
      for (const Sentence& s : sp.lact)
        try {
          validate_sentence(sp.sig, s);
        } catch (const SyntaxError& e) {
          fail(path, n.rule, std::string("rule instance ill-formed: ") + e.what());
        }
      for (const Sentence& s : sp.ract)
        try {
          validate_sentence(sp.sig, s);
        } catch (const SyntaxError& e) {
          fail(path, n.rule, std::string("rule instance ill-formed: ") + e.what());
        }
    }

    Keys cl = side_keys(n.seq.left), cr = side_keys(n.seq.right);
    for (const Sentence& p : left_p)
      if (!cl.count(sentence_key(p)))
        fail(path, n.rule, "principal sentence is not on the conclusion's left");
    for (const Sentence& p : right_p)
      if (!cr.count(sentence_key(p)))
        fail(path, n.rule,
             "principal sentence is not on the conclusion's right");

    auto require = [&](std::size_t i, const std::vector<Sentence>& act,
                       const Keys& stated, const char* side) {
      for (const Sentence& a : act) {
        std::string k = sentence_key(a);
        if (stated.count(k)) continue;
        std::string msg = "premise " + std::to_string(i) + " must state " + k +
                          " on the " + side;
        if (mid &&
            std::find(a.terms.begin(), a.terms.end(), *mid) != a.terms.end())
          msg = "middle-term mismatch: " + msg;
        fail(path, n.rule, msg);
      }
    };

    std::vector<Keys> pls, prs;
    for (std::size_t i = 0; i < specs.size(); ++i) {
      pls.push_back(side_keys(n.premises[i].seq.left));
      prs.push_back(side_keys(n.premises[i].seq.right));
      require(i, specs[i].lact, pls[i], "left");
      require(i, specs[i].ract, prs[i], "right");
    }

    if (bounded) {
      auto bound_side = [&](const Keys& c, const std::vector<Sentence>& prin,
                            bool left, const char* side) {
        Keys low = side_keys(prin), high = low;
        for (std::size_t i = 0; i < specs.size(); ++i) {
          Keys act = side_keys(left ? specs[i].lact : specs[i].ract);
          for (const std::string& k : (left ? pls[i] : prs[i])) {
            high.insert(k);
            if (!act.count(k)) low.insert(k);
          }
        }
        for (const std::string& k : low)
          if (!c.count(k))
            fail(path, n.rule,
                 "conclusion " + std::string(side) + " must carry the premise "
                                                     "context sentence " +
                     k);
        for (const std::string& k : c)
          if (!high.count(k))
            fail(path, n.rule,
                 "conclusion " + std::string(side) +
                     " states a sentence the rule cannot introduce: " + k);
      };
      bound_side(cl, left_p, true, "left");
      bound_side(cr, right_p, false, "right");
    }

    for (std::size_t i = 0; i < specs.size(); ++i)
      check(specs[i].sig, n.premises[i], child(path, i));
  }

  void check(const Signature& sig, const ProofNode& n,
             const std::string& path) const {
    validate_side(sig, n.seq.left, path, n.rule, "left");
    validate_side(sig, n.seq.right, path, n.rule, "right");

    if (doc.intuitionistic) {
      std::size_t k = side_keys(n.seq.right).size();
      if (k > 1)
        fail(path, n.rule,
             "right side has " + std::to_string(k) +
                 " sentences in intuitionistic mode");
    }
    if (doc.ruleset == RuleSet::Ind && n.rule == Rule::Kel)
      fail(path, n.rule, "kel is only available in the kel ruleset");
    if (doc.ruleset == RuleSet::Kel &&
        (n.rule == Rule::IndR0 || n.rule == Rule::IndRPlus ||
         n.rule == Rule::IndRMinus || n.rule == Rule::IndLPlus ||
         n.rule == Rule::IndLMinus))
      fail(path, n.rule, "induction rules are only available in the ind ruleset");

    auto trans = [](const Term& t0, const Action& a, const Term& t1) {
      return sen_trans(t0, a, t1);
    };

    switch (n.rule) {
      case Rule::Init:
      case Rule::InitStar: {
        const Sentence& p = principal(n, path);
        try {
          validate_sentence(sig, p);
        } catch (const SyntaxError& e) {
          fail(path, n.rule,
               std::string("principal not well-formed over the node "
                           "signature: ") +
                   e.what());
        }
        if (n.rule == Rule::InitStar && !is_star_trans(p))
          fail(path, n.rule, "principal is not a starred transition");
        run(n, path, {p}, {p}, {}, false, nullptr);
        return;
      }

      case Rule::Cut:
      case Rule::CutStar: {
        const Sentence& p = principal(n, path);
        try {
          validate_sentence(sig, p);
        } catch (const SyntaxError& e) {
          fail(path, n.rule,
               std::string("cut sentence not well-formed over the node "
                           "signature: ") +
                   e.what());
        }
        if (n.rule == Rule::CutStar && !is_star_trans(p))
          fail(path, n.rule, "cut sentence is not a starred transition");
        std::vector<Spec> specs(2);
        specs[0] = {sig, {}, {p}};
        specs[1] = {sig, {p}, {}};
        run(n, path, {}, {}, specs, true, nullptr);
        return;
      }

      case Rule::Modify: {
        if (!n.choice.morphism) fail(path, n.rule, "missing morphism");
        const GenMorphism& m = *n.choice.morphism;
        try {
          validate_morphism(m);
        } catch (const SyntaxError& e) {
          fail(path, n.rule, std::string("morphism ill-formed: ") + e.what());
        }
        if (!(m.dst == sig))
          fail(path, n.rule, "morphism target differs from the node signature");
        if (n.premises.size() != 1)
          fail(path, n.rule,
               "rule takes 1 premise, " + std::to_string(n.premises.size()) +
                   " given");
        Keys cl = side_keys(n.seq.left), cr = side_keys(n.seq.right);
        auto carried = [&](const std::vector<Sentence>& side, const Keys& c,
                           const char* name) {
          for (const Sentence& s : side) {
            std::string k;
            try {
              k = sentence_key(translate_sentence(m, s));
            } catch (const SyntaxError& e) {
              fail(path, n.rule,
                   std::string("premise sentence does not translate: ") +
                       e.what());
            }
            if (!c.count(k))
              fail(path, n.rule,
                   "conclusion " + std::string(name) +
                       " must carry the translated premise sentence " + k);
          }
        };
        carried(n.premises[0].seq.left, cl, "left");
        carried(n.premises[0].seq.right, cr, "right");
        check(m.src, n.premises[0], child(path, 0));
        return;
      }

      case Rule::Atom: {
        std::vector<Sentence> lb, rb;
        for (const Sentence& s : n.seq.left)
          if (is_basic(s)) lb.push_back(s);
        for (const Sentence& s : n.seq.right)
          if (is_basic(s)) rb.push_back(s);
        if (!decide_basic(sig, lb, rb))
          fail(path, n.rule, "atomic side condition does not hold");
        run(n, path, {}, {}, {}, false, nullptr);
        return;
      }

      case Rule::ZeroL: {
        const Sentence& p = principal_shaped(sig, n, path, SenOp::Trans,
                                             ActOp::Zero, "an empty-action "
                                                          "transition");
        run(n, path, {p}, {}, {}, false, nullptr);
        return;
      }

      case Rule::OneL:
      case Rule::OneR: {
        bool left = n.rule == Rule::OneL;
        const Sentence& p = principal_shaped(
            sig, n, path, SenOp::Trans, ActOp::One, "an identity transition");
        Spec sp{sig, {}, {}};
        Sentence eq = sen_eq(p.terms[0], p.terms[1]);
        std::vector<Sentence> lp, rp;
        if (left) {
          sp.lact.push_back(eq);
          lp.push_back(p);
        } else {
          sp.ract.push_back(eq);
          rp.push_back(p);
        }
        run(n, path, lp, rp, {sp}, true, nullptr);
        return;
      }

      case Rule::UnionL: {
        const Sentence& p = principal_shaped(sig, n, path, SenOp::Trans,
                                             ActOp::Union, "a union transition");
        std::vector<Spec> specs(2);
        for (int i = 0; i < 2; ++i)
          specs[i] = {sig, {trans(p.terms[0], p.act->kids[i], p.terms[1])}, {}};
        run(n, path, {p}, {}, specs, true, nullptr);
        return;
      }

      case Rule::UnionR: {
        const Sentence& p = principal_shaped(sig, n, path, SenOp::Trans,
                                             ActOp::Union, "a union transition");
        if (n.choice.index > 1) fail(path, n.rule, "index out of range");
        Spec sp{sig, {}, {trans(p.terms[0], p.act->kids[n.choice.index],
                                p.terms[1])}};
        run(n, path, {}, {p}, {sp}, true, nullptr);
        return;
      }

      case Rule::PreImpL: {
        const Sentence& p = principal_shaped(sig, n, path, SenOp::Trans,
                                             ActOp::PreImp,
                                             "a pre-implication transition");
        std::vector<Spec> specs(2);
        specs[0] = {sig, {}, {trans(p.terms[0], p.act->kids[0], p.terms[1])}};
        specs[1] = {sig, {trans(p.terms[0], p.act->kids[1], p.terms[1])}, {}};
        run(n, path, {p}, {}, specs, true, nullptr);
        return;
      }

      case Rule::PreImpR: {
        const Sentence& p = principal_shaped(sig, n, path, SenOp::Trans,
                                             ActOp::PreImp,
                                             "a pre-implication transition");
        Spec sp{sig,
                {trans(p.terms[0], p.act->kids[0], p.terms[1])},
                {trans(p.terms[0], p.act->kids[1], p.terms[1])}};
        run(n, path, {}, {p}, {sp}, true, nullptr);
        return;
      }

      case Rule::CompL:
      case Rule::ResidL: {
        bool comp = n.rule == Rule::CompL;
        const Sentence& p = principal_shaped(
            sig, n, path, SenOp::Trans, comp ? ActOp::Comp : ActOp::Resid,
            comp ? "a composition transition" : "a residual transition");
        Signature ext = extend_fresh(sig, n, path, 1, p.act->sort);
        Term x = make_const(ext, n.choice.fresh[0]);
        Spec sp{ext, {}, {}};
        if (comp)
          sp.lact = {trans(p.terms[0], p.act->kids[0], x),
                     trans(x, p.act->kids[1], p.terms[1])};
        else
          sp.lact = {trans(x, p.act->kids[0], p.terms[0]),
                     trans(x, p.act->kids[1], p.terms[1])};
        run(n, path, {p}, {}, {sp}, true, nullptr);
        return;
      }

      case Rule::CompR:
      case Rule::ResidR: {
        bool comp = n.rule == Rule::CompR;
        const Sentence& p = principal_shaped(
            sig, n, path, SenOp::Trans, comp ? ActOp::Comp : ActOp::Resid,
            comp ? "a composition transition" : "a residual transition");
        const Term& t = witness(sig, n, path);
        std::vector<Spec> specs(2);
        if (comp) {
          specs[0] = {sig, {}, {trans(p.terms[0], p.act->kids[0], t)}};
          specs[1] = {sig, {}, {trans(t, p.act->kids[1], p.terms[1])}};
        } else {
          specs[0] = {sig, {}, {trans(t, p.act->kids[0], p.terms[0])}};
          specs[1] = {sig, {}, {trans(t, p.act->kids[1], p.terms[1])}};
        }
        run(n, path, {}, {p}, specs, true, &t);
        return;
      }

      case Rule::ImpL: {
        const Sentence& p =
            principal_shaped(sig, n, path, SenOp::Implies, std::nullopt,
                             "an implication");
        std::vector<Spec> specs(2);
        specs[0] = {sig, {}, {p.kids[0]}};
        specs[1] = {sig, {p.kids[1]}, {}};
        run(n, path, {p}, {}, specs, true, nullptr);
        return;
      }

      case Rule::ImpR: {
        const Sentence& p =
            principal_shaped(sig, n, path, SenOp::Implies, std::nullopt,
                             "an implication");
        Spec sp{sig, {p.kids[0]}, {p.kids[1]}};
        run(n, path, {}, {p}, {sp}, true, nullptr);
        return;
      }

      case Rule::OrL:
      case Rule::AndR: {
        bool left = n.rule == Rule::OrL;
        const Sentence& p = principal_shaped(
            sig, n, path, left ? SenOp::Or : SenOp::And, std::nullopt,
            left ? "a disjunction" : "a conjunction");
        std::vector<Spec> specs(p.kids.size());
        std::vector<Sentence> lp, rp;
        for (std::size_t i = 0; i < p.kids.size(); ++i) {
          specs[i].sig = sig;
          if (left)
            specs[i].lact.push_back(p.kids[i]);
          else
            specs[i].ract.push_back(p.kids[i]);
        }
        if (left)
          lp.push_back(p);
        else
          rp.push_back(p);
        run(n, path, lp, rp, specs, true, nullptr);
        return;
      }

      case Rule::OrR:
      case Rule::AndL: {
        bool right = n.rule == Rule::OrR;
        const Sentence& p = principal_shaped(
            sig, n, path, right ? SenOp::Or : SenOp::And, std::nullopt,
            right ? "a disjunction" : "a conjunction");
        if (n.choice.index >= p.kids.size())
          fail(path, n.rule, "index out of range");
        Spec sp{sig, {}, {}};
        std::vector<Sentence> lp, rp;
        if (right) {
          sp.ract.push_back(p.kids[n.choice.index]);
          rp.push_back(p);
        } else {
          sp.lact.push_back(p.kids[n.choice.index]);
          lp.push_back(p);
        }
        run(n, path, lp, rp, {sp}, true, nullptr);
        return;
      }

      case Rule::ExistsL:
      case Rule::ForallR: {
        bool left = n.rule == Rule::ExistsL;
        const Sentence& p = principal_shaped(
            sig, n, path, left ? SenOp::Exists : SenOp::Forall, std::nullopt,
            left ? "an existential" : "a universal");
        Signature ext;
        try {
          ext = extend_block(sig, *p.block);
        } catch (const SyntaxError& e) {
          fail(path, n.rule, std::string("binder not fresh: ") + e.what());
        }
        Spec sp{ext, {}, {}};
        std::vector<Sentence> lp, rp;
        if (left) {
          sp.lact.push_back(p.kids[0]);
          lp.push_back(p);
        } else {
          sp.ract.push_back(p.kids[0]);
          rp.push_back(p);
        }
        run(n, path, lp, rp, {sp}, true, nullptr);
        return;
      }

      case Rule::ExistsR:
      case Rule::ForallL: {
        bool right = n.rule == Rule::ExistsR;
        const Sentence& p = principal_shaped(
            sig, n, path, right ? SenOp::Exists : SenOp::Forall, std::nullopt,
            right ? "an existential" : "a universal");
        Sentence inst;
        try {
          inst = instantiate(p, n.choice.term_images, n.choice.act_images);
        } catch (const SyntaxError& e) {
          fail(path, n.rule, std::string("substitution: ") + e.what());
        }
        Spec sp{sig, {}, {}};
        std::vector<Sentence> lp, rp;
        if (right) {
          sp.ract.push_back(inst);
          rp.push_back(p);
        } else {
          sp.lact.push_back(inst);
          lp.push_back(p);
        }
        run(n, path, lp, rp, {sp}, true, nullptr);
        return;
      }

      case Rule::IndR0: {
        const Sentence& p = principal_shaped(sig, n, path, SenOp::Trans,
                                             ActOp::Star, "a starred transition");
        Spec sp{sig, {}, {sen_eq(p.terms[0], p.terms[1])}};
        run(n, path, {}, {p}, {sp}, true, nullptr);
        return;
      }

      case Rule::IndRPlus:
      case Rule::IndRMinus: {
        bool plus = n.rule == Rule::IndRPlus;
        const Sentence& p = principal_shaped(sig, n, path, SenOp::Trans,
                                             ActOp::Star, "a starred transition");
        const Term& t = witness(sig, n, path);
        const Action& a = p.act->kids[0];
        std::vector<Spec> specs(2);
        if (plus) {
          specs[0] = {sig, {}, {trans(p.terms[0], *p.act, t)}};
          specs[1] = {sig, {}, {trans(t, a, p.terms[1])}};
        } else {
          specs[0] = {sig, {}, {trans(p.terms[0], a, t)}};
          specs[1] = {sig, {}, {trans(t, *p.act, p.terms[1])}};
        }
        run(n, path, {}, {p}, specs, true, &t);
        return;
      }

      case Rule::IndLPlus:
      case Rule::IndLMinus: {
        bool plus = n.rule == Rule::IndLPlus;
        const Sentence& p = principal_shaped(sig, n, path, SenOp::Trans,
                                             ActOp::Star, "a starred transition");
        const Term& t = witness(sig, n, path);
        if (!n.choice.target) fail(path, n.rule, "missing target action");
        const Action& inv = *n.choice.target;
        try {
          validate_action(sig, inv);
        } catch (const SyntaxError& e) {
          fail(path, n.rule, std::string("target action: ") + e.what());
        }
        const Action& a = p.act->kids[0];
        Signature ext = extend_fresh(sig, n, path, 3, p.act->sort);
        Term x = make_const(ext, n.choice.fresh[0]);
        Term y = make_const(ext, n.choice.fresh[1]);
        Term z = make_const(ext, n.choice.fresh[2]);
        std::vector<Spec> specs(3);
        if (plus) {
          specs[0] = {sig, {}, {trans(t, inv, p.terms[0])}};
          specs[1] = {ext, {trans(z, inv, x), trans(x, a, y)}, {trans(z, inv, y)}};
          specs[2] = {sig, {trans(t, inv, p.terms[1])}, {}};
        } else {
          specs[0] = {sig, {}, {trans(p.terms[1], inv, t)}};
          specs[1] = {ext, {trans(x, a, y), trans(y, inv, z)}, {trans(x, inv, z)}};
          specs[2] = {sig, {trans(p.terms[0], inv, t)}, {}};
        }
        run(n, path, {p}, {}, specs, true, &t);
        return;
      }

      case Rule::Kel: {
        if (!n.choice.axiom) fail(path, n.rule, "missing axiom form");
        if (n.choice.axiom_args.empty() || n.choice.axiom_args.size() > 2)
          fail(path, n.rule, "axiom takes one or two actions");
        Sentence phi;
        try {
          phi = axiom_sentence(sig, *n.choice.axiom, n.choice.axiom_args[0],
                               n.choice.axiom_args.size() == 2
                                   ? std::optional<Action>(n.choice.axiom_args[1])
                                   : std::nullopt);
        } catch (const SyntaxError& e) {
          fail(path, n.rule, std::string("axiom instance: ") + e.what());
        }
        Spec sp{sig, {phi}, {}};
        run(n, path, {}, {}, {sp}, true, nullptr);
        return;
      }
    }
    fail(path, n.rule, "unknown rule");
  }
};

}  // namespace

const char* rule_name(Rule r) {
  for (const auto& [rule, name] : kRuleNames)
    if (rule == r) return name;
  return "?";
}

std::optional<Rule> rule_from_name(const std::string& name) {
  for (const auto& [rule, n] : kRuleNames)
    if (name == n) return rule;
  return std::nullopt;
}

const char* axiom_name(KleeneAxiom a) {
  for (const auto& [ax, name] : kAxiomNames)
    if (ax == a) return name;
  return "?";
}

std::optional<KleeneAxiom> axiom_from_name(const std::string& name) {
  for (const auto& [ax, n] : kAxiomNames)
    if (name == n) return ax;
  return std::nullopt;
}

Sentence axiom_sentence(const Signature& sig, KleeneAxiom form,
                        const Action& a1, const std::optional<Action>& a2) {
  validate_action(sig, a1);
  if (a2) validate_action(sig, *a2);
  switch (form) {
    case KleeneAxiom::OneLeStar:
      return action_le(sig, act_one(a1.sort), act_star(a1));
    case KleeneAxiom::StarAbsorbRight:
      return action_le(sig, act_comp(act_star(a1), a1), act_star(a1));
    case KleeneAxiom::StarAbsorbLeft:
      return action_le(sig, act_comp(a1, act_star(a1)), act_star(a1));
    case KleeneAxiom::CompLeLeft:
    case KleeneAxiom::CompLeRight:
      break;
  }
  if (!a2) throw SyntaxError("axiom form takes two actions");
  if (form == KleeneAxiom::CompLeLeft)
    return sen_implies(action_le(sig, act_comp(a1, *a2), a1),
                       action_le(sig, act_comp(a1, act_star(*a2)), a1));
  return sen_implies(action_le(sig, act_comp(a1, *a2), *a2),
                     action_le(sig, act_comp(act_star(a1), *a2), *a2));
}

bool decide_basic(const Signature& sig, const std::vector<Sentence>& lhs,
                  const std::vector<Sentence>& rhs) {
  for (const std::vector<Sentence>* side : {&lhs, &rhs})
    for (const Sentence& s : *side) {
      validate_sentence(sig, s);
      if (!is_basic(s))
        throw SyntaxError("not in basic fragment: " + sentence_key(s));
    }

  // Congruence closure over every subterm on either side.
  std::vector<Term> subs;
  std::map<std::string, std::size_t> id;
  std::function<std::size_t(const Term&)> intern = [&](const Term& t) {
    std::string k = term_key(t);
    auto it = id.find(k);
    if (it != id.end()) return it->second;
    for (const Term& a : t.args) intern(a);
    std::size_t i = subs.size();
    id.emplace(k, i);
    subs.push_back(t);
    return i;
  };
  for (const std::vector<Sentence>* side : {&lhs, &rhs})
    for (const Sentence& s : *side)
      for (const Term& t : s.terms) intern(t);

  std::vector<std::size_t> parent(subs.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  auto unite = [&](std::size_t a, std::size_t b) {
    parent[find(a)] = find(b);
  };

  std::vector<std::vector<std::size_t>> arg_ids(subs.size());
  for (std::size_t i = 0; i < subs.size(); ++i)
    for (const Term& a : subs[i].args) arg_ids[i].push_back(id.at(term_key(a)));

  for (const Sentence& s : lhs)
    if (s.op == SenOp::Eq)
      unite(id.at(term_key(s.terms[0])), id.at(term_key(s.terms[1])));

  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < subs.size(); ++i)
      for (std::size_t j = i + 1; j < subs.size(); ++j) {
        if (find(i) == find(j) || subs[i].sym != subs[j].sym ||
            arg_ids[i].size() != arg_ids[j].size())
          continue;
        bool match = true;
        for (std::size_t k = 0; match && k < arg_ids[i].size(); ++k)
          match = find(arg_ids[i][k]) == find(arg_ids[j][k]);
        if (match) {
          unite(i, j);
          changed = true;
        }
      }
  }

  auto cls = [&](const Term& t) { return find(id.at(term_key(t))); };
  for (const Sentence& d : rhs) {
    if (d.op == SenOp::Eq) {
      if (cls(d.terms[0]) == cls(d.terms[1])) return true;
      continue;
    }
    for (const Sentence& g : lhs)
      if (g.op == SenOp::Trans && g.act->label == d.act->label &&
          cls(g.terms[0]) == cls(d.terms[0]) &&
          cls(g.terms[1]) == cls(d.terms[1]))
        return true;
  }
  return false;
}

Verdict check_proof(const Signature& sig, const ProofDoc& doc) {
  try {
    validate_signature(sig);
    Checker{doc}.check(sig, doc.root, "");
  } catch (const Fail& f) {
    return {false, f.path, rule_name(f.rule), f.msg};
  } catch (const SyntaxError& e) {
    return {false, "", "", e.what()};
  }
  return {true, "", "", ""};
}

}  // namespace tak
