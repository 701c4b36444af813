#pragma once

// The trusted core: list predicates, freshness, de Bruijn substitution and
// the bottom-up application of one rule to one sequent.

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "minicalc/expected.hpp"
#include "minicalc/rule_name.hpp"
#include "minicalc/syntax.hpp"

namespace minicalc {

inline bool member(const Formula& p, std::span<const Formula> z) {
  return std::find(z.begin(), z.end(), p) != z.end();
}

/// Every formula of `z` is a member of `y`.
inline bool ext_covers(std::span<const Formula> y, std::span<const Formula> z) {
  return std::all_of(z.begin(), z.end(), [&](const Formula& p) { return member(p, y); });
}

namespace detail {

inline bool term_mentions(const Term& t, std::string_view c) {
  if (t.is_var()) return false;
  if (t.name == c) return true;
  return std::any_of(t.args.begin(), t.args.end(), [&](const Term& a) { return term_mentions(a, c); });
}

inline bool formula_mentions(const Formula& f, std::string_view c) {
  if (f.is_atom())
    return std::any_of(f.args.begin(), f.args.end(), [&](const Term& a) { return term_mentions(a, c); });
  return std::any_of(f.sub.begin(), f.sub.end(), [&](const Formula& g) { return formula_mentions(g, c); });
}

}  // namespace detail

/// `c` occurs nowhere in `z` as a function symbol of any arity.
inline bool news(std::string_view c, std::span<const Formula> z) {
  return std::none_of(z.begin(), z.end(), [&](const Formula& f) { return detail::formula_mentions(f, c); });
}

inline Term lift_term(const Term& t, std::size_t depth) {
  if (t.is_var()) return Term::var(t.index + depth);
  Term out = Term::fun(t.name);
  out.args.reserve(t.args.size());
  for (const Term& a : t.args) out.args.push_back(lift_term(a, depth));
  return out;
}

namespace detail {

inline Term subst_term(const Term& s, const Term& t, std::size_t depth) {
  if (s.is_var()) {
    if (s.index == depth) return lift_term(t, depth);
    if (s.index > depth) return Term::var(s.index - 1);
    return s;
  }
  Term out = Term::fun(s.name);
  out.args.reserve(s.args.size());
  for (const Term& a : s.args) out.args.push_back(subst_term(a, t, depth));
  return out;
}

inline Formula subst_formula(const Formula& p, const Term& t, std::size_t depth) {
  if (p.is_atom()) {
    Formula out = Formula::pre(p.name);
    out.args.reserve(p.args.size());
    for (const Term& a : p.args) out.args.push_back(subst_term(a, t, depth));
    return out;
  }
  const std::size_t inner = (p.is(Connective::Uni) || p.is(Connective::Exi)) ? depth + 1 : depth;
  Formula out;
  out.op = p.op;
  out.sub.reserve(p.sub.size());
  for (const Formula& s : p.sub) out.sub.push_back(subst_formula(s, t, inner));
  return out;
}

}  // namespace detail

/// Replaces the variable bound by a discharged quantifier (index 0 of `p`)
/// with `t`, lowering every other free index by one.
inline Formula subt(const Term& t, const Formula& p) { return detail::subst_formula(p, t, 0); }

inline Formula inst(std::string_view c, const Formula& p) { return subt(Term::fun(std::string(c)), p); }

inline bool check_basic(const Sequent& s) {
  if (s.empty()) return false;
  return member(Formula::neg(s.front()), std::span<const Formula>(s).subspan(1));
}

struct RuleApplication {
  RuleName rule = RuleName::Basic;
  std::optional<Term> instantiation;  // Exi_R, Uni_L
  std::optional<std::string> witness;  // Exi_L, Uni_R
  std::optional<Sequent> target;       // Ext, Extra
};

struct NotApplicable {
  std::string reason;
};

using RuleResult = Expected<std::vector<Sequent>, NotApplicable>;

namespace detail {

inline Sequent cons(Formula head, std::span<const Formula> tail) {
  Sequent s;
  s.reserve(tail.size() + 1);
  s.push_back(std::move(head));
  s.insert(s.end(), tail.begin(), tail.end());
  return s;
}

inline Sequent cons2(Formula a, Formula b, std::span<const Formula> tail) {
  Sequent s;
  s.reserve(tail.size() + 2);
  s.push_back(std::move(a));
  s.push_back(std::move(b));
  s.insert(s.end(), tail.begin(), tail.end());
  return s;
}

inline Unexpected<NotApplicable> not_applicable(std::string reason) { return {NotApplicable{std::move(reason)}}; }

// Pattern of the principal formula each rule acts on; empty inner means the
// head itself must have the connective, otherwise it must be Neg of it.
struct Principal {
  bool negated;
  Connective op;
};

inline std::optional<Principal> principal(RuleName r) {
  switch (r) {
    case RuleName::Imp_R: return Principal{false, Connective::Imp};
    case RuleName::Imp_L: return Principal{true, Connective::Imp};
    case RuleName::Dis_R: return Principal{false, Connective::Dis};
    case RuleName::Dis_L: return Principal{true, Connective::Dis};
    case RuleName::Con_R: return Principal{false, Connective::Con};
    case RuleName::Con_L: return Principal{true, Connective::Con};
    case RuleName::Exi_R: return Principal{false, Connective::Exi};
    case RuleName::Exi_L: return Principal{true, Connective::Exi};
    case RuleName::Uni_R: return Principal{false, Connective::Uni};
    case RuleName::Uni_L: return Principal{true, Connective::Uni};
    case RuleName::NegNeg: return Principal{true, Connective::Neg};
    default: return std::nullopt;
  }
}

inline std::string principal_description(Principal p) {
  std::string kw(connective_keyword(p.op));
  return p.negated ? "Neg (" + kw + " ...)" : kw + " ...";
}

}  // namespace detail

/// The formula the rule decomposes, if the head of `s` has the right shape:
/// the connective node itself (below the Neg for left rules).
inline const Formula* principal_formula(RuleName r, const Sequent& s) {
  auto p = detail::principal(r);
  if (!p || s.empty()) return nullptr;
  const Formula* f = &s.front();
  if (p->negated) {
    if (!f->is(Connective::Neg)) return nullptr;
    f = &f->body();
  }
  return f->is(p->op) ? f : nullptr;
}

/// Premises of `app.rule` for conclusion `s`, read bottom-up.
inline RuleResult apply_rule(const RuleApplication& app, const Sequent& s) {
  using detail::cons;
  using detail::cons2;
  using detail::not_applicable;
  const RuleName r = app.rule;
  const std::string name(to_string(r));

  if (app.instantiation && !takes_term(r)) return not_applicable(name + " takes no instantiation term");
  if (app.witness && !takes_witness(r)) return not_applicable(name + " takes no witness constant");
  if (app.target && !takes_target(r)) return not_applicable(name + " takes no target sequent");

  if (r == RuleName::Basic) {
    if (s.empty()) return not_applicable("Basic needs a non-empty sequent");
    if (!check_basic(s))
      return not_applicable("Basic needs Neg (" + render(s.front()) + ") among the remaining formulas");
    return std::vector<Sequent>{};
  }
  if (r == RuleName::Ext) {
    if (!app.target) return not_applicable("Ext needs the stated premise sequent");
    for (const Formula& p : *app.target)
      if (!member(p, s)) return not_applicable("Ext premise mentions " + render(p) + ", which is not in the sequent");
    return std::vector<Sequent>{*app.target};
  }
  if (r == RuleName::Extra) {
    if (!app.target) return not_applicable("Extra needs the stated premise sequent");
    const Sequent& t = *app.target;
    if (t.size() != s.size() + 1 || !std::equal(s.begin(), s.end(), t.begin() + 1))
      return not_applicable("Extra premise must be the sequent with one formula added in front");
    if (!member(t.front(), s)) return not_applicable("Extra may only repeat a formula already in the sequent");
    return std::vector<Sequent>{t};
  }

  const Formula* f = principal_formula(r, s);
  if (!f) {
    const std::string found = s.empty() ? "an empty sequent" : render(s.front());
    return not_applicable(name + " needs " + detail::principal_description(*detail::principal(r)) +
                          " at the head, found " + found);
  }
  const auto z = std::span<const Formula>(s).subspan(1);

  switch (r) {
    case RuleName::Imp_R: return std::vector<Sequent>{cons2(Formula::neg(f->left()), f->right(), z)};
    case RuleName::Imp_L:
      return std::vector<Sequent>{cons(f->left(), z), cons(Formula::neg(f->right()), z)};
    case RuleName::Dis_R: return std::vector<Sequent>{cons2(f->left(), f->right(), z)};
    case RuleName::Dis_L:
      return std::vector<Sequent>{cons(Formula::neg(f->left()), z), cons(Formula::neg(f->right()), z)};
    case RuleName::Con_R: return std::vector<Sequent>{cons(f->left(), z), cons(f->right(), z)};
    case RuleName::Con_L:
      return std::vector<Sequent>{cons2(Formula::neg(f->left()), Formula::neg(f->right()), z)};
    case RuleName::NegNeg: return std::vector<Sequent>{cons(f->body(), z)};
    case RuleName::Exi_R:
    case RuleName::Uni_L: {
      if (!app.instantiation) return not_applicable(name + " needs an instantiation term");
      Formula body = subt(*app.instantiation, f->body());
      if (r == RuleName::Uni_L) body = Formula::neg(std::move(body));
      return std::vector<Sequent>{cons(std::move(body), z)};
    }
    case RuleName::Exi_L:
    case RuleName::Uni_R: {
      if (!app.witness) return not_applicable(name + " needs a witness constant");
      const std::string& c = *app.witness;
      if (!is_identifier(c)) return not_applicable("'" + c + "' is not a constant name");
      Sequent scope = cons(f->body(), z);
      if (!news(c, scope)) return not_applicable("witness " + c + " is not fresh: it already occurs in the sequent");
      Formula body = inst(c, f->body());
      if (r == RuleName::Exi_L) body = Formula::neg(std::move(body));
      return std::vector<Sequent>{cons(std::move(body), z)};
    }
    default: break;
  }
  return not_applicable(name + " is not handled");
}

}  // namespace minicalc
