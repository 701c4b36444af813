#pragma once

// Random applicable rule instances and the semantic checks run on them.

#include <algorithm>
#include <optional>
#include <string>

#include "minicalc/kernel.hpp"
#include "minicalc/semantics.hpp"
#include "support/generators.hpp"

namespace minicalc::testing {

struct RuleInstance {
  RuleApplication app;
  Sequent conclusion;
};

// Two predicates and two functions keep the table enumeration at domain 2 tiny.
inline GenConfig small_signature() {
  GenConfig cfg;
  cfg.predicates = {{"p", 1}, {"q", 0}};
  cfg.functions = {{"a", 0}, {"f", 1}};
  return cfg;
}

inline constexpr const char* kWitness = "c";

inline RuleInstance random_instance(RuleName rule, Generator& gen) {
  constexpr std::size_t depth = 2;
  auto closed = [&] { return gen.formula_at(0, depth); };
  auto body = [&] { return gen.formula_at(1, depth); };
  Sequent z = gen.sequent(2, depth);
  auto with_head = [&](Formula h) {
    Sequent s{std::move(h)};
    s.insert(s.end(), z.begin(), z.end());
    return s;
  };

  RuleInstance r;
  r.app.rule = rule;
  switch (rule) {
    case RuleName::Basic: {
      Formula h = closed();
      z.push_back(Formula::neg(h));
      std::shuffle(z.begin(), z.end(), gen.rng());
      r.conclusion = with_head(std::move(h));
      break;
    }
    case RuleName::Imp_R: r.conclusion = with_head(Formula::imp(closed(), closed())); break;
    case RuleName::Imp_L: r.conclusion = with_head(Formula::neg(Formula::imp(closed(), closed()))); break;
    case RuleName::Dis_R: r.conclusion = with_head(Formula::dis(closed(), closed())); break;
    case RuleName::Dis_L: r.conclusion = with_head(Formula::neg(Formula::dis(closed(), closed()))); break;
    case RuleName::Con_R: r.conclusion = with_head(Formula::con(closed(), closed())); break;
    case RuleName::Con_L: r.conclusion = with_head(Formula::neg(Formula::con(closed(), closed()))); break;
    case RuleName::NegNeg: r.conclusion = with_head(Formula::neg(Formula::neg(closed()))); break;
    case RuleName::Exi_R:
      r.conclusion = with_head(Formula::exi(body()));
      r.app.instantiation = gen.term(0, 2);
      break;
    case RuleName::Uni_L:
      r.conclusion = with_head(Formula::neg(Formula::uni(body())));
      r.app.instantiation = gen.term(0, 2);
      break;
    case RuleName::Exi_L:
      r.conclusion = with_head(Formula::neg(Formula::exi(body())));
      r.app.witness = kWitness;
      break;
    case RuleName::Uni_R:
      r.conclusion = with_head(Formula::uni(body()));
      r.app.witness = kWitness;
      break;
    case RuleName::Extra: {
      z.push_back(closed());
      const Formula p = z[gen.pick(z.size())];
      r.conclusion = z;
      r.app.target = with_head(p);
      break;
    }
    case RuleName::Ext: {
      z.push_back(closed());
      r.conclusion = z;
      Sequent target;
      const std::size_t n = gen.pick(4);
      for (std::size_t i = 0; i < n; ++i) target.push_back(z[gen.pick(z.size())]);
      r.app.target = target;
      break;
    }
  }
  return r;
}

inline bool finitely_valid(const Sequent& s, Element max_domain) {
  auto v = is_valid_upto(s, max_domain);
  if (!v) throw std::runtime_error(v.error().message);
  return !v->has_value();
}

/// Premises valid up to `max_domain` imply the conclusion is.
inline bool preserves_validity(const RuleInstance& r, const std::vector<Sequent>& premises, Element max_domain) {
  for (const Sequent& p : premises)
    if (!finitely_valid(p, max_domain)) return true;
  return finitely_valid(r.conclusion, max_domain);
}

/// The stronger per-interpretation reading: every interpretation satisfying
/// all premises satisfies the conclusion. For the eigenvariable rules the
/// premise must hold for every value of the witness constant.
inline std::optional<Interpretation> local_counterexample(const RuleInstance& r, const std::vector<Sequent>& premises,
                                                          Element max_domain) {
  const bool eigen = r.app.witness.has_value();
  Sequent all = r.conclusion;
  for (const Sequent& p : premises) all.insert(all.end(), p.begin(), p.end());
  Signature sig = signature_of(all);
  const Symbol witness{kWitness, 0};
  if (eigen) sig.functions.erase(witness);

  std::optional<Interpretation> bad;
  for (Element n = 1; n <= max_domain && !bad; ++n) {
    for_each_interpretation(sig, n, [&](const Interpretation& I) {
      bool premises_hold = true;
      if (eigen) {
        Interpretation J = I;
        for (Element d = 0; d < n && premises_hold; ++d) {
          J.functions[witness] = {d};
          premises_hold = std::all_of(premises.begin(), premises.end(), [&](const Sequent& p) { return eval_sequent(p, J); });
        }
      } else {
        premises_hold = std::all_of(premises.begin(), premises.end(), [&](const Sequent& p) { return eval_sequent(p, I); });
      }
      if (premises_hold && !eval_sequent(r.conclusion, I)) {
        bad = I;
        return false;
      }
      return true;
    });
  }
  return bad;
}

}  // namespace minicalc::testing
