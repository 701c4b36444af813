#pragma once

// Isabelle theory text for a verified proof.
//
// Template (one `apply` line per proof step):
//
//   theory <Name> imports <Imports> begin
//
//   (*
//   <promoted layout>
//   *)
//
//   proposition ‹<goal in higher-order logic notation>› by metis
//
//   lemma ‹⊩ [<goal as a fm datatype term>]›
//     apply (rule Imp_R)
//     apply (rule Exi_R[where t=‹Fun ''a'' []›])
//     ...
//     done
//
//   end
//
// A step that acts on several open goals repeats its rule once per goal it
// transforms, in frontier order: `apply (rule Basic, rule Basic)`.

#include <algorithm>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "minicalc/expected.hpp"
#include "minicalc/script.hpp"
#include "minicalc/semantics.hpp"
#include "minicalc/syntax.hpp"

namespace minicalc {

struct ExportOptions {
  std::string theory_name = "Result";
  std::string imports = "MiniCalc";
};

struct ExportError {
  std::string message;
};

/// Term or formula as a value of the formalization's datatypes.
inline std::string isabelle_term(const Term& t) {
  if (t.is_var()) return "Var " + std::to_string(t.index);
  std::string out = "Fun ''" + t.name + "'' [";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ", ";
    out += isabelle_term(t.args[i]);
  }
  return out + "]";
}

inline std::string isabelle_formula(const Formula& f, bool nested = false) {
  std::string out;
  if (f.is_atom()) {
    out = "Pre ''" + f.name + "'' [";
    for (std::size_t i = 0; i < f.args.size(); ++i) {
      if (i) out += ", ";
      out += isabelle_term(f.args[i]);
    }
    out += "]";
  } else {
    out = std::string(connective_keyword(f.op));
    for (const Formula& s : f.sub) out += " " + isabelle_formula(s, true);
  }
  return nested ? "(" + out + ")" : out;
}

inline std::string isabelle_sequent(const Sequent& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ", ";
    out += isabelle_formula(s[i]);
  }
  return out + "]";
}

namespace detail {

// Higher-order logic notation with named bound variables.
class HolPrinter {
 public:
  explicit HolPrinter(const Formula& f) {
    Signature sig = signature_of(Sequent{f});
    for (const Symbol& s : sig.functions) taken_.insert(s.name);
    for (const Symbol& s : sig.predicates) taken_.insert(s.name);
  }

  std::string print(const Formula& f) { return formula(f, 0); }

 private:
  // 0: binder body / top, 1: ⟶, 2: ∨, 3: ∧, 4: ¬ operand
  std::string formula(const Formula& f, int ctx) {
    switch (f.op) {
      case Connective::Pre: {
        std::string out = f.name;
        for (const Term& a : f.args) out += " " + term(a, true);
        return out;
      }
      case Connective::Neg: return "¬ " + formula(f.body(), 4);
      case Connective::Uni:
      case Connective::Exi: {
        const std::string v = fresh();
        bound_.push_back(v);
        std::string out = std::string(f.is(Connective::Uni) ? "∀" : "∃") + v + ". " + formula(f.body(), 0);
        bound_.pop_back();
        // A binder extends as far right as possible.
        return ctx > 0 ? "(" + out + ")" : out;
      }
      default: {
        const int prec = f.is(Connective::Imp) ? 1 : f.is(Connective::Dis) ? 2 : 3;
        const std::string_view sym = f.is(Connective::Imp) ? " ⟶ " : f.is(Connective::Dis) ? " ∨ " : " ∧ ";
        std::string out = formula(f.left(), prec + 1) + std::string(sym) + formula(f.right(), prec);
        return ctx > prec ? "(" + out + ")" : out;
      }
    }
  }

  std::string term(const Term& t, bool nested) {
    if (t.is_var()) {
      if (t.index < bound_.size()) return bound_[bound_.size() - 1 - t.index];
      return "v" + std::to_string(t.index - bound_.size());
    }
    if (t.args.empty()) return t.name;
    std::string out = t.name;
    for (const Term& a : t.args) out += " " + term(a, true);
    return nested ? "(" + out + ")" : out;
  }

  std::string fresh() {
    static constexpr std::string_view kBase[] = {"x", "y", "z", "u", "w"};
    for (std::size_t round = 0;; ++round) {
      for (std::string_view b : kBase) {
        std::string v(b);
        if (round) v += std::to_string(round);
        if (taken_.count(v) || std::find(bound_.begin(), bound_.end(), v) != bound_.end()) continue;
        return v;
      }
    }
  }

  std::set<std::string> taken_;
  std::vector<std::string> bound_;
};

inline std::string rule_clause(RuleName rule, const Term* annotation, const Sequent* target) {
  std::string out = "rule " + std::string(to_string(rule));
  if (annotation && takes_term(rule)) out += "[where t=‹" + isabelle_term(*annotation) + "›]";
  if (annotation && takes_witness(rule)) out += "[where c=‹''" + annotation->name + "''›]";
  if (target && rule == RuleName::Ext) out += "[where z=‹" + isabelle_sequent(*target) + "›]";
  if (target && rule == RuleName::Extra) out += "[where p=‹" + isabelle_formula(target->front()) + "›]";
  return out;
}

// Isabelle comments nest and end at "*)".
inline std::string comment_safe(std::string text) {
  for (std::size_t pos = 0; (pos = text.find("*)", pos)) != std::string::npos; pos += 3) text.replace(pos, 2, "* )");
  for (std::size_t pos = 0; (pos = text.find("(*", pos)) != std::string::npos; pos += 3) text.replace(pos, 2, "( *");
  return text;
}

}  // namespace detail

inline std::string hol_notation(const Formula& f) { return detail::HolPrinter(f).print(f); }

inline Expected<std::string, ExportError> export_isabelle(const ProofDocument& doc, const CheckReport& report,
                                                          const ExportOptions& options = {}) {
  if (report.verdict != Verdict::Verified)
    return Unexpected{ExportError{"only verified proofs can be exported (verdict: " +
                                  std::string(to_string(report.verdict)) + ")"}};
  if (!is_identifier(options.theory_name))
    return Unexpected{ExportError{"theory name '" + options.theory_name + "' is not a valid identifier"}};

  std::string out = "theory " + options.theory_name + " imports " + options.imports + " begin\n\n";
  out += "(*\n" + detail::comment_safe(format_promoted(doc, report)) + "*)\n\n";
  out += "proposition ‹" + hol_notation(doc.goal) + "› by metis\n\n";
  out += "lemma ‹⊩ [" + isabelle_formula(doc.goal) + "]›\n";

  for (std::size_t i = 0; i < doc.steps.size(); ++i) {
    const ProofStep& step = doc.steps[i];
    const ResolvedStep& resolved = report.steps[i];
    const std::vector<Sequent> stated = step.stated_frontier();
    std::string line = "  apply (";
    const auto& positions = resolved.transformed;
    for (std::size_t k = 0; k < positions.size(); ++k) {
      if (k) line += ", ";
      const Term* a = k < resolved.annotations.size() ? &resolved.annotations[k] : nullptr;
      const Sequent* target = takes_target(step.rule) ? &stated[positions[k]] : nullptr;
      line += detail::rule_clause(step.rule, a, target);
    }
    out += line + ")\n";
  }
  out += "  done\n\nend\n";
  return out;
}

}  // namespace minicalc
