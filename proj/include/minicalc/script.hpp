#pragma once

// Proof scripts: a goal formula followed by steps. Each step names a rule,
// optionally carries bracketed annotations and states the resulting open
// goals, one block per goal, blocks separated by `+`.
//
//   Imp p p
//
//   Imp_R
//     Neg p
//     p
//   Ext
//     p
//     Neg p
//   Basic

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "minicalc/expected.hpp"
#include "minicalc/kernel.hpp"
#include "minicalc/semantics.hpp"
#include "minicalc/syntax.hpp"

namespace minicalc {

struct StatedBlock {
  Sequent formulas;
  std::vector<SourceSpan> spans;      // one per formula
  std::optional<SourceSpan> separator;  // the '+' before this block

  SourceSpan span() const {
    SourceSpan s = spans.front();
    for (const SourceSpan& x : spans) s = SourceSpan::cover(s, x);
    return s;
  }
};

struct ProofStep {
  RuleName rule = RuleName::Basic;
  SourceSpan rule_span;
  std::optional<std::vector<Term>> annotations;
  SourceSpan annotation_span;
  std::vector<StatedBlock> blocks;
  SourceSpan span;  // rule name through the last token of the step

  std::vector<Sequent> stated_frontier() const {
    std::vector<Sequent> out;
    out.reserve(blocks.size());
    for (const StatedBlock& b : blocks) out.push_back(b.formulas);
    return out;
  }
};

struct ProofDocument {
  Formula goal;
  SourceSpan goal_span;
  std::vector<ProofStep> steps;
  std::vector<Comment> comments;
};

// ---------------------------------------------------------------------------
// Reading

inline Expected<ProofDocument, ParseError> parse_document(std::string_view source) {
  auto lexed = tokenize(source);
  if (!lexed) return Unexpected{std::move(lexed).error()};
  Parser p(lexed->tokens);
  ProofDocument doc;
  doc.comments = std::move(lexed->comments);

  if (p.at_end()) return Unexpected{ParseError{{0, 0}, "empty proof: expected a goal formula"}};
  if (p.peek().kind == TokenKind::Ident && rule_from_string(p.peek().text))
    return Unexpected{p.error_at(p.peek(), "expected the goal formula before the first rule")};
  const std::size_t goal_start = p.peek().span.start;
  auto goal = p.formula();
  if (!goal) return Unexpected{std::move(goal).error()};
  doc.goal = std::move(*goal);
  doc.goal_span = {goal_start, p.previous().span.end};

  while (!p.at_end()) {
    const Token& tok = p.peek();
    if (tok.kind != TokenKind::Ident) {
      if (tok.kind == TokenKind::Plus) return Unexpected{p.error_at(tok, "'+' must separate two sequents")};
      return Unexpected{p.error_at(tok, "expected a rule name but found " + describe(tok))};
    }
    auto rule = rule_from_string(tok.text);
    if (!rule) {
      if (std::isupper(static_cast<unsigned char>(tok.text.front())) || tok.text.find('_') != std::string::npos)
        return Unexpected{p.error_at(tok, "unknown rule name '" + tok.text + "'")};
      return Unexpected{p.error_at(tok, "expected a rule name after the goal formula but found " + describe(tok))};
    }
    ProofStep step;
    step.rule = *rule;
    step.rule_span = tok.span;
    p.advance();

    if (p.peek().kind == TokenKind::LBracket) {
      const Token& open = p.advance();
      if (!takes_annotation(step.rule))
        return Unexpected{ParseError{open.span, std::string(to_string(step.rule)) + " takes no annotation"}};
      std::vector<Term> terms;
      for (;;) {
        if (p.peek().kind == TokenKind::End) return Unexpected{ParseError{open.span, "unterminated annotation"}};
        const Token& at = p.peek();
        auto t = p.term(true);
        if (!t) return Unexpected{std::move(t).error()};
        if (takes_witness(step.rule) && !t->is_constant())
          return Unexpected{ParseError{SourceSpan::cover(at.span, p.previous().span),
                                       std::string(to_string(step.rule)) + " needs a constant as witness"}};
        terms.push_back(std::move(*t));
        if (p.peek().kind == TokenKind::Comma) {
          p.advance();
          continue;
        }
        if (p.peek().kind == TokenKind::RBracket) break;
        if (p.peek().kind == TokenKind::End) return Unexpected{ParseError{open.span, "unterminated annotation"}};
        return Unexpected{p.error_at(p.peek(), "expected ',' or ']' but found " + describe(p.peek()))};
      }
      const Token& close = p.advance();
      step.annotations = std::move(terms);
      step.annotation_span = {open.span.start, close.span.end};
    }

    // Blocks: formulas until the next rule name, '+' between blocks.
    StatedBlock block;
    for (;;) {
      if (p.at_formula_start()) {
        const std::size_t start = p.peek().span.start;
        auto f = p.formula();
        if (!f) return Unexpected{std::move(f).error()};
        block.formulas.push_back(std::move(*f));
        block.spans.push_back({start, p.previous().span.end});
        continue;
      }
      if (p.peek().kind == TokenKind::Plus) {
        const Token& plus = p.peek();
        if (block.formulas.empty()) return Unexpected{p.error_at(plus, "dangling '+': no sequent before it")};
        step.blocks.push_back(std::move(block));
        block = StatedBlock{};
        block.separator = plus.span;
        p.advance();
        if (!p.at_formula_start()) return Unexpected{ParseError{plus.span, "dangling '+': no sequent after it"}};
        continue;
      }
      break;
    }
    if (!block.formulas.empty()) step.blocks.push_back(std::move(block));
    step.span = {step.rule_span.start, p.previous().span.end};

    const Token& next = p.peek();
    if (next.kind != TokenKind::End && !(next.kind == TokenKind::Ident && rule_from_string(next.text))) {
      if (next.kind == TokenKind::Ident && next.text == "Var")
        return Unexpected{p.error_at(next, "reserved word 'Var' cannot be used where a formula is expected")};
      if (next.kind == TokenKind::LBracket)
        return Unexpected{p.error_at(next, "annotations must directly follow the rule name")};
      return Unexpected{p.error_at(next, "unexpected " + describe(next))};
    }
    doc.steps.push_back(std::move(step));
  }
  if (doc.steps.empty())
    return Unexpected{p.error_at(p.peek(), "expected at least one proof step after the goal formula")};
  return doc;
}

// ---------------------------------------------------------------------------
// Annotation inference

struct NoMatch {
  std::string reason;
};

namespace detail {

// Matches subt(?, pattern) against `stated`, collecting the constraint on the
// substituted term.
class SubstMatcher {
 public:
  bool formula(const Formula& p, const Formula& s, std::size_t depth) {
    if (p.op != s.op) return false;
    if (p.is_atom()) {
      if (p.name != s.name || p.args.size() != s.args.size()) return false;
      for (std::size_t i = 0; i < p.args.size(); ++i)
        if (!term(p.args[i], s.args[i], depth)) return false;
      return true;
    }
    const std::size_t inner = (p.is(Connective::Uni) || p.is(Connective::Exi)) ? depth + 1 : depth;
    for (std::size_t i = 0; i < p.sub.size(); ++i)
      if (!formula(p.sub[i], s.sub[i], inner)) return false;
    return true;
  }

  const std::optional<Term>& solution() const { return solution_; }

 private:
  bool term(const Term& p, const Term& s, std::size_t depth) {
    if (p.is_var()) {
      if (p.index == depth) {
        auto t = unlift(s, depth);
        if (!t) return false;
        if (solution_) return *solution_ == *t;
        solution_ = std::move(t);
        return true;
      }
      const std::size_t expect = p.index > depth ? p.index - 1 : p.index;
      return s.is_var() && s.index == expect;
    }
    if (s.is_var() || p.name != s.name || p.args.size() != s.args.size()) return false;
    for (std::size_t i = 0; i < p.args.size(); ++i)
      if (!term(p.args[i], s.args[i], depth)) return false;
    return true;
  }

  // Inverse of lift_term(., depth); fails if a variable is bound locally.
  static std::optional<Term> unlift(const Term& s, std::size_t depth) {
    if (s.is_var()) {
      if (s.index < depth) return std::nullopt;
      return Term::var(s.index - depth);
    }
    Term out = Term::fun(s.name);
    for (const Term& a : s.args) {
      auto u = unlift(a, depth);
      if (!u) return std::nullopt;
      out.args.push_back(std::move(*u));
    }
    return out;
  }

  std::optional<Term> solution_;
};

}  // namespace detail

/// Recovers the instantiation term (Exi_R, Uni_L) or witness constant
/// (Exi_L, Uni_R) that turns `current` into the `stated` premise.
inline Expected<Term, NoMatch> infer_annotation(RuleName rule, const Sequent& current, const Sequent& stated) {
  if (!takes_annotation(rule)) return Unexpected{NoMatch{std::string(to_string(rule)) + " takes no annotation"}};
  const Formula* q = principal_formula(rule, current);
  if (!q) return Unexpected{NoMatch{std::string(to_string(rule)) + " does not apply to " + render(current)}};
  if (stated.empty()) return Unexpected{NoMatch{"no stated premise to match"}};
  const bool negated = rule == RuleName::Uni_L || rule == RuleName::Exi_L;
  const Formula* head = &stated.front();
  if (negated) {
    if (!head->is(Connective::Neg)) return Unexpected{NoMatch{"stated premise should start with a negation"}};
    head = &head->body();
  }
  detail::SubstMatcher m;
  if (!m.formula(q->body(), *head, 0))
    return Unexpected{NoMatch{"stated premise " + render(stated.front()) + " is not an instance of the quantified formula"}};
  if (!m.solution()) return Term::fun(std::string(kDummyConstant));
  if (takes_witness(rule) && !m.solution()->is_constant())
    return Unexpected{NoMatch{"witness must be a constant, found " + render(*m.solution())}};
  return *m.solution();
}

// ---------------------------------------------------------------------------
// Checking

struct StepResult {
  std::vector<Sequent> frontier;
  std::vector<std::size_t> transformed;  // positions in the incoming frontier
  std::vector<Term> annotations;         // one per transformed goal, if the rule takes any
  bool inferred = false;
};

struct StepFailure {
  std::string message;
  SourceSpan span;
  std::optional<std::size_t> position;
  std::optional<Sequent> expected;
  std::optional<Sequent> stated;
};

namespace detail {

inline RuleApplication make_application(RuleName rule, const Term* annotation, const Sequent* target) {
  RuleApplication app;
  app.rule = rule;
  if (annotation) {
    if (takes_term(rule)) app.instantiation = *annotation;
    if (takes_witness(rule)) app.witness = annotation->name;
  }
  if (target) app.target = *target;
  return app;
}

inline std::string goal_word(std::size_t n) { return n == 1 ? "sequent" : "sequents"; }

}  // namespace detail

/// Applies the step's rule to every open goal it fits, passing the rest
/// through unchanged, then compares the result with the stated sequents.
inline Expected<StepResult, StepFailure> step_frontier(const std::vector<Sequent>& frontier, const ProofStep& step) {
  const RuleName rule = step.rule;
  const std::string name(to_string(rule));
  const std::vector<Sequent> stated = step.stated_frontier();
  auto fail = [&](std::string msg, SourceSpan span) { return Unexpected{StepFailure{std::move(msg), span, {}, {}, {}}}; };

  if (frontier.empty()) return fail("no open goals remain for " + name, step.rule_span);

  StepResult result;
  std::vector<std::optional<std::string>> reasons(frontier.size());

  auto take = [&](std::size_t i, RuleResult r) {
    if (r) {
      result.transformed.push_back(i);
      for (Sequent& s : *r) result.frontier.push_back(std::move(s));
    } else {
      reasons[i] = r.error().reason;
      result.frontier.push_back(frontier[i]);
    }
  };

  if (takes_target(rule)) {
    if (stated.size() != frontier.size())
      return fail(name + " needs one stated " + "sequent per open goal: " + std::to_string(frontier.size()) +
                      " open, " + std::to_string(stated.size()) + " stated",
                  step.blocks.empty() ? step.rule_span : step.span);
    for (std::size_t i = 0; i < frontier.size(); ++i)
      take(i, apply_rule(detail::make_application(rule, nullptr, &stated[i]), frontier[i]));
  } else if (takes_annotation(rule)) {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < frontier.size(); ++i)
      if (principal_formula(rule, frontier[i])) candidates.push_back(i);
    if (candidates.empty()) {
      const std::string why = apply_rule(detail::make_application(rule, nullptr, nullptr), frontier.front()).error().reason;
      return fail(name + " applies to no open goal (" + why + ")", step.rule_span);
    }
    std::vector<Term> chosen;
    if (step.annotations) {
      const auto& given = *step.annotations;
      if (given.size() == 1) {
        chosen.assign(candidates.size(), given.front());
      } else if (given.size() == candidates.size()) {
        chosen = given;
      } else {
        return fail(name + " has " + std::to_string(given.size()) + " annotations but applies to " +
                        std::to_string(candidates.size()) + " open " + detail::goal_word(candidates.size()),
                    step.annotation_span);
      }
    } else {
      if (stated.size() != frontier.size())
        return fail("annotation for " + name + " cannot be inferred: " + std::to_string(frontier.size()) +
                        " open goals but " + std::to_string(stated.size()) + " stated " +
                        detail::goal_word(stated.size()),
                    step.blocks.empty() ? step.rule_span : step.span);
      result.inferred = true;
      std::vector<std::size_t> kept;
      for (std::size_t i : candidates) {
        auto t = infer_annotation(rule, frontier[i], stated[i]);
        if (t) {
          chosen.push_back(std::move(*t));
          kept.push_back(i);
        } else if (stated[i] != frontier[i]) {
          return Unexpected{StepFailure{"annotation required but not inferable: " + t.error().reason,
                                        step.blocks[i].span(), i, std::nullopt, stated[i]}};
        }
      }
      candidates = std::move(kept);
      if (candidates.empty()) return fail(name + " applies to no open goal", step.rule_span);
    }
    std::size_t next = 0;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      if (next < candidates.size() && candidates[next] == i) {
        const Term& a = chosen[next++];
        RuleResult r = apply_rule(detail::make_application(rule, &a, nullptr), frontier[i]);
        if (r) result.annotations.push_back(a);
        take(i, std::move(r));
      } else {
        take(i, RuleResult{Unexpected{NotApplicable{"head does not match"}}});
      }
    }
  } else {
    for (std::size_t i = 0; i < frontier.size(); ++i)
      take(i, apply_rule(detail::make_application(rule, nullptr, nullptr), frontier[i]));
  }

  if (result.transformed.empty()) {
    std::string why = reasons.front().value_or("");
    std::string msg = name + " applies to no open goal";
    if (frontier.size() == 1) msg += " (" + why + "); the open goal is " + render(frontier.front());
    else msg += " (first goal: " + why + ")";
    return fail(std::move(msg), step.rule_span);
  }

  // Positional comparison against the stated sequents.
  const std::vector<Sequent>& computed = result.frontier;
  const std::size_t common = std::min(computed.size(), stated.size());
  for (std::size_t i = 0; i < common; ++i) {
    if (computed[i] == stated[i]) continue;
    std::string msg = "sequent " + std::to_string(i + 1) + " after " + name + " does not match; expected " +
                      render(computed[i]);
    // Report why the rule left this goal untouched, when it did.
    if (computed.size() == frontier.size() && reasons[i]) msg += " (" + *reasons[i] + ")";
    return Unexpected{StepFailure{std::move(msg), step.blocks[i].span(), i, computed[i], stated[i]}};
  }
  if (computed.size() > stated.size()) {
    std::string msg = name + " leaves " + std::to_string(computed.size()) + " open " +
                      detail::goal_word(computed.size()) + " but " + std::to_string(stated.size()) +
                      " " + (stated.size() == 1 ? "is" : "are") + " stated; missing " + render(computed[stated.size()]);
    return Unexpected{StepFailure{std::move(msg), step.span, stated.size(), computed[stated.size()], std::nullopt}};
  }
  if (stated.size() > computed.size()) {
    std::string msg = name + " leaves " + std::to_string(computed.size()) + " open " +
                      detail::goal_word(computed.size()) + " but " + std::to_string(stated.size()) + " are stated";
    return Unexpected{StepFailure{std::move(msg), step.blocks[computed.size()].span(), computed.size(), std::nullopt,
                                  stated[computed.size()]}};
  }
  return result;
}

enum class Verdict { Verified, Warning, ParseError };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Verified: return "verified";
    case Verdict::Warning: return "warning";
    case Verdict::ParseError: return "parse-error";
  }
  return "";
}

struct Diagnostic {
  SourceSpan span;
  std::string message;
};

struct ResolvedStep {
  RuleName rule = RuleName::Basic;
  SourceSpan span;
  std::vector<Sequent> frontier;         // open goals after the step
  std::vector<std::size_t> transformed;  // positions the rule acted on
  std::vector<Term> annotations;
  bool inferred = false;
};

struct CheckReport {
  Verdict verdict = Verdict::ParseError;
  std::vector<Diagnostic> diagnostics;
  std::vector<ResolvedStep> steps;
  std::string symbolic_goal;
  std::string parenthesized_goal;
};

inline CheckReport check_document(const ProofDocument& doc, const Deadline& deadline = Deadline::never()) {
  CheckReport report;
  report.symbolic_goal = render(doc.goal, RenderMode::Symbolic);
  report.parenthesized_goal = render(doc.goal, RenderMode::Parenthesized);

  std::vector<Sequent> frontier{Sequent{doc.goal}};
  for (const ProofStep& step : doc.steps) {
    deadline.check();
    auto r = step_frontier(frontier, step);
    if (!r) {
      report.verdict = Verdict::Warning;
      report.diagnostics.push_back({r.error().span, r.error().message});
      return report;
    }
    frontier = r->frontier;
    report.steps.push_back(ResolvedStep{step.rule, step.span, std::move(r->frontier), std::move(r->transformed),
                                        std::move(r->annotations), r->inferred});
  }
  if (!frontier.empty()) {
    report.verdict = Verdict::Warning;
    report.diagnostics.push_back({doc.steps.back().span, "unproved goals remain: " + std::to_string(frontier.size()) +
                                                             " open " + detail::goal_word(frontier.size())});
    return report;
  }
  report.verdict = Verdict::Verified;
  return report;
}

// ---------------------------------------------------------------------------
// Promoted layout

namespace detail {

inline std::string annotation_text(const std::vector<Term>& terms) {
  if (terms.empty()) return {};
  const bool uniform = std::all_of(terms.begin(), terms.end(), [&](const Term& t) { return t == terms.front(); });
  std::string out = " [";
  const std::size_t n = uniform ? 1 : terms.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += ", ";
    out += render(terms[i]);
  }
  out += ']';
  return out;
}

}  // namespace detail

/// Canonical layout: goal, blank line, then each rule at column 0 with its
/// stated sequents indented by two spaces and `+` between blocks. Inferred
/// annotations are written out. Comments are kept on their own lines ahead
/// of the item that followed them.
inline std::string format_promoted(const ProofDocument& doc, const CheckReport& report) {
  std::string out;
  std::size_t next_comment = 0;
  auto flush_comments = [&](std::size_t before, std::string_view indent) {
    while (next_comment < doc.comments.size() && doc.comments[next_comment].span.start < before) {
      out += indent;
      out += doc.comments[next_comment++].text;
      out += '\n';
    }
  };

  flush_comments(doc.goal_span.start, "");
  out += render(doc.goal);
  out += "\n\n";
  for (std::size_t i = 0; i < doc.steps.size(); ++i) {
    const ProofStep& step = doc.steps[i];
    flush_comments(step.rule_span.start, "");
    out += to_string(step.rule);
    if (step.annotations) {
      out += detail::annotation_text(*step.annotations);
    } else if (i < report.steps.size() && report.steps[i].inferred) {
      out += detail::annotation_text(report.steps[i].annotations);
    }
    out += '\n';
    for (const StatedBlock& block : step.blocks) {
      if (block.separator) {
        flush_comments(block.separator->start, "");
        out += "+\n";
      }
      for (std::size_t k = 0; k < block.formulas.size(); ++k) {
        flush_comments(block.spans[k].start, "  ");
        out += "  ";
        out += render(block.formulas[k]);
        out += '\n';
      }
    }
  }
  flush_comments(static_cast<std::size_t>(-1), "");
  return out;
}

}  // namespace minicalc
