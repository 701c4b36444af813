#pragma once

// Canonical JSON projection of an analysis. Key order is fixed.

#include <string_view>

#include <json.hpp>

#include "minicalc/analysis.hpp"

namespace minicalc {

using Json = nlohmann::ordered_json;

inline Json span_json(const SourceText& text, SourceSpan span) {
  auto [line, col] = text.line_col(span.start);
  Json j;
  j["start"] = text.char_offset(span.start);
  j["end"] = text.char_offset(span.end);
  j["line"] = line;
  j["col"] = col;
  return j;
}

inline Json countermodel_json(const Countermodel& cm) {
  const Interpretation& I = cm.interpretation;
  Json j;
  j["domainSize"] = I.size;
  Json funcs = Json::array();
  for (const auto& [sym, table] : I.functions)
    funcs.push_back(Json{{"name", sym.name}, {"arity", sym.arity}, {"table", table}});
  Json preds = Json::array();
  for (const auto& [sym, table] : I.predicates) {
    Json t = Json::array();
    for (bool b : table) t.push_back(b);
    preds.push_back(Json{{"name", sym.name}, {"arity", sym.arity}, {"table", t}});
  }
  j["functions"] = std::move(funcs);
  j["predicates"] = std::move(preds);
  return j;
}

inline Json report_json(const Analysis& a, std::string_view source) {
  const SourceText text(source);
  Json j;
  j["verdict"] = std::string(to_string(a.report.verdict));

  Json diags = Json::array();
  for (const Diagnostic& d : a.report.diagnostics) {
    Json dj = span_json(text, d.span);
    dj["message"] = d.message;
    diags.push_back(std::move(dj));
  }
  j["diagnostics"] = std::move(diags);

  if (a.document) {
    j["renderedGoal"] = Json{{"symbolic", a.report.symbolic_goal}, {"parenthesized", a.report.parenthesized_goal}};
  } else {
    j["renderedGoal"] = nullptr;
  }
  j["promotedLayout"] = a.promoted_layout ? Json(*a.promoted_layout) : Json(nullptr);
  j["isabelleTheory"] = a.isabelle_theory ? Json(*a.isabelle_theory) : Json(nullptr);

  Json steps = Json::array();
  for (const ResolvedStep& s : a.report.steps) {
    Json sj;
    sj["rule"] = std::string(to_string(s.rule));
    sj["span"] = span_json(text, s.span);
    Json ann = Json::array();
    for (const Term& t : s.annotations) ann.push_back(render(t));
    sj["annotations"] = std::move(ann);
    sj["inferred"] = s.inferred;
    Json frontier = Json::array();
    for (const Sequent& seq : s.frontier) {
      Json sq = Json::array();
      for (const Formula& f : seq) sq.push_back(render(f));
      frontier.push_back(std::move(sq));
    }
    sj["frontier"] = std::move(frontier);
    steps.push_back(std::move(sj));
  }
  j["steps"] = std::move(steps);
  j["countermodel"] = a.countermodel ? countermodel_json(*a.countermodel) : Json(nullptr);
  return j;
}

}  // namespace minicalc
