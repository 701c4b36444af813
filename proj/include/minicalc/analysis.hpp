#pragma once

// One-shot pipeline from source text to everything the front ends display.

#include <optional>
#include <string>
#include <string_view>

#include "minicalc/export.hpp"
#include "minicalc/script.hpp"
#include "minicalc/semantics.hpp"

namespace minicalc {

struct AnalysisOptions {
  ExportOptions export_options;
  // Countermodel search for goals that did not verify.
  Element countermodel_domain = 2;
  std::uint64_t model_budget = 1u << 16;
  Deadline deadline;
};

struct Analysis {
  std::optional<ProofDocument> document;
  CheckReport report;
  std::optional<std::string> promoted_layout;
  std::optional<std::string> isabelle_theory;
  std::optional<Countermodel> countermodel;
};

inline Analysis analyze(std::string_view source, const AnalysisOptions& options = {}) {
  Analysis a;
  auto doc = parse_document(source);
  if (!doc) {
    a.report.verdict = Verdict::ParseError;
    a.report.diagnostics.push_back({doc.error().span, doc.error().message});
    return a;
  }
  a.document = std::move(*doc);
  a.report = check_document(*a.document, options.deadline);
  a.promoted_layout = format_promoted(*a.document, a.report);
  if (a.report.verdict == Verdict::Verified) {
    auto thy = export_isabelle(*a.document, a.report, options.export_options);
    if (thy) a.isabelle_theory = std::move(*thy);
  } else if (options.countermodel_domain > 0 && is_closed(a.document->goal)) {
    auto v = is_valid_upto(Sequent{a.document->goal}, options.countermodel_domain, options.model_budget,
                           options.deadline);
    if (v && *v) a.countermodel = std::move(**v);
  }
  return a;
}

}  // namespace minicalc
