#include <gtest/gtest.h>

#include "minicalc/analysis.hpp"
#include "minicalc/export.hpp"
#include "minicalc/fixtures.hpp"
#include "support/files.hpp"

namespace minicalc {
namespace {

struct Checked {
  ProofDocument doc;
  CheckReport report;
};

Checked checked(std::string_view src) {
  auto d = parse_document(src);
  EXPECT_TRUE(d.has_value());
  Checked c{*d, {}};
  c.report = check_document(c.doc);
  return c;
}

std::string exported(std::string_view src, ExportOptions opts = {}) {
  const Checked c = checked(src);
  auto thy = export_isabelle(c.doc, c.report, opts);
  EXPECT_TRUE(thy.has_value()) << (thy ? "" : thy.error().message);
  return thy ? *thy : std::string{};
}

TEST(Export, FixturesMatchGolden) {
  for (const Fixture& fx : fixtures())
    EXPECT_EQ(exported(fx.source), testing::read_text(testing::golden_path(std::string(fx.name) + ".thy"))) << fx.name;
}

TEST(Export, Deterministic) {
  for (const Fixture& fx : fixtures()) EXPECT_EQ(exported(fx.source), exported(fx.source)) << fx.name;
}

TEST(Export, CommentBlockIsThePromotedLayout) {
  for (const Fixture& fx : fixtures()) {
    const Checked c = checked(fx.source);
    const std::string thy = *export_isabelle(c.doc, c.report);
    const std::size_t open = thy.find("(*\n");
    const std::size_t close = thy.find("*)\n", open);
    ASSERT_NE(open, std::string::npos);
    ASSERT_NE(close, std::string::npos);
    EXPECT_EQ(thy.substr(open + 3, close - open - 3), format_promoted(c.doc, c.report)) << fx.name;
  }
}

TEST(Export, OneApplyLinePerStepInOrder) {
  for (const Fixture& fx : fixtures()) {
    const Checked c = checked(fx.source);
    const std::string thy = *export_isabelle(c.doc, c.report);
    std::vector<std::string> applied;
    for (std::size_t pos = 0; (pos = thy.find("\n  apply (rule ", pos)) != std::string::npos;) {
      pos += 15;
      const std::size_t end = thy.find_first_of("[,)", pos);
      applied.push_back(thy.substr(pos, end - pos));
    }
    ASSERT_EQ(applied.size(), c.doc.steps.size()) << fx.name;
    for (std::size_t i = 0; i < applied.size(); ++i) EXPECT_EQ(applied[i], to_string(c.doc.steps[i].rule));
  }
}

TEST(Export, ImpPPShape) {
  const std::string thy = exported(find_fixture("imp_p_p")->source);
  EXPECT_EQ(thy.rfind("theory Result imports MiniCalc begin\n", 0), 0u);
  EXPECT_NE(thy.find("lemma ‹⊩ [Imp (Pre ''p'' []) (Pre ''p'' [])]›\n"), std::string::npos);
  EXPECT_NE(thy.find("proposition ‹p ⟶ p› by metis"), std::string::npos);
}

TEST(Export, RefusesUnverified) {
  const Checked c = checked("Imp p p Imp_R Neg p p Basic");
  auto thy = export_isabelle(c.doc, c.report);
  ASSERT_FALSE(thy.has_value());
  EXPECT_NE(thy.error().message.find("only verified"), std::string::npos);
}

TEST(Export, RejectsBadTheoryName) {
  const Checked c = checked(find_fixture("imp_p_p")->source);
  for (const char* name : {"", "1x", "a-b", "x y"}) {
    ExportOptions opts;
    opts.theory_name = name;
    EXPECT_FALSE(export_isabelle(c.doc, c.report, opts).has_value()) << name;
  }
}

TEST(Export, CommentsCannotCloseTheBlock) {
  const std::string thy = exported("# tricky *) and (* here\nImp p p Imp_R Neg p p Ext p Neg p Basic");
  EXPECT_EQ(thy.find("tricky *)"), std::string::npos);
  EXPECT_NE(thy.find("tricky * ) and ( * here"), std::string::npos);
}

TEST(HolNotation, NamedBinders) {
  EXPECT_EQ(hol_notation(*parse_formula("Exi (Imp p[Var 0] (Uni p[Var 0]))")), "∃x. p x ⟶ (∀y. p y)");
  EXPECT_EQ(hol_notation(*parse_formula("Uni (Exi r[Var 1, f[Var 0]])")), "∀x. ∃y. r x (f y)");
  EXPECT_EQ(hol_notation(*parse_formula("Uni x[Var 0]")), "∀y. x y");
}

TEST(IsabelleTerms, Datatype) {
  EXPECT_EQ(isabelle_term(*parse_term("f[a, Var 1]")), "Fun ''f'' [Fun ''a'' [], Var 1]");
  EXPECT_EQ(isabelle_formula(*parse_formula("Neg (Uni p[Var 0])")), "Neg (Uni (Pre ''p'' [Var 0]))");
}

}  // namespace
}  // namespace minicalc
