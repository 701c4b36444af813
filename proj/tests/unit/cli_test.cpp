#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "minicalc/cli.hpp"
#include "support/files.hpp"

namespace minicalc {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("minicalc_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, std::string_view content) {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p.string();
  }
  std::string data(const std::string& name) { return write(name, testing::data_file(name)); }

  fs::path dir_;
};

const char* const kLayout = "Imp p p\n\nImp_R\n  Neg p\n  p\nExt\n  p\n  Neg p\nBasic\n";

TEST_F(Cli, CheckFixturesVerify) {
  for (const Fixture& fx : fixtures()) {
    const std::string path = write(std::string(fx.name) + ".mc", fx.source);
    const CliRun r = run({"check", path});
    EXPECT_EQ(r.code, exit_code::kOk) << fx.name << r.out;
    EXPECT_EQ(r.out, path + ": verified\n");
  }
}

TEST_F(Cli, CheckMissingExtWarnsAtBasic) {
  const std::string path = data("missing_ext.mc");
  const CliRun r = run({"check", path});
  EXPECT_EQ(r.code, exit_code::kWarning);
  const std::size_t col = testing::data_file("missing_ext.mc").find("Basic") + 1;
  EXPECT_EQ(r.out.rfind(path + ":1:" + std::to_string(col) + ": warning: Basic applies to no open goal", 0), 0u) << r.out;
  EXPECT_NE(r.out.find(path + ": warning\n"), std::string::npos);
}

TEST_F(Cli, CheckParseError) {
  const std::string path = write("bad.mc", "Imp p p\nBogus_R\n");
  const CliRun r = run({"check", path});
  EXPECT_EQ(r.code, exit_code::kParseError);
  EXPECT_EQ(r.out, path + ":2:1: error: unknown rule name 'Bogus_R'\n" + path + ": parse error\n");
}

TEST_F(Cli, CheckJsonIsStable) {
  const std::string path = data("missing_ext.mc");
  const CliRun a = run({"check", "--json", path});
  const CliRun b = run({"check", path, "--json"});
  EXPECT_EQ(a.code, exit_code::kWarning);
  EXPECT_EQ(a.out, b.out);
  auto j = nlohmann::json::parse(a.out);
  EXPECT_EQ(j["verdict"], "warning");
}

TEST_F(Cli, FmtOneLine) {
  const std::string path = data("imp_p_p_oneline.mc");
  const CliRun r = run({"fmt", path});
  EXPECT_EQ(r.code, exit_code::kOk);
  EXPECT_EQ(r.out, kLayout);
  EXPECT_EQ(run({"fmt", "--write", path}).code, exit_code::kOk);
  EXPECT_EQ(testing::read_text(path), kLayout);
}

TEST_F(Cli, FmtRefusesUnparseable) {
  const std::string path = write("bad.mc", "Imp p p Imp_R Neg");
  EXPECT_EQ(run({"fmt", "--write", path}).code, exit_code::kParseError);
  EXPECT_EQ(testing::read_text(path), "Imp p p Imp_R Neg");
}

TEST_F(Cli, Export) {
  const std::string src = write("imp.mc", find_fixture("imp_p_p")->source);
  const CliRun r = run({"export", src, "--theory", "Result"});
  EXPECT_EQ(r.code, exit_code::kOk);
  EXPECT_EQ(r.out, testing::read_text(testing::golden_path("imp_p_p.thy")));
  const CliRun named = run({"export", src, "--theory", "Imp_p_p", "--imports", "Calc"});
  EXPECT_EQ(named.out.substr(0, named.out.find('\n')), "theory Imp_p_p imports Calc begin");

  const std::string out = (dir_ / "out.thy").string();
  EXPECT_EQ(run({"export", src, "--theory", "Result", "-o", out}).code, exit_code::kOk);
  EXPECT_EQ(testing::read_text(out), r.out);

  EXPECT_EQ(run({"export", data("missing_ext.mc"), "--theory", "T"}).code, exit_code::kWarning);
  EXPECT_EQ(run({"export", src, "--theory", "1bad"}).code, exit_code::kUsage);
  EXPECT_EQ(run({"export", src}).code, exit_code::kUsage);
  EXPECT_EQ(run({"export", src, "--theory", "T", "-o", (dir_ / "no" / "such" / "x.thy").string()}).code,
            exit_code::kCantCreate);
}

TEST_F(Cli, Validate) {
  const CliRun ok = run({"validate", write("d.mc", find_fixture("drinker")->source), "--max-domain", "3"});
  EXPECT_EQ(ok.code, exit_code::kOk);
  EXPECT_EQ(ok.out, "valid up to 3\n");

  const CliRun bare = run({"validate", write("f.mc", "Imp (Exi P[Var 0]) (Uni P[Var 0])")});
  EXPECT_EQ(bare.code, exit_code::kWarning);
  EXPECT_EQ(bare.out, "countermodel (domain size 2):\n  P(0) = false\n  P(1) = true\n");

  EXPECT_EQ(run({"validate", write("g.mc", "Imp p")}).code, exit_code::kParseError);
  EXPECT_EQ(run({"validate", write("h.mc", "P[Var 0]")}).code, exit_code::kDataError);
  EXPECT_EQ(run({"validate", write("i.mc", "p"), "--max-domain", "0"}).code, exit_code::kUsage);
}

TEST_F(Cli, Examples) {
  const CliRun list = run({"examples"});
  EXPECT_EQ(list.code, exit_code::kOk);
  for (const Fixture& fx : fixtures())
    EXPECT_NE(list.out.find(std::string(fx.name) + "\t" + std::string(fx.title) + "\n"), std::string::npos);
  const CliRun one = run({"examples", "--show", "imp_p_p"});
  EXPECT_EQ(one.out, kLayout);
  EXPECT_EQ(run({"examples", "--show", "nope"}).code, exit_code::kUsage);
}

TEST_F(Cli, UsageAndInputErrors) {
  EXPECT_EQ(run({}).code, exit_code::kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, exit_code::kUsage);
  EXPECT_EQ(run({"check", "--bogus", "x.mc"}).code, exit_code::kUsage);
  EXPECT_EQ(run({"check"}).code, exit_code::kUsage);
  EXPECT_EQ(run({"check", (dir_ / "missing.mc").string()}).code, exit_code::kNoInput);
  EXPECT_EQ(run({"fmt", dir_.string()}).code, exit_code::kNoInput);
  EXPECT_EQ(run({"serve", "--bind", "nohost"}).code, exit_code::kUsage);
  EXPECT_EQ(run({"--help"}).code, exit_code::kOk);
}

TEST_F(Cli, ExitCodesOnMutatedFixtures) {
  for (const Fixture& fx : fixtures()) {
    const std::string src(fx.source);
    auto doc = parse_document(src);
    ASSERT_TRUE(doc.has_value());
    const ProofStep& last = doc->steps.back();
    const std::string no_basic = src.substr(0, last.span.start) + src.substr(last.span.end);
    EXPECT_EQ(run({"check", write("m.mc", no_basic)}).code, exit_code::kWarning) << fx.name;
    const std::string garbled = src + " +";
    EXPECT_EQ(run({"check", write("m.mc", garbled)}).code, exit_code::kParseError) << fx.name;
  }
}

}  // namespace
}  // namespace minicalc
