#pragma once

// Command-line front end. `run_cli` is separate from main() so the exit
// codes and output can be tested in-process.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "minicalc/analysis.hpp"
#include "minicalc/fixtures.hpp"
#include "minicalc/report_json.hpp"
#include "minicalc/service.hpp"

namespace minicalc {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kWarning = 1;
inline constexpr int kParseError = 2;
inline constexpr int kUsage = 64;
inline constexpr int kDataError = 65;
inline constexpr int kNoInput = 66;
inline constexpr int kCantCreate = 73;
}  // namespace exit_code

namespace detail {

inline std::optional<std::string> read_file(const std::string& path) {
  std::error_code ec;
  if (std::filesystem::is_directory(path, ec)) return std::nullopt;
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return ss.str();
}

inline void print_diagnostics(std::ostream& os, const std::string& path, std::string_view source,
                              const CheckReport& report) {
  const SourceText text(source);
  const char* level = report.verdict == Verdict::ParseError ? "error" : "warning";
  for (const Diagnostic& d : report.diagnostics) {
    auto [line, col] = text.line_col(d.span.start);
    os << path << ':' << line << ':' << col << ": " << level << ": " << d.message << '\n';
  }
}

inline int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Verified: return exit_code::kOk;
    case Verdict::Warning: return exit_code::kWarning;
    case Verdict::ParseError: return exit_code::kParseError;
  }
  return exit_code::kWarning;
}

inline void print_countermodel(std::ostream& os, const Countermodel& cm) {
  const Interpretation& I = cm.interpretation;
  os << "countermodel (domain size " << I.size << "):\n";
  auto tuple = [&](std::size_t idx, std::size_t arity) {
    std::vector<Element> args(arity);
    for (std::size_t k = arity; k-- > 0;) {
      args[k] = static_cast<Element>(idx % I.size);
      idx /= I.size;
    }
    std::string out;
    for (std::size_t k = 0; k < arity; ++k) out += (k ? ", " : "(") + std::to_string(args[k]);
    return arity ? out + ")" : out;
  };
  for (const auto& [sym, table] : I.functions)
    for (std::size_t i = 0; i < table.size(); ++i)
      os << "  " << sym.name << tuple(i, sym.arity) << " = " << table[i] << '\n';
  for (const auto& [sym, table] : I.predicates)
    for (std::size_t i = 0; i < table.size(); ++i)
      os << "  " << sym.name << tuple(i, sym.arity) << " = " << (table[i] ? "true" : "false") << '\n';
}

inline bool parse_bind(const std::string& bind, std::string& host, int& port) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos) return false;
  host = bind.substr(0, colon);
  try {
    std::size_t used = 0;
    port = std::stoi(bind.substr(colon + 1), &used);
    return used == bind.size() - colon - 1 && port >= 0 && port < 65536;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"MiniCalc proof checker for a minimal one-sided sequent calculus", "minicalc"};
  app.require_subcommand(1);

  std::string file;
  bool json = false;
  bool write = false;
  std::string theory;
  std::string imports = "MiniCalc";
  std::string output;
  unsigned max_domain = 2;
  std::string bind = "127.0.0.1:8080";
  std::string static_dir;

  auto* check = app.add_subcommand("check", "Check a proof and report the verdict");
  check->add_option("file", file, "Proof script")->required();
  check->add_flag("--json", json, "Print the JSON check report");

  auto* fmt = app.add_subcommand("fmt", "Print the proof in the promoted layout");
  fmt->add_option("file", file, "Proof script")->required();
  fmt->add_flag("--write", write, "Rewrite the file in place");

  auto* exp = app.add_subcommand("export", "Write the verified proof as an Isabelle theory");
  exp->add_option("file", file, "Proof script")->required();
  exp->add_option("--theory", theory, "Theory name")->required();
  exp->add_option("--imports", imports, "Theory providing the calculus");
  exp->add_option("-o,--output", output, "Output file (default: standard output)");

  auto* validate = app.add_subcommand("validate", "Search finite models for a countermodel of the goal");
  validate->add_option("file", file, "Proof script or a single formula")->required();
  validate->add_option("--max-domain", max_domain, "Largest domain size to enumerate")
      ->check(CLI::Range(1u, 8u));

  auto* examples = app.add_subcommand("examples", "List the bundled example proofs");
  std::string show;
  examples->add_option("--show", show, "Print the source of one example");

  auto* serve = app.add_subcommand("serve", "Run the local JSON check service");
  serve->add_option("--bind", bind, "host:port to listen on");
  serve->add_option("--static", static_dir, "Directory of static assets to serve at /");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return exit_code::kUsage;
  }

  if (*examples) {
    if (!show.empty()) {
      const Fixture* f = find_fixture(show);
      if (!f) {
        err << "unknown example '" << show << "'\n";
        return exit_code::kUsage;
      }
      out << f->source;
      return exit_code::kOk;
    }
    for (const Fixture& f : fixtures()) out << f.name << "\t" << f.title << '\n';
    return exit_code::kOk;
  }

  if (*serve) {
    std::string host;
    int port = 0;
    if (!detail::parse_bind(bind, host, port)) {
      err << "invalid --bind '" << bind << "', expected host:port\n";
      return exit_code::kUsage;
    }
    httplib::Server server;
    ServiceOptions options = service_options_from_env();
    install_routes(server, options);
    if (!static_dir.empty() && !server.set_mount_point("/", static_dir)) {
      err << "cannot serve static assets from " << static_dir << '\n';
      return exit_code::kNoInput;
    }
    out << "listening on " << host << ':' << port << std::endl;
    if (!server.listen(host, port)) {
      err << "cannot listen on " << bind << '\n';
      return exit_code::kCantCreate;
    }
    return exit_code::kOk;
  }

  const auto source = detail::read_file(file);
  if (!source) {
    err << "cannot read " << file << '\n';
    return exit_code::kNoInput;
  }

  if (*validate) {
    std::optional<Formula> goal;
    if (auto doc = parse_document(*source)) {
      goal = doc->goal;
    } else if (auto f = parse_formula(*source)) {
      goal = std::move(*f);
    } else {
      const SourceText text(*source);
      auto [line, col] = text.line_col(doc.error().span.start);
      err << file << ':' << line << ':' << col << ": error: " << doc.error().message << '\n';
      return exit_code::kParseError;
    }
    auto v = is_valid_upto(Sequent{*goal}, max_domain);
    if (!v) {
      err << v.error().message << '\n';
      return exit_code::kDataError;
    }
    if (!*v) {
      out << "valid up to " << max_domain << '\n';
      return exit_code::kOk;
    }
    detail::print_countermodel(out, **v);
    return exit_code::kWarning;
  }

  AnalysisOptions options;
  if (*exp) {
    if (!is_identifier(theory)) {
      err << "theory name '" << theory << "' is not a valid identifier\n";
      return exit_code::kUsage;
    }
    options.export_options.theory_name = theory;
    options.export_options.imports = imports;
  }
  if (!*check || !json) options.countermodel_domain = 0;
  const Analysis a = analyze(*source, options);

  if (*check) {
    if (json) {
      out << report_json(a, *source).dump(2) << '\n';
    } else {
      detail::print_diagnostics(out, file, *source, a.report);
      out << file << ": " << (a.report.verdict == Verdict::ParseError ? "parse error" : to_string(a.report.verdict))
          << '\n';
    }
    return detail::verdict_exit(a.report.verdict);
  }

  if (*fmt) {
    if (!a.promoted_layout) {
      detail::print_diagnostics(err, file, *source, a.report);
      return exit_code::kParseError;
    }
    if (write) {
      std::ofstream os(file, std::ios::binary | std::ios::trunc);
      if (!(os << *a.promoted_layout)) {
        err << "cannot write " << file << '\n';
        return exit_code::kCantCreate;
      }
      return exit_code::kOk;
    }
    out << *a.promoted_layout;
    return exit_code::kOk;
  }

  // export
  if (!a.isabelle_theory) {
    detail::print_diagnostics(err, file, *source, a.report);
    err << file << ": not exported, the proof is not verified\n";
    return detail::verdict_exit(a.report.verdict);
  }
  if (output.empty()) {
    out << *a.isabelle_theory;
    return exit_code::kOk;
  }
  std::ofstream os(output, std::ios::binary | std::ios::trunc);
  if (!(os << *a.isabelle_theory)) {
    err << "cannot write " << output << '\n';
    return exit_code::kCantCreate;
  }
  return exit_code::kOk;
}

}  // namespace minicalc
