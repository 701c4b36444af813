#pragma once

// Terms and formulas of first-order logic with de Bruijn indices, the
// prefix-notation reader and the three renderers.
//
// Grammar (ASCII input, `#` starts a comment running to end of line):
//
//   formula := 'Imp' formula formula | 'Dis' formula formula
//            | 'Con' formula formula | 'Neg' formula
//            | 'Uni' formula | 'Exi' formula
//            | name | name '[' term {',' term} ']'
//            | '(' formula ')'
//   term    := 'Var' number | name | name '[' term {',' term} ']'
//            | '(' term ')'
//   name    := letter {letter | digit | '_'}    (not a reserved word)

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "minicalc/expected.hpp"
#include "minicalc/rule_name.hpp"

namespace minicalc {

/// Half-open byte range [start, end) into a source text.
struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;

  static SourceSpan cover(SourceSpan a, SourceSpan b) {
    return {std::min(a.start, b.start), std::max(a.end, b.end)};
  }
};

struct ParseError {
  SourceSpan span;
  std::string message;
};

struct Term {
  enum class Kind : std::uint8_t { Var, Fun };

  Kind kind = Kind::Var;
  std::size_t index = 0;   // Var
  std::string name;        // Fun
  std::vector<Term> args;  // Fun

  static Term var(std::size_t i) {
    Term t;
    t.kind = Kind::Var;
    t.index = i;
    return t;
  }
  static Term fun(std::string name, std::vector<Term> args = {}) {
    Term t;
    t.kind = Kind::Fun;
    t.name = std::move(name);
    t.args = std::move(args);
    return t;
  }

  bool is_var() const { return kind == Kind::Var; }
  bool is_constant() const { return kind == Kind::Fun && args.empty(); }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == Kind::Var) return a.index == b.index;
    return a.name == b.name && a.args == b.args;
  }
};

enum class Connective : std::uint8_t { Pre, Neg, Imp, Dis, Con, Uni, Exi };

struct Formula {
  Connective op = Connective::Pre;
  std::string name;          // Pre
  std::vector<Term> args;    // Pre
  std::vector<Formula> sub;  // operands: 1 for Neg/Uni/Exi, 2 for Imp/Dis/Con

  static Formula pre(std::string name, std::vector<Term> args = {}) {
    Formula f;
    f.op = Connective::Pre;
    f.name = std::move(name);
    f.args = std::move(args);
    return f;
  }
  static Formula unary(Connective op, Formula p) {
    Formula f;
    f.op = op;
    f.sub.push_back(std::move(p));
    return f;
  }
  static Formula binary(Connective op, Formula p, Formula q) {
    Formula f;
    f.op = op;
    f.sub.reserve(2);
    f.sub.push_back(std::move(p));
    f.sub.push_back(std::move(q));
    return f;
  }
  static Formula neg(Formula p) { return unary(Connective::Neg, std::move(p)); }
  static Formula uni(Formula p) { return unary(Connective::Uni, std::move(p)); }
  static Formula exi(Formula p) { return unary(Connective::Exi, std::move(p)); }
  static Formula imp(Formula p, Formula q) { return binary(Connective::Imp, std::move(p), std::move(q)); }
  static Formula dis(Formula p, Formula q) { return binary(Connective::Dis, std::move(p), std::move(q)); }
  static Formula con(Formula p, Formula q) { return binary(Connective::Con, std::move(p), std::move(q)); }

  bool is(Connective c) const { return op == c; }
  bool is_atom() const { return op == Connective::Pre; }
  bool is_binary() const {
    return op == Connective::Imp || op == Connective::Dis || op == Connective::Con;
  }
  const Formula& body() const { return sub[0]; }
  const Formula& left() const { return sub[0]; }
  const Formula& right() const { return sub[1]; }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.op != b.op) return false;
    if (a.op == Connective::Pre) return a.name == b.name && a.args == b.args;
    return a.sub == b.sub;
  }
};

/// A one-sided sequent: the disjunction of its formulas, order significant.
using Sequent = std::vector<Formula>;

inline constexpr std::string_view connective_keyword(Connective c) {
  switch (c) {
    case Connective::Pre: return "";
    case Connective::Neg: return "Neg";
    case Connective::Imp: return "Imp";
    case Connective::Dis: return "Dis";
    case Connective::Con: return "Con";
    case Connective::Uni: return "Uni";
    case Connective::Exi: return "Exi";
  }
  return "";
}

/// Name substituted for a bound variable that does not occur.
inline constexpr std::string_view kDummyConstant = "dummy";

inline bool is_keyword(std::string_view s) {
  static constexpr std::string_view kKeywords[] = {"Imp", "Dis", "Con", "Neg", "Uni", "Exi", "Var"};
  return std::find(std::begin(kKeywords), std::end(kKeywords), s) != std::end(kKeywords);
}

/// True for words that can never name a predicate or function.
inline bool is_reserved_word(std::string_view s) {
  return is_keyword(s) || rule_from_string(s).has_value() || s == kDummyConstant;
}

inline bool is_identifier(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s.front()))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

inline bool is_valid_name(std::string_view s) { return is_identifier(s) && !is_reserved_word(s); }

// ---------------------------------------------------------------------------
// Tokens

enum class TokenKind : std::uint8_t {
  Ident,
  Number,
  LBracket,
  RBracket,
  Comma,
  LParen,
  RParen,
  Plus,
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  SourceSpan span;
};

struct Comment {
  std::string text;  // from '#' to end of line, trailing whitespace removed
  SourceSpan span;
};

struct TokenStream {
  std::vector<Token> tokens;  // always terminated by an End token
  std::vector<Comment> comments;
};

inline std::string describe(const Token& tok) {
  switch (tok.kind) {
    case TokenKind::End: return "end of input";
    default: return "'" + tok.text + "'";
  }
}

inline Expected<TokenStream, ParseError> tokenize(std::string_view src) {
  TokenStream out;
  std::size_t i = 0;
  const std::size_t n = src.size();
  auto push = [&](TokenKind kind, std::size_t start, std::size_t end) {
    out.tokens.push_back(Token{kind, std::string(src.substr(start, end - start)), {start, end}});
  };
  while (i < n) {
    const auto c = static_cast<unsigned char>(src[i]);
    if (c == '#') {
      std::size_t j = src.find('\n', i);
      if (j == std::string_view::npos) j = n;
      std::size_t e = j;
      while (e > i && std::isspace(static_cast<unsigned char>(src[e - 1]))) --e;
      out.comments.push_back(Comment{std::string(src.substr(i, e - i)), {i, e}});
      i = j;
    } else if (std::isspace(c)) {
      ++i;
    } else if (std::isalpha(c)) {
      std::size_t j = i + 1;
      while (j < n && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      push(TokenKind::Ident, i, j);
      i = j;
    } else if (std::isdigit(c)) {
      std::size_t j = i + 1;
      while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      push(TokenKind::Number, i, j);
      i = j;
    } else {
      TokenKind kind;
      switch (c) {
        case '[': kind = TokenKind::LBracket; break;
        case ']': kind = TokenKind::RBracket; break;
        case ',': kind = TokenKind::Comma; break;
        case '(': kind = TokenKind::LParen; break;
        case ')': kind = TokenKind::RParen; break;
        case '+': kind = TokenKind::Plus; break;
        default: {
          // Report the whole UTF-8 sequence as one character.
          std::size_t j = i + 1;
          while (j < n && (static_cast<unsigned char>(src[j]) & 0xC0) == 0x80) ++j;
          return Unexpected{ParseError{{i, j}, "unexpected character '" + std::string(src.substr(i, j - i)) + "'"}};
        }
      }
      push(kind, i, i + 1);
      ++i;
    }
  }
  out.tokens.push_back(Token{TokenKind::End, "", {n, n}});
  return out;
}

// ---------------------------------------------------------------------------
// Parser

/// Recursive-descent reader over a token stream. Used directly by the proof
/// script reader, which interleaves formulas with rule names and separators.
class Parser {
 public:
  static constexpr std::size_t kMaxDepth = 256;

  explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {}

  const Token& peek() const { return toks_[pos_]; }
  const Token& previous() const { return toks_[pos_ == 0 ? 0 : pos_ - 1]; }
  bool at_end() const { return peek().kind == TokenKind::End; }
  const Token& advance() {
    const Token& t = toks_[pos_];
    if (t.kind != TokenKind::End) ++pos_;
    return t;
  }
  std::size_t position() const { return pos_; }

  /// True when the next token can begin a formula.
  bool at_formula_start() const {
    const Token& t = peek();
    if (t.kind == TokenKind::LParen) return true;
    if (t.kind != TokenKind::Ident) return false;
    return !rule_from_string(t.text) && t.text != "Var";
  }

  Expected<Formula, ParseError> formula() {
    depth_ = 0;
    return parse_formula();
  }

  /// `allow_dummy` admits the reserved placeholder constant in annotations.
  Expected<Term, ParseError> term(bool allow_dummy = false) {
    depth_ = 0;
    allow_dummy_ = allow_dummy;
    auto t = parse_term();
    allow_dummy_ = false;
    return t;
  }

  /// Error span for a token: end-of-input points at the last real token.
  SourceSpan span_of(const Token& t) const {
    if (t.kind == TokenKind::End && toks_.size() > 1) return toks_[toks_.size() - 2].span;
    return t.span;
  }

  ParseError error_at(const Token& t, std::string message) const { return ParseError{span_of(t), std::move(message)}; }

 private:
  struct DepthGuard {
    std::size_t& d;
    explicit DepthGuard(std::size_t& depth) : d(depth) { ++d; }
    ~DepthGuard() { --d; }
  };

  Expected<Formula, ParseError> parse_formula() {
    DepthGuard guard(depth_);
    if (depth_ > kMaxDepth) return Unexpected{error_at(peek(), "formula nested too deeply")};
    const Token& tok = peek();
    if (tok.kind == TokenKind::LParen) {
      advance();
      auto inner = parse_formula();
      if (!inner) return inner;
      if (peek().kind != TokenKind::RParen)
        return Unexpected{error_at(peek(), "expected ')' but found " + describe(peek()))};
      advance();
      return inner;
    }
    if (tok.kind != TokenKind::Ident)
      return Unexpected{error_at(tok, "expected a formula but found " + describe(tok))};

    const std::string word = tok.text;
    for (Connective c : {Connective::Imp, Connective::Dis, Connective::Con}) {
      if (word == connective_keyword(c)) {
        advance();
        auto l = parse_formula();
        if (!l) return l;
        auto r = parse_formula();
        if (!r) return r;
        return Formula::binary(c, std::move(*l), std::move(*r));
      }
    }
    for (Connective c : {Connective::Neg, Connective::Uni, Connective::Exi}) {
      if (word == connective_keyword(c)) {
        advance();
        auto p = parse_formula();
        if (!p) return p;
        return Formula::unary(c, std::move(*p));
      }
    }
    if (is_reserved_word(word))
      return Unexpected{error_at(tok, "reserved word '" + word + "' cannot be used where a formula is expected")};
    advance();
    auto args = parse_args();
    if (!args) return Unexpected{std::move(args).error()};
    return Formula::pre(word, std::move(*args));
  }

  Expected<Term, ParseError> parse_term() {
    DepthGuard guard(depth_);
    if (depth_ > kMaxDepth) return Unexpected{error_at(peek(), "term nested too deeply")};
    const Token& tok = peek();
    if (tok.kind == TokenKind::LParen) {
      advance();
      auto inner = parse_term();
      if (!inner) return inner;
      if (peek().kind != TokenKind::RParen)
        return Unexpected{error_at(peek(), "expected ')' but found " + describe(peek()))};
      advance();
      return inner;
    }
    if (tok.kind != TokenKind::Ident)
      return Unexpected{error_at(tok, "expected a term but found " + describe(tok))};
    if (tok.text == "Var") {
      advance();
      const Token& num = peek();
      if (num.kind != TokenKind::Number)
        return Unexpected{error_at(num, "expected a variable index (a natural number) but found " + describe(num))};
      std::size_t value = 0;
      auto [ptr, ec] = std::from_chars(num.text.data(), num.text.data() + num.text.size(), value);
      if (ec != std::errc{} || ptr != num.text.data() + num.text.size())
        return Unexpected{error_at(num, "variable index out of range")};
      advance();
      return Term::var(value);
    }
    const std::string word = tok.text;
    if (word == kDummyConstant && allow_dummy_) {
      advance();
      if (peek().kind == TokenKind::LBracket)
        return Unexpected{error_at(peek(), "'dummy' is a constant and takes no arguments")};
      return Term::fun(word);
    }
    if (is_reserved_word(word))
      return Unexpected{error_at(tok, "reserved word '" + word + "' cannot be used where a term is expected")};
    advance();
    auto args = parse_args();
    if (!args) return Unexpected{std::move(args).error()};
    return Term::fun(word, std::move(*args));
  }

  // Optional '[' term {',' term} ']' after a name.
  Expected<std::vector<Term>, ParseError> parse_args() {
    std::vector<Term> args;
    if (peek().kind != TokenKind::LBracket) return args;
    const Token& open = advance();
    for (;;) {
      if (peek().kind == TokenKind::End)
        return Unexpected{ParseError{open.span, "unterminated argument list"}};
      bool dummy = allow_dummy_;
      allow_dummy_ = false;
      auto t = parse_term();
      allow_dummy_ = dummy;
      if (!t) {
        if (peek().kind == TokenKind::End) return Unexpected{ParseError{open.span, "unterminated argument list"}};
        return Unexpected{std::move(t).error()};
      }
      args.push_back(std::move(*t));
      if (peek().kind == TokenKind::Comma) {
        advance();
        continue;
      }
      if (peek().kind == TokenKind::RBracket) {
        advance();
        return args;
      }
      if (peek().kind == TokenKind::End) return Unexpected{ParseError{open.span, "unterminated argument list"}};
      return Unexpected{error_at(peek(), "expected ',' or ']' but found " + describe(peek()))};
    }
  }

  const std::vector<Token>& toks_;
  std::size_t pos_ = 0;
  std::size_t depth_ = 0;
  bool allow_dummy_ = false;
};

inline Expected<Formula, ParseError> parse_formula(std::string_view source) {
  auto lexed = tokenize(source);
  if (!lexed) return Unexpected{std::move(lexed).error()};
  Parser p(lexed->tokens);
  if (p.at_end()) return Unexpected{ParseError{{0, 0}, "expected a formula but found end of input"}};
  auto f = p.formula();
  if (!f) return f;
  if (!p.at_end()) return Unexpected{p.error_at(p.peek(), "trailing input starting at " + describe(p.peek()))};
  return f;
}

inline Expected<Term, ParseError> parse_term(std::string_view source) {
  auto lexed = tokenize(source);
  if (!lexed) return Unexpected{std::move(lexed).error()};
  Parser p(lexed->tokens);
  if (p.at_end()) return Unexpected{ParseError{{0, 0}, "expected a term but found end of input"}};
  auto t = p.term();
  if (!t) return t;
  if (!p.at_end()) return Unexpected{p.error_at(p.peek(), "trailing input starting at " + describe(p.peek()))};
  return t;
}

// ---------------------------------------------------------------------------
// Rendering

enum class RenderMode : std::uint8_t { DeBruijn, Symbolic, Parenthesized };

namespace detail {

inline void render_term(std::string& out, const Term& t, bool symbolic) {
  if (t.is_var()) {
    if (!symbolic) out += "Var ";
    out += std::to_string(t.index);
    return;
  }
  out += t.name;
  if (t.args.empty()) return;
  out += symbolic ? '(' : '[';
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ", ";
    render_term(out, t.args[i], symbolic);
  }
  out += symbolic ? ')' : ']';
}

inline void render_debruijn(std::string& out, const Formula& f, bool nested) {
  if (f.is_atom()) {
    out += f.name;
    if (!f.args.empty()) {
      out += '[';
      for (std::size_t i = 0; i < f.args.size(); ++i) {
        if (i) out += ", ";
        render_term(out, f.args[i], false);
      }
      out += ']';
    }
    return;
  }
  if (nested) out += '(';
  out += connective_keyword(f.op);
  for (const Formula& s : f.sub) {
    out += ' ';
    render_debruijn(out, s, true);
  }
  if (nested) out += ')';
}

inline std::string_view symbol(Connective c) {
  switch (c) {
    case Connective::Neg: return "¬";
    case Connective::Imp: return "→";
    case Connective::Dis: return "∨";
    case Connective::Con: return "∧";
    case Connective::Uni: return "∀";
    case Connective::Exi: return "∃";
    case Connective::Pre: break;
  }
  return "";
}

// Binding strength in symbolic mode; prefix operators and atoms bind tightest.
inline int precedence(const Formula& f) {
  switch (f.op) {
    case Connective::Imp: return 1;
    case Connective::Dis: return 2;
    case Connective::Con: return 3;
    default: return 4;
  }
}

inline void render_symbolic(std::string& out, const Formula& f, bool full_parens) {
  if (f.is_atom()) {
    out += f.name;
    if (!f.args.empty()) {
      out += '(';
      for (std::size_t i = 0; i < f.args.size(); ++i) {
        if (i) out += ", ";
        render_term(out, f.args[i], true);
      }
      out += ')';
    }
    return;
  }
  auto operand = [&](const Formula& g, bool parens) {
    if (parens) out += '(';
    render_symbolic(out, g, full_parens);
    if (parens) out += ')';
  };
  if (!f.is_binary()) {
    out += symbol(f.op);
    out += ' ';
    // In full mode binary operands already carry their own parentheses.
    operand(f.body(), !full_parens && f.body().is_binary());
    return;
  }
  const int p = precedence(f);
  if (full_parens) out += '(';
  // All binary connectives associate to the right.
  operand(f.left(), !full_parens && precedence(f.left()) <= p);
  out += ' ';
  out += symbol(f.op);
  out += ' ';
  operand(f.right(), !full_parens && precedence(f.right()) < p);
  if (full_parens) out += ')';
}

}  // namespace detail

inline std::string render(const Term& t) {
  std::string out;
  detail::render_term(out, t, false);
  return out;
}

inline std::string render(const Formula& f, RenderMode mode = RenderMode::DeBruijn) {
  std::string out;
  switch (mode) {
    case RenderMode::DeBruijn: detail::render_debruijn(out, f, false); break;
    case RenderMode::Symbolic: detail::render_symbolic(out, f, false); break;
    case RenderMode::Parenthesized: detail::render_symbolic(out, f, true); break;
  }
  return out;
}

/// Comma-separated de Bruijn rendering, used in diagnostics.
inline std::string render(const Sequent& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ", ";
    out += render(s[i]);
  }
  out += ']';
  return out;
}

// ---------------------------------------------------------------------------
// Source positions

/// Maps byte offsets of a UTF-8 text to code-point offsets and 1-based
/// line/column pairs (columns counted in code points).
class SourceText {
 public:
  explicit SourceText(std::string_view text) : text_(text) {
    line_starts_.push_back(0);
    for (std::size_t i = 0; i < text.size(); ++i)
      if (text[i] == '\n') line_starts_.push_back(i + 1);
  }

  std::size_t size() const { return text_.size(); }

  std::size_t char_offset(std::size_t byte) const { return count_chars(0, std::min(byte, text_.size())); }

  std::pair<std::size_t, std::size_t> line_col(std::size_t byte) const {
    byte = std::min(byte, text_.size());
    auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), byte);
    const std::size_t line = static_cast<std::size_t>(it - line_starts_.begin());
    const std::size_t start = line_starts_[line - 1];
    return {line, count_chars(start, byte) + 1};
  }

 private:
  std::size_t count_chars(std::size_t from, std::size_t to) const {
    std::size_t n = 0;
    for (std::size_t i = from; i < to; ++i)
      if ((static_cast<unsigned char>(text_[i]) & 0xC0) != 0x80) ++n;
    return n;
  }

  std::string_view text_;
  std::vector<std::size_t> line_starts_;
};

}  // namespace minicalc
