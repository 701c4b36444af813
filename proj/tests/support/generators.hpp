#pragma once

// Seeded random terms, formulas and sequents for property tests.

#include <random>
#include <string>
#include <vector>

#include "minicalc/syntax.hpp"

namespace minicalc::testing {

struct GenConfig {
  std::size_t max_depth = 5;
  std::size_t max_quantifiers = 3;
  std::size_t extra_free = 0;  // free indices allowed beyond the binders in scope
  std::vector<std::pair<std::string, std::size_t>> predicates{{"p", 1}, {"q", 0}, {"r", 2}};
  std::vector<std::pair<std::string, std::size_t>> functions{{"a", 0}, {"b", 0}, {"f", 1}, {"g", 2}};
};

class Generator {
 public:
  explicit Generator(std::uint32_t seed, GenConfig cfg = {}) : rng_(seed), cfg_(std::move(cfg)) {}

  std::mt19937& rng() { return rng_; }
  const GenConfig& config() const { return cfg_; }

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin() { return pick(2) == 0; }

  Term term(std::size_t bound, std::size_t depth = 2) {
    const std::size_t vars = bound + cfg_.extra_free;
    if (vars > 0 && (depth == 0 || pick(3) == 0)) return Term::var(pick(vars));
    std::vector<std::pair<std::string, std::size_t>> options;
    for (const auto& f : cfg_.functions)
      if (depth > 0 || f.second == 0) options.push_back(f);
    const auto& [name, arity] = options[pick(options.size())];
    std::vector<Term> args;
    for (std::size_t i = 0; i < arity; ++i) args.push_back(term(bound, depth == 0 ? 0 : depth - 1));
    return Term::fun(name, std::move(args));
  }

  Formula formula(std::size_t bound = 0) {
    quantifiers_ = 0;
    return formula_at(bound, cfg_.max_depth);
  }

  Formula atom(std::size_t bound) {
    const auto& [name, arity] = cfg_.predicates[pick(cfg_.predicates.size())];
    std::vector<Term> args;
    for (std::size_t i = 0; i < arity; ++i) args.push_back(term(bound, 1));
    return Formula::pre(name, std::move(args));
  }

  Sequent sequent(std::size_t max_len, std::size_t depth) {
    Sequent s;
    const std::size_t n = pick(max_len + 1);
    for (std::size_t i = 0; i < n; ++i) {
      quantifiers_ = 0;
      s.push_back(formula_at(0, depth));
    }
    return s;
  }

  Formula formula_at(std::size_t bound, std::size_t depth) {
    if (depth == 0 || pick(4) == 0) return atom(bound);
    switch (pick(6)) {
      case 0: return Formula::neg(formula_at(bound, depth - 1));
      case 1: return Formula::imp(formula_at(bound, depth - 1), formula_at(bound, depth - 1));
      case 2: return Formula::dis(formula_at(bound, depth - 1), formula_at(bound, depth - 1));
      case 3: return Formula::con(formula_at(bound, depth - 1), formula_at(bound, depth - 1));
      default:
        if (quantifiers_ >= cfg_.max_quantifiers) return Formula::neg(formula_at(bound, depth - 1));
        ++quantifiers_;
        return coin() ? Formula::uni(formula_at(bound + 1, depth - 1)) : Formula::exi(formula_at(bound + 1, depth - 1));
    }
  }

 private:
  std::mt19937 rng_;
  GenConfig cfg_;
  std::size_t quantifiers_ = 0;
};

}  // namespace minicalc::testing
