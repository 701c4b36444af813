#pragma once

// Finite-model semantics. Used as an oracle: a verified sequent must hold in
// every interpretation over small domains.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "minicalc/expected.hpp"
#include "minicalc/syntax.hpp"

namespace minicalc {

/// Thrown by long-running work when its time budget is used up.
class TimedOut : public std::runtime_error {
 public:
  TimedOut() : std::runtime_error("check timed out") {}
};

struct Deadline {
  std::chrono::steady_clock::time_point at = std::chrono::steady_clock::time_point::max();

  static Deadline after(std::chrono::milliseconds budget) { return {std::chrono::steady_clock::now() + budget}; }
  static Deadline never() { return {}; }

  bool expired() const { return at != std::chrono::steady_clock::time_point::max() && std::chrono::steady_clock::now() >= at; }
  void check() const {
    if (expired()) throw TimedOut();
  }
};

using Element = std::uint32_t;

struct Symbol {
  std::string name;
  std::size_t arity = 0;

  auto operator<=>(const Symbol&) const = default;
};

/// A finite interpretation over the domain {0, ..., size-1}. Tables are
/// indexed by the argument tuple read as a base-`size` number, first
/// argument most significant.
struct Interpretation {
  Element size = 1;
  std::map<Symbol, std::vector<Element>> functions;
  std::map<Symbol, std::vector<bool>> predicates;

  std::size_t tuple_index(const std::vector<Element>& args) const {
    std::size_t idx = 0;
    for (Element a : args) idx = idx * size + a;
    return idx;
  }
};

struct MissingSymbol : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Variable assignment; index 0 is the innermost bound variable. Indices
/// beyond the stored prefix map to `fallback`.
class Environment {
 public:
  Environment() = default;
  explicit Environment(std::vector<Element> prefix, Element fallback = 0) : fallback_(fallback) {
    slots_.assign(prefix.rbegin(), prefix.rend());
  }

  Element operator[](std::size_t i) const { return i < slots_.size() ? slots_[slots_.size() - 1 - i] : fallback_; }

  // Entering a binder shifts every existing index up by one.
  void push(Element d) { slots_.push_back(d); }
  void pop() { slots_.pop_back(); }

 private:
  std::vector<Element> slots_;  // back() is index 0
  Element fallback_ = 0;
};

namespace detail {

inline Element eval_term(const Term& t, const Interpretation& I, const Environment& env) {
  if (t.is_var()) return env[t.index] % I.size;
  std::vector<Element> args;
  args.reserve(t.args.size());
  for (const Term& a : t.args) args.push_back(eval_term(a, I, env));
  auto it = I.functions.find(Symbol{t.name, t.args.size()});
  if (it == I.functions.end())
    throw MissingSymbol("no interpretation for function " + t.name + "/" + std::to_string(t.args.size()));
  return it->second.at(I.tuple_index(args));
}

inline bool eval(const Formula& f, const Interpretation& I, Environment& env) {
  switch (f.op) {
    case Connective::Pre: {
      std::vector<Element> args;
      args.reserve(f.args.size());
      for (const Term& a : f.args) args.push_back(eval_term(a, I, env));
      auto it = I.predicates.find(Symbol{f.name, f.args.size()});
      if (it == I.predicates.end())
        throw MissingSymbol("no interpretation for predicate " + f.name + "/" + std::to_string(f.args.size()));
      return it->second.at(I.tuple_index(args));
    }
    case Connective::Neg: return !eval(f.body(), I, env);
    case Connective::Imp: return !eval(f.left(), I, env) || eval(f.right(), I, env);
    case Connective::Dis: return eval(f.left(), I, env) || eval(f.right(), I, env);
    case Connective::Con: return eval(f.left(), I, env) && eval(f.right(), I, env);
    case Connective::Uni:
    case Connective::Exi: {
      const bool universal = f.is(Connective::Uni);
      for (Element d = 0; d < I.size; ++d) {
        env.push(d);
        const bool v = eval(f.body(), I, env);
        env.pop();
        if (v != universal) return !universal;
      }
      return universal;
    }
  }
  return false;
}

inline void collect_term(const Term& t, std::set<Symbol>& funcs) {
  if (t.is_var()) return;
  funcs.insert(Symbol{t.name, t.args.size()});
  for (const Term& a : t.args) collect_term(a, funcs);
}

inline void collect(const Formula& f, std::set<Symbol>& preds, std::set<Symbol>& funcs) {
  if (f.is_atom()) {
    preds.insert(Symbol{f.name, f.args.size()});
    for (const Term& a : f.args) collect_term(a, funcs);
    return;
  }
  for (const Formula& g : f.sub) collect(g, preds, funcs);
}

inline bool term_closed(const Term& t, std::size_t depth) {
  if (t.is_var()) return t.index < depth;
  return std::all_of(t.args.begin(), t.args.end(), [&](const Term& a) { return term_closed(a, depth); });
}

inline bool closed(const Formula& f, std::size_t depth) {
  if (f.is_atom())
    return std::all_of(f.args.begin(), f.args.end(), [&](const Term& a) { return term_closed(a, depth); });
  const std::size_t inner = (f.is(Connective::Uni) || f.is(Connective::Exi)) ? depth + 1 : depth;
  return std::all_of(f.sub.begin(), f.sub.end(), [&](const Formula& g) { return closed(g, inner); });
}

// Saturating b^e.
inline std::uint64_t pow_sat(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (b != 0 && r > std::numeric_limits<std::uint64_t>::max() / b) return std::numeric_limits<std::uint64_t>::max();
    r *= b;
  }
  return r;
}

inline std::uint64_t mul_sat(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

}  // namespace detail

inline bool eval_formula(const Formula& f, const Interpretation& I, Environment env = {}) {
  return detail::eval(f, I, env);
}

/// The sequent read as a disjunction.
inline bool eval_sequent(const Sequent& s, const Interpretation& I, const Environment& env = {}) {
  return std::any_of(s.begin(), s.end(), [&](const Formula& f) { return eval_formula(f, I, env); });
}

inline bool is_closed(const Formula& f) { return detail::closed(f, 0); }

struct Signature {
  std::set<Symbol> predicates;
  std::set<Symbol> functions;
};

inline Signature signature_of(const Sequent& s) {
  Signature sig;
  for (const Formula& f : s) detail::collect(f, sig.predicates, sig.functions);
  return sig;
}

/// Number of interpretations of `sig` over a domain of `n` elements (saturating).
inline std::uint64_t interpretation_count(const Signature& sig, std::uint64_t n) {
  std::uint64_t total = 1;
  for (const Symbol& s : sig.functions) total = detail::mul_sat(total, detail::pow_sat(n, detail::pow_sat(n, s.arity)));
  for (const Symbol& s : sig.predicates) total = detail::mul_sat(total, detail::pow_sat(2, detail::pow_sat(n, s.arity)));
  return total;
}

/// Calls `visit(I)` for every interpretation of `sig` over a domain of size
/// `n`, in lexicographic order of the concatenated tables (functions first,
/// symbols in sorted order, last entry varying fastest). Stops early when
/// `visit` returns false; returns whether the enumeration ran to completion.
template <typename Visit>
bool for_each_interpretation(const Signature& sig, Element n, Visit&& visit, const Deadline& deadline = Deadline::never()) {
  Interpretation I;
  I.size = n;
  struct Slot {
    bool predicate;
    Symbol symbol;
    std::size_t entry;
  };
  std::vector<Slot> slots;
  for (const Symbol& s : sig.functions) {
    const std::size_t len = static_cast<std::size_t>(detail::pow_sat(n, s.arity));
    I.functions[s].assign(len, 0);
    for (std::size_t e = 0; e < len; ++e) slots.push_back({false, s, e});
  }
  for (const Symbol& s : sig.predicates) {
    const std::size_t len = static_cast<std::size_t>(detail::pow_sat(n, s.arity));
    I.predicates[s].assign(len, false);
    for (std::size_t e = 0; e < len; ++e) slots.push_back({true, s, e});
  }
  // Cache table pointers: map nodes are stable.
  std::vector<Element*> fslots;
  std::vector<std::vector<bool>*> ptables;
  for (const Slot& s : slots) {
    if (s.predicate) {
      ptables.push_back(&I.predicates[s.symbol]);
      fslots.push_back(nullptr);
    } else {
      fslots.push_back(&I.functions[s.symbol][s.entry]);
      ptables.push_back(nullptr);
    }
  }
  std::uint64_t visited = 0;
  for (;;) {
    if ((++visited & 0xFF) == 0) deadline.check();
    if (!visit(static_cast<const Interpretation&>(I))) return false;
    // Odometer increment from the last slot.
    std::size_t k = slots.size();
    for (;;) {
      if (k == 0) return true;
      --k;
      if (slots[k].predicate) {
        auto ref = (*ptables[k])[slots[k].entry];
        if (!ref) {
          ref = true;
          break;
        }
        ref = false;
      } else {
        Element& v = *fslots[k];
        if (v + 1 < n) {
          ++v;
          break;
        }
        v = 0;
      }
    }
  }
}

struct Countermodel {
  Interpretation interpretation;
};

struct ValidityError {
  std::string message;
};

/// Default ceiling on interpretations examined per domain size.
inline constexpr std::uint64_t kDefaultModelBudget = 1'000'000;

/// Checks that the disjunction of the closed sequent `s` holds in every
/// interpretation of domain size 1..`max_domain`. Returns the first
/// falsifying interpretation otherwise.
inline Expected<std::optional<Countermodel>, ValidityError> is_valid_upto(const Sequent& s, Element max_domain,
                                                                         std::uint64_t budget = kDefaultModelBudget,
                                                                         const Deadline& deadline = Deadline::never()) {
  if (max_domain == 0) return Unexpected{ValidityError{"domain size must be positive"}};
  for (const Formula& f : s)
    if (!is_closed(f)) return Unexpected{ValidityError{"formula " + render(f) + " has free variables"}};
  const Signature sig = signature_of(s);
  for (Element n = 1; n <= max_domain; ++n)
    if (interpretation_count(sig, n) > budget)
      return Unexpected{ValidityError{"model search budget exceeded at domain size " + std::to_string(n)}};

  std::optional<Countermodel> found;
  for (Element n = 1; n <= max_domain && !found; ++n) {
    for_each_interpretation(
        sig, n,
        [&](const Interpretation& I) {
          if (eval_sequent(s, I)) return true;
          found = Countermodel{I};
          return false;
        },
        deadline);
  }
  return found;
}

}  // namespace minicalc
