#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string_view>

namespace minicalc {

enum class RuleName : std::uint8_t {
  Basic,
  Imp_R,
  Imp_L,
  Dis_R,
  Dis_L,
  Con_R,
  Con_L,
  Exi_R,
  Exi_L,
  Uni_R,
  Uni_L,
  Extra,
  // derived
  Ext,
  NegNeg,
};

inline constexpr std::array<std::string_view, 14> kRuleNames = {
    "Basic", "Imp_R", "Imp_L", "Dis_R", "Dis_L", "Con_R", "Con_L",
    "Exi_R", "Exi_L", "Uni_R", "Uni_L", "Extra", "Ext",   "NegNeg",
};

inline constexpr std::array<RuleName, 14> kAllRules = {
    RuleName::Basic, RuleName::Imp_R, RuleName::Imp_L, RuleName::Dis_R, RuleName::Dis_L,
    RuleName::Con_R, RuleName::Con_L, RuleName::Exi_R, RuleName::Exi_L, RuleName::Uni_R,
    RuleName::Uni_L, RuleName::Extra, RuleName::Ext,   RuleName::NegNeg,
};

inline constexpr std::string_view to_string(RuleName r) {
  return kRuleNames[static_cast<std::size_t>(r)];
}

inline std::ostream& operator<<(std::ostream& os, RuleName r) { return os << to_string(r); }

inline constexpr std::optional<RuleName> rule_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kRuleNames.size(); ++i)
    if (kRuleNames[i] == s) return static_cast<RuleName>(i);
  return std::nullopt;
}

inline constexpr bool is_primitive(RuleName r) {
  return r != RuleName::Ext && r != RuleName::NegNeg;
}

/// Rules instantiating a quantifier with an arbitrary term.
inline constexpr bool takes_term(RuleName r) {
  return r == RuleName::Exi_R || r == RuleName::Uni_L;
}

/// Rules introducing a fresh constant.
inline constexpr bool takes_witness(RuleName r) {
  return r == RuleName::Exi_L || r == RuleName::Uni_R;
}

inline constexpr bool takes_annotation(RuleName r) {
  return takes_term(r) || takes_witness(r);
}

/// Rules whose premise is read off the stated sequent.
inline constexpr bool takes_target(RuleName r) {
  return r == RuleName::Ext || r == RuleName::Extra;
}

}  // namespace minicalc
