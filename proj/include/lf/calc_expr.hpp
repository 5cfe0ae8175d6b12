#pragma once

#include <optional>
#include <string>

#include "lf/calculus.hpp"

namespace lf::calc {

// Value of a calculus expression.
//   expr    := ["pair@" INT] union
//   union   := sum { ("⊔" | "u") sum }
//   sum     := postfix { "#" ["[" INT "," INT "]"] postfix }
//   postfix := primary { "^" INT | "stab+" | "stab-" | "pushoff" }
//   primary := NAME | "(" union ")"
// '#' is left associative; edges for pair@ are numbered by the textual position of '#'.
struct CalcResult {
  SumTree tree;
  bool transverse = false;
  std::optional<AlexanderPair> pair;
  int pair_edge = 0;

  const LegendrianDescriptor& legendrian() const { return tree.value; }
  TransverseDescriptor transverse_value() const { return transverse_pushoff(tree.value); }
};

// Throws ParseError (line 1, column in the expression) for syntax errors and unknown names,
// ConsistencyError for undefined pairs.
CalcResult evaluate(const std::string& expression);

std::string report_text(const CalcResult& r);

}  // namespace lf::calc
