#include "butler/behavior/instruction.hpp"

#include <algorithm>

#include "butler/common/text.hpp"

namespace butler::behavior {

NormalizedInstruction normalize_instruction(const Instruction& i) {
  NormalizedInstruction n;
  n.tokens = text::tokenize(i.text);
  if (n.tokens.empty()) throw EmptyInstruction();
  n.demonstrative_count =
      static_cast<int>(std::count_if(n.tokens.begin(), n.tokens.end(), [](const std::string& t) { return text::is_demonstrative(t); }));
  return n;
}

}  // namespace butler::behavior
