#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace butler::behavior {

enum class Modality { text, voice_transcript };

struct Instruction {
  std::string text;
  std::int64_t timestamp_ms = 0;
  Modality modality = Modality::text;
};

class EmptyInstruction : public std::runtime_error {
 public:
  EmptyInstruction() : std::runtime_error("instruction is empty") {}
};

struct NormalizedInstruction {
  std::vector<std::string> tokens;
  int demonstrative_count = 0;  // standalone "this" / "here"
};

/// Lowercased, punctuation-free tokens. Throws EmptyInstruction.
NormalizedInstruction normalize_instruction(const Instruction& i);

}  // namespace butler::behavior
