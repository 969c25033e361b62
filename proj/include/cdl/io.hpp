#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "cdl/moore.hpp"
#include "cdl/parser.hpp"
#include "cdl/trace.hpp"

namespace cdl {

/// Unreadable file or malformed JSON/field content.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& p);

ContractFile load_contract(const std::filesystem::path& p);

/// {"alphabet": [...], "party0": [[...], ...], "party1": [[...], ...]}.
/// The alphabet must equal `sigma` (same names, same order).
Interaction parse_trace(const std::string& json_text, const Alphabet& sigma);
Interaction load_trace(const std::filesystem::path& p, const Alphabet& sigma);

/// {"party": 0, "states": [{"name": "s0", "output": ["a"]}], "initial": "s0",
///  "transitions": [{"source": "s0", "guard": "!a_1", "target": "s1"}],
///  "deterministic": true}. An optional "alphabet" must equal sigma. The
/// result is validated.
MooreMachine parse_machine(const std::string& json_text, const Alphabet& sigma);
MooreMachine load_machine(const std::filesystem::path& p, const Alphabet& sigma);

/// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string fnv1a64(const std::string& bytes);

}  // namespace cdl
