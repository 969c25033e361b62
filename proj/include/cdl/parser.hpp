#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "cdl/alphabet.hpp"
#include "cdl/ast.hpp"

namespace cdl {

/// Syntax error or undeclared action, located at a 1-based line/column.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, int line, int column);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  int line_;
  int column_;
};

/// Parses a contract in the concrete syntax:
///
///   O_p(a)  F_p(a)  P_p(a)  TOP  BOT
///   C /\ C        conjunction            (left-assoc)
///   C |> C        reparation             (left-assoc)
///   C ; C         sequence               (right-assoc, loosest)
///   <re> C        trigger
///   re ~> C       guard
///   rec X. C      recursion              (body extends as far right as possible)
///
/// Regexes: atoms are labeled actions a_0, a_1, `true`, `false`, `!atom` or a
/// bracketed boolean formula [a_0 & !b_1 | c_0 -> d_1]; `r + r` is choice,
/// `r ; r` sequence and postfix `r+` the Kleene plus.
Contract parse_contract(std::string_view text, const Alphabet& sigma);

Regex parse_regex(std::string_view text, const Alphabet& sigma);
Guard parse_guard(std::string_view text, const Alphabet& sigma);

struct ContractFile {
  Alphabet alphabet;
  Contract contract;
};

/// A contract file: a header line `alphabet: a, b, ...` followed by the contract.
/// `#` starts a comment running to the end of the line.
ContractFile parse_contract_file(std::string_view text);

}  // namespace cdl
