#include "cdl/parser.hpp"

#include <cctype>
#include <optional>
#include <vector>

namespace cdl {

ParseError::ParseError(std::string message, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      message_(std::move(message)),
      line_(line),
      column_(column) {}

namespace {

enum class Tok {
  ident,
  lparen,
  rparen,
  lbracket,
  rbracket,
  langle,
  rangle,
  semicolon,
  dot,
  comma,
  colon,
  bang,
  amp,
  bar,
  plus,
  wedge,    // /\ .
  repair,   // |>
  leadsto,  // ~>
  arrow,    // ->
  end,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

std::vector<Token> lex(std::string_view src, int first_line = 1) {
  std::vector<Token> out;
  int line = first_line, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto two = [&](char a, char b) { return i + 1 < src.size() && src[i] == a && src[i + 1] == b; };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const int l = line, cl = col;
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::ident, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    auto emit = [&](Tok k, std::size_t n) {
      out.push_back({k, std::string(src.substr(i, n)), l, cl});
      advance(n);
    };
    if (two('/', '\\')) { emit(Tok::wedge, 2); continue; }
    if (two('|', '>')) { emit(Tok::repair, 2); continue; }
    if (two('~', '>')) { emit(Tok::leadsto, 2); continue; }
    if (two('-', '>')) { emit(Tok::arrow, 2); continue; }
    switch (c) {
      case '(': emit(Tok::lparen, 1); continue;
      case ')': emit(Tok::rparen, 1); continue;
      case '[': emit(Tok::lbracket, 1); continue;
      case ']': emit(Tok::rbracket, 1); continue;
      case '<': emit(Tok::langle, 1); continue;
      case '>': emit(Tok::rangle, 1); continue;
      case ';': emit(Tok::semicolon, 1); continue;
      case '.': emit(Tok::dot, 1); continue;
      case ',': emit(Tok::comma, 1); continue;
      case ':': emit(Tok::colon, 1); continue;
      case '!': emit(Tok::bang, 1); continue;
      case '&': emit(Tok::amp, 1); continue;
      case '|': emit(Tok::bar, 1); continue;
      case '+': emit(Tok::plus, 1); continue;
      default: throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
    }
  }
  out.push_back({Tok::end, "", line, col});
  return out;
}

std::string describe(const Token& t) {
  if (t.kind == Tok::end) return "end of input";
  return "'" + t.text + "'";
}

class Parser {
 public:
  Parser(std::vector<Token> toks, const Alphabet& sigma) : toks_(std::move(toks)), sigma_(sigma) {}

  Contract contract_eof() {
    auto c = contract();
    expect_end();
    return c;
  }
  Regex regex_eof() {
    auto r = regex();
    expect_end();
    return r;
  }
  Guard guard_eof() {
    auto g = guard_expr();
    expect_end();
    return g;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_ident(std::string_view s) const { return at(Tok::ident) && peek().text == s; }

  const Token& take() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string& msg, const Token& t) const {
    throw ParseError(msg, t.line, t.column);
  }

  const Token& expect(Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what + ", found " + describe(peek()), peek());
    return take();
  }

  void expect_end() {
    if (!at(Tok::end)) fail("unexpected " + describe(peek()), peek());
  }

  // -- contracts -----------------------------------------------------------

  Contract contract() {
    auto lhs = reparation();
    if (at(Tok::semicolon)) {
      take();
      return seq(std::move(lhs), contract());
    }
    return lhs;
  }

  Contract reparation() {
    auto lhs = conjunction();
    while (at(Tok::repair)) {
      take();
      lhs = rep(std::move(lhs), conjunction());
    }
    return lhs;
  }

  Contract conjunction() {
    auto lhs = unary();
    while (at(Tok::wedge)) {
      take();
      lhs = conj(std::move(lhs), unary());
    }
    return lhs;
  }

  Contract unary() {
    if (at(Tok::langle)) {
      take();
      auto re = regex();
      expect(Tok::rangle, "'>' closing trigger");
      return trigger(std::move(re), unary());
    }
    if (at_ident("rec")) {
      take();
      const auto& name = expect(Tok::ident, "recursion variable");
      std::string n = name.text;
      expect(Tok::dot, "'.' after recursion variable");
      return rec(std::move(n), contract());
    }
    if (auto re = try_guard_regex()) {
      return guarded(std::move(*re), unary());
    }
    return primary();
  }

  // A guard starts with an undelimited regex; speculatively parse one and
  // accept it only if `~>` follows.
  std::optional<Regex> try_guard_regex() {
    if (!(at(Tok::ident) || at(Tok::lparen) || at(Tok::lbracket) || at(Tok::bang))) return std::nullopt;
    const auto saved = pos_;
    try {
      auto re = regex();
      if (at(Tok::leadsto)) {
        take();
        return re;
      }
    } catch (const ParseError&) {
    }
    pos_ = saved;
    return std::nullopt;
  }

  static std::optional<std::pair<char, Party>> norm_head(const std::string& s) {
    if (s.size() != 3 || s[1] != '_') return std::nullopt;
    if (s[0] != 'O' && s[0] != 'F' && s[0] != 'P') return std::nullopt;
    if (s[2] != '0' && s[2] != '1') return std::nullopt;
    return std::make_pair(s[0], s[2] == '0' ? Party::zero : Party::one);
  }

  Contract primary() {
    const Token& t = peek();
    if (t.kind == Tok::lparen) {
      take();
      auto c = contract();
      expect(Tok::rparen, "')'");
      return c;
    }
    if (t.kind != Tok::ident) fail("expected a contract, found " + describe(t), t);
    if (t.text == "TOP") {
      take();
      return top();
    }
    if (t.text == "BOT") {
      take();
      return bottom();
    }
    if (auto head = norm_head(t.text); head && peek(1).kind == Tok::lparen) {
      take();
      take();
      const Token& act = expect(Tok::ident, "action name");
      auto id = sigma_.find(act.text);
      if (!id) fail("undeclared action '" + act.text + "'", act);
      expect(Tok::rparen, "')' closing norm");
      switch (head->first) {
        case 'O': return obligation(head->second, *id);
        case 'F': return prohibition(head->second, *id);
        default: return permission(head->second, *id);
      }
    }
    const Token& name = take();
    if (name.text == "rec" || name.text == "true" || name.text == "false")
      fail("unexpected keyword '" + name.text + "'", name);
    return var(name.text);
  }

  // -- regexes -------------------------------------------------------------

  static bool starts_operand(Tok k) {
    return k == Tok::ident || k == Tok::lparen || k == Tok::lbracket || k == Tok::bang;
  }

  Regex regex() {
    auto lhs = regex_seq();
    while (at(Tok::plus) && starts_operand(peek(1).kind)) {
      take();
      lhs = re_choice(std::move(lhs), regex_seq());
    }
    return lhs;
  }

  Regex regex_seq() {
    auto lhs = regex_post();
    while (at(Tok::semicolon)) {
      take();
      lhs = re_seq(std::move(lhs), regex_post());
    }
    return lhs;
  }

  Regex regex_post() {
    auto r = regex_prim();
    while (at(Tok::plus) && !starts_operand(peek(1).kind)) {
      take();
      r = re_plus(std::move(r));
    }
    return r;
  }

  Regex regex_prim() {
    if (at(Tok::lparen)) {
      take();
      auto r = regex();
      expect(Tok::rparen, "')'");
      return r;
    }
    return re_atom(regex_atom());
  }

  Guard regex_atom() {
    if (at(Tok::bang)) {
      take();
      return negate(regex_atom());
    }
    if (at(Tok::lbracket)) {
      take();
      auto g = guard_expr();
      expect(Tok::rbracket, "']'");
      return g;
    }
    return guard_literal();
  }

  Guard guard_literal() {
    const Token& t = expect(Tok::ident, "labeled action");
    if (t.text == "true") return Guard::truth();
    if (t.text == "false") return Guard::falsity();
    auto us = t.text.rfind('_');
    if (us == std::string::npos || us + 2 != t.text.size() || (t.text.back() != '0' && t.text.back() != '1'))
      fail("expected labeled action name_0 or name_1, found '" + t.text + "'", t);
    auto id = sigma_.find(t.text.substr(0, us));
    if (!id) fail("undeclared action '" + t.text.substr(0, us) + "'", t);
    return Guard::atom(*id, t.text.back() == '0' ? Party::zero : Party::one);
  }

  // -- guard formulas --------------------------------------------------------

  Guard guard_expr() {
    auto lhs = guard_or();
    if (at(Tok::arrow)) {
      take();
      return implies(lhs, guard_expr());
    }
    return lhs;
  }

  Guard guard_or() {
    auto lhs = guard_and();
    while (at(Tok::bar)) {
      take();
      lhs = disj(lhs, guard_and());
    }
    return lhs;
  }

  Guard guard_and() {
    auto lhs = guard_not();
    while (at(Tok::amp)) {
      take();
      lhs = conj(lhs, guard_not());
    }
    return lhs;
  }

  Guard guard_not() {
    if (at(Tok::bang)) {
      take();
      return negate(guard_not());
    }
    if (at(Tok::lparen)) {
      take();
      auto g = guard_expr();
      expect(Tok::rparen, "')'");
      return g;
    }
    return guard_literal();
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Alphabet& sigma_;
};

}  // namespace

Contract parse_contract(std::string_view text, const Alphabet& sigma) {
  return Parser(lex(text), sigma).contract_eof();
}

Regex parse_regex(std::string_view text, const Alphabet& sigma) { return Parser(lex(text), sigma).regex_eof(); }

Guard parse_guard(std::string_view text, const Alphabet& sigma) { return Parser(lex(text), sigma).guard_eof(); }

ContractFile parse_contract_file(std::string_view text) {
  // Locate the header: first line that is not blank or a comment.
  std::size_t pos = 0;
  int line = 1;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    auto raw = text.substr(pos, eol - pos);
    auto first = raw.find_first_not_of(" \t\r");
    if (first != std::string_view::npos && raw[first] != '#') break;
    pos = eol + 1;
    ++line;
  }
  if (pos >= text.size()) throw ParseError("missing 'alphabet:' header", line, 1);
  auto eol = text.find('\n', pos);
  if (eol == std::string_view::npos) eol = text.size();
  auto header = lex(text.substr(pos, eol - pos), line);

  std::size_t k = 0;
  if (header[k].kind != Tok::ident || header[k].text != "alphabet")
    throw ParseError("expected 'alphabet:' header", header[k].line, header[k].column);
  ++k;
  if (header[k].kind != Tok::colon) throw ParseError("expected ':' after 'alphabet'", header[k].line, header[k].column);
  ++k;
  std::vector<std::string> names;
  while (header[k].kind != Tok::end) {
    if (header[k].kind != Tok::ident) throw ParseError("expected action name", header[k].line, header[k].column);
    if (!valid_action_name(header[k].text))
      throw ParseError("invalid action name '" + header[k].text + "'", header[k].line, header[k].column);
    names.push_back(header[k].text);
    ++k;
    if (header[k].kind == Tok::comma) ++k;
  }
  if (names.empty()) throw ParseError("alphabet must not be empty", line, 1);
  Alphabet sigma;
  try {
    sigma = Alphabet(names);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), line, 1);
  }
  auto body = eol < text.size() ? text.substr(eol + 1) : std::string_view{};
  auto contract = Parser(lex(body, line + 1), sigma).contract_eof();
  return {std::move(sigma), std::move(contract)};
}

}  // namespace cdl
