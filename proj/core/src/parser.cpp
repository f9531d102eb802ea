#include <charconv>
#include <string>
#include <system_error>

#include "fuzzyclin/rulebase.hpp"

namespace fuzzyclin {
namespace {

enum class Tok {
  kIdent,
  kNumber,
  kString,
  kLBrace,
  kRBrace,
  kLParen,
  kRParen,
  kLess,
  kSemicolon,
  kIf,
  kThen,
  kIs,
  kAnd,
  kOr,
  kNot,
  kEnd,
};

struct Token {
  Tok kind = Tok::kEnd;
  std::string_view text;
  SourceLoc loc;
  double number = 0.0;
  std::string string_value;
};

struct Failure {
  Diagnostic diagnostic;
};

[[noreturn]] void fail(SourceLoc loc, std::string message) {
  throw Failure{Diagnostic{DiagCode::kSyntaxError, std::move(message), loc}};
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::kEnd: return "end of input";
    case Tok::kString: return "string literal";
    default: return "'" + std::string(t.text) + "'";
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_trivia();
    Token t;
    t.loc = {line_, column_};
    if (pos_ >= src_.size()) return t;

    const std::size_t start = pos_;
    const char c = src_[pos_];
    auto single = [&](Tok kind) {
      advance();
      t.kind = kind;
      t.text = src_.substr(start, 1);
      return t;
    };
    switch (c) {
      case '{': return single(Tok::kLBrace);
      case '}': return single(Tok::kRBrace);
      case '(': return single(Tok::kLParen);
      case ')': return single(Tok::kRParen);
      case '<': return single(Tok::kLess);
      case ';': return single(Tok::kSemicolon);
      case '"': return lex_string(t);
      default: break;
    }
    if (c == '-' || is_digit(c)) return lex_number(t);
    if (is_ident_start(c)) return lex_word(t);
    fail(t.loc, "unexpected character '" + printable(c) + "'");
  }

 private:
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

  static std::string printable(char c) {
    const auto u = static_cast<unsigned char>(c);
    if (u >= 0x20 && u < 0x7f) return std::string(1, c);
    static const char* hex = "0123456789abcdef";
    return std::string("\\x") + hex[u >> 4] + hex[u & 0xf];
  }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  Token lex_number(Token& t) {
    const std::size_t start = pos_;
    if (peek() == '-') advance();
    if (!is_digit(peek())) fail(t.loc, "expected digits in number");
    while (is_digit(peek())) advance();
    if (peek() == '.') {
      advance();
      if (!is_digit(peek())) fail({line_, column_}, "expected digits after decimal point");
      while (is_digit(peek())) advance();
    }
    if (is_ident_char(peek()) || peek() == '.')
      fail({line_, column_}, "malformed number (only plain decimals are allowed)");
    t.kind = Tok::kNumber;
    t.text = src_.substr(start, pos_ - start);
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size())
      fail(t.loc, "number out of range: " + std::string(t.text));
    return t;
  }

  Token lex_word(Token& t) {
    const std::size_t start = pos_;
    bool upper = false;
    while (is_ident_char(peek())) {
      upper = upper || (peek() >= 'A' && peek() <= 'Z');
      advance();
    }
    t.text = src_.substr(start, pos_ - start);
    if (upper) fail(t.loc, "identifiers must be lowercase: '" + std::string(t.text) + "'");
    t.kind = Tok::kIdent;
    if (t.text == "if") t.kind = Tok::kIf;
    else if (t.text == "then") t.kind = Tok::kThen;
    else if (t.text == "is") t.kind = Tok::kIs;
    else if (t.text == "and") t.kind = Tok::kAnd;
    else if (t.text == "or") t.kind = Tok::kOr;
    else if (t.text == "not") t.kind = Tok::kNot;
    return t;
  }

  Token lex_string(Token& t) {
    const std::size_t start = pos_;
    advance();  // opening quote
    std::string value;
    for (;;) {
      if (pos_ >= src_.size() || peek() == '\n') fail(t.loc, "unterminated string literal");
      const char c = peek();
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\') {
        const SourceLoc esc{line_, column_};
        advance();
        if (pos_ >= src_.size()) fail(t.loc, "unterminated string literal");
        switch (peek()) {
          case '"': value += '"'; break;
          case '\\': value += '\\'; break;
          case 'n': value += '\n'; break;
          case 't': value += '\t'; break;
          default: fail(esc, "unknown escape sequence in string");
        }
        advance();
        continue;
      }
      value += c;
      advance();
    }
    t.kind = Tok::kString;
    t.text = src_.substr(start, pos_ - start);
    t.string_value = std::move(value);
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { tok_ = lexer_.next(); }

  DiseaseKB parse() {
    DiseaseKB kb;
    parse_header(kb);
    if (!at_word("input")) fail(tok_.loc, "expected 'input' but found " + describe(tok_));
    while (at_word("input")) kb.inputs.push_back(parse_variable("input"));
    if (!at_word("output"))
      fail(tok_.loc, "expected 'input' or 'output' but found " + describe(tok_));
    kb.output = parse_variable("output");
    parse_rules(kb);
    parse_bands(kb);
    if (at_word("info")) {
      advance();
      kb.info = expect(Tok::kString, "info text").string_value;
    }
    if (tok_.kind != Tok::kEnd) fail(tok_.loc, "expected end of input but found " + describe(tok_));
    return kb;
  }

 private:
  static constexpr int kMaxDepth = 200;

  void advance() { tok_ = lexer_.next(); }

  bool at_word(std::string_view word) const {
    return tok_.kind == Tok::kIdent && tok_.text == word;
  }

  Token expect(Tok kind, std::string_view what) {
    if (tok_.kind != kind)
      fail(tok_.loc, "expected " + std::string(what) + " but found " + describe(tok_));
    Token t = std::move(tok_);
    advance();
    return t;
  }

  void expect_word(std::string_view word) {
    if (!at_word(word))
      fail(tok_.loc, "expected '" + std::string(word) + "' but found " + describe(tok_));
    advance();
  }

  double number(std::string_view what) { return expect(Tok::kNumber, what).number; }

  void parse_header(DiseaseKB& kb) {
    expect_word("disease");
    kb.name = expect(Tok::kString, "disease display name").string_value;
    expect_word("id");
    kb.id = std::string(expect(Tok::kIdent, "disease id").text);
    if (at_word("monotone")) {
      kb.monotone = true;
      advance();
    }
  }

  LinguisticVariable parse_variable(std::string_view keyword) {
    LinguisticVariable var;
    expect_word(keyword);
    const Token name = expect(Tok::kIdent, "variable name");
    var.name = std::string(name.text);
    var.loc = name.loc;
    expect_word("range");
    var.universe.lo = number("range lower bound");
    var.universe.hi = number("range upper bound");
    expect(Tok::kLBrace, "'{'");
    if (!at_word("term")) fail(tok_.loc, "expected 'term' but found " + describe(tok_));
    while (at_word("term")) var.terms.push_back(parse_term());
    expect(Tok::kRBrace, "'term' or '}'");
    return var;
  }

  LinguisticTerm parse_term() {
    LinguisticTerm term;
    expect_word("term");
    const Token name = expect(Tok::kIdent, "term name");
    term.name = std::string(name.text);
    term.loc = name.loc;
    if (at_word("tri")) {
      advance();
      const double a = number("triangle parameter");
      const double b = number("triangle parameter");
      const double c = number("triangle parameter");
      term.mf = MembershipFunction::triangular(a, b, c);
    } else if (at_word("trap")) {
      advance();
      const double a = number("trapezoid parameter");
      const double b = number("trapezoid parameter");
      const double c = number("trapezoid parameter");
      const double d = number("trapezoid parameter");
      term.mf = MembershipFunction::trapezoidal(a, b, c, d);
    } else {
      fail(tok_.loc, "expected shape 'tri' or 'trap' but found " + describe(tok_));
    }
    return term;
  }

  void parse_rules(DiseaseKB& kb) {
    expect_word("rules");
    expect(Tok::kLBrace, "'{'");
    if (tok_.kind != Tok::kIf) fail(tok_.loc, "expected 'if' but found " + describe(tok_));
    while (tok_.kind == Tok::kIf) kb.rules.push_back(parse_rule());
    expect(Tok::kRBrace, "'if' or '}'");
  }

  Rule parse_rule() {
    const SourceLoc loc = tok_.loc;
    expect(Tok::kIf, "'if'");
    Expr antecedent = parse_disjunction(0);
    expect(Tok::kThen, "'then'");
    const Token var = expect(Tok::kIdent, "output variable name");
    expect(Tok::kIs, "'is'");
    const Token term = expect(Tok::kIdent, "output term name");
    Rule rule{std::move(antecedent), std::string(var.text), std::string(term.text),
              std::nullopt, loc, var.loc};
    if (tok_.kind == Tok::kString) {
      rule.label = tok_.string_value;
      advance();
    }
    return rule;
  }

  Expr parse_disjunction(int depth) {
    Expr lhs = parse_conjunction(depth);
    while (tok_.kind == Tok::kOr) {
      advance();
      lhs = Expr::disj(std::move(lhs), parse_conjunction(depth));
    }
    return lhs;
  }

  Expr parse_conjunction(int depth) {
    Expr lhs = parse_unary(depth);
    while (tok_.kind == Tok::kAnd) {
      advance();
      lhs = Expr::conj(std::move(lhs), parse_unary(depth));
    }
    return lhs;
  }

  Expr parse_unary(int depth) {
    if (depth > kMaxDepth) fail(tok_.loc, "expression nested too deeply");
    if (tok_.kind == Tok::kNot) {
      advance();
      return Expr::negate(parse_unary(depth + 1));
    }
    if (tok_.kind == Tok::kLParen) {
      advance();
      Expr inner = parse_disjunction(depth + 1);
      expect(Tok::kRParen, "')'");
      return inner;
    }
    const Token var = expect(Tok::kIdent, "variable name, 'not' or '('");
    expect(Tok::kIs, "'is'");
    const Token term = expect(Tok::kIdent, "term name");
    return Expr::atom(std::string(var.text), std::string(term.text), var.loc);
  }

  void parse_bands(DiseaseKB& kb) {
    kb.bands.loc = tok_.loc;
    expect_word("bands");
    expect(Tok::kLBrace, "'{'");
    expect_word("not_injected");
    expect(Tok::kLess, "'<'");
    kb.bands.t1 = number("band threshold");
    expect(Tok::kSemicolon, "';'");
    expect_word("need_analysis");
    expect(Tok::kLess, "'<'");
    kb.bands.t2 = number("band threshold");
    expect(Tok::kRBrace, "'}'");
  }

  Lexer lexer_;
  Token tok_;
};

}  // namespace

DiseaseKB parse_kb_unchecked(std::string_view text) {
  try {
    return Parser(text).parse();
  } catch (Failure& f) {
    throw KbError({std::move(f.diagnostic)});
  }
}

DiseaseKB parse_kb(std::string_view text) {
  DiseaseKB kb = parse_kb_unchecked(text);
  if (auto diags = validate_kb(kb); !diags.empty()) throw KbError(std::move(diags));
  return kb;
}

}  // namespace fuzzyclin
