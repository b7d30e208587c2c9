#ifndef NVGEN_LEXER_HPP
#define NVGEN_LEXER_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "nvgen/ast.hpp"

namespace nvgen {

struct SyntaxError : std::runtime_error {
  SourcePos pos;
  std::string expected;
  SyntaxError(SourcePos p, const std::string& msg, std::string exp = "")
      : std::runtime_error("syntax error at " + std::to_string(p.line) + ":" +
                           std::to_string(p.col) + ": " + msg +
                           (exp.empty() ? "" : " (expected " + exp + ")")),
        pos(p),
        expected(std::move(exp)) {}
};

enum class Tok {
  Eof,
  Ident,
  IntLit,
  StringLit,
  // keywords
  KwClass, KwInterface, KwImplements, KwTest, KwStatic, KwPublic, KwPrivate,
  KwInt, KwBool, KwString, KwVoid, KwTrue, KwFalse, KwNull, KwThis, KwNew,
  KwIf, KwElse, KwWhile, KwFor, KwReturn, KwBreak, KwContinue, KwTry, KwCatch,
  KwThrow, KwAssert,
  // punctuation
  LBrace, RBrace, LParen, RParen, Semi, Comma, Dot, Colon, Question,
  Assign, PlusAssign, MinusAssign, PlusPlus, MinusMinus,
  Plus, Minus, Star, Slash, Percent,
  Lt, Le, Gt, Ge, EqEq, NotEq, AndAnd, OrOr, Bang,
};

struct Token {
  Tok kind = Tok::Eof;
  std::string text;
  long long intValue = 0;
  SourcePos pos;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  std::vector<Token> tokenize() {
    std::vector<Token> out;
    for (;;) {
      skipWhitespaceAndComments();
      Token t = next();
      out.push_back(t);
      if (t.kind == Tok::Eof) break;
    }
    return out;
  }

 private:
  const std::string& src_;
  size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;

  SourcePos here() const { return {line_, col_}; }

  char peek(size_t off = 0) const {
    return i_ + off < src_.size() ? src_[i_ + off] : '\0';
  }

  char advance() {
    char c = src_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skipWhitespaceAndComments() {
    for (;;) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (peek() != '\n' && peek() != '\0') advance();
      } else if (c == '/' && peek(1) == '*') {
        SourcePos start = here();
        advance();
        advance();
        while (!(peek() == '*' && peek(1) == '/')) {
          if (peek() == '\0') throw SyntaxError(start, "unterminated block comment");
          advance();
        }
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  Token next() {
    SourcePos pos = here();
    char c = peek();
    if (c == '\0') return {Tok::Eof, "", 0, pos};

    if (isalpha(static_cast<unsigned char>(c)) || c == '_') return identOrKeyword(pos);
    if (isdigit(static_cast<unsigned char>(c))) return intLiteral(pos);
    if (c == '"') return stringLiteral(pos);

    advance();
    switch (c) {
      case '{': return {Tok::LBrace, "{", 0, pos};
      case '}': return {Tok::RBrace, "}", 0, pos};
      case '(': return {Tok::LParen, "(", 0, pos};
      case ')': return {Tok::RParen, ")", 0, pos};
      case ';': return {Tok::Semi, ";", 0, pos};
      case ',': return {Tok::Comma, ",", 0, pos};
      case '.': return {Tok::Dot, ".", 0, pos};
      case ':': return {Tok::Colon, ":", 0, pos};
      case '?': return {Tok::Question, "?", 0, pos};
      case '+':
        if (peek() == '+') { advance(); return {Tok::PlusPlus, "++", 0, pos}; }
        if (peek() == '=') { advance(); return {Tok::PlusAssign, "+=", 0, pos}; }
        return {Tok::Plus, "+", 0, pos};
      case '-':
        if (peek() == '-') { advance(); return {Tok::MinusMinus, "--", 0, pos}; }
        if (peek() == '=') { advance(); return {Tok::MinusAssign, "-=", 0, pos}; }
        return {Tok::Minus, "-", 0, pos};
      case '*': return {Tok::Star, "*", 0, pos};
      case '/': return {Tok::Slash, "/", 0, pos};
      case '%': return {Tok::Percent, "%", 0, pos};
      case '<':
        if (peek() == '=') { advance(); return {Tok::Le, "<=", 0, pos}; }
        return {Tok::Lt, "<", 0, pos};
      case '>':
        if (peek() == '=') { advance(); return {Tok::Ge, ">=", 0, pos}; }
        return {Tok::Gt, ">", 0, pos};
      case '=':
        if (peek() == '=') { advance(); return {Tok::EqEq, "==", 0, pos}; }
        return {Tok::Assign, "=", 0, pos};
      case '!':
        if (peek() == '=') { advance(); return {Tok::NotEq, "!=", 0, pos}; }
        return {Tok::Bang, "!", 0, pos};
      case '&':
        if (peek() == '&') { advance(); return {Tok::AndAnd, "&&", 0, pos}; }
        throw SyntaxError(pos, "stray '&'", "'&&'");
      case '|':
        if (peek() == '|') { advance(); return {Tok::OrOr, "||", 0, pos}; }
        throw SyntaxError(pos, "stray '|'", "'||'");
      default:
        throw SyntaxError(pos, std::string("unexpected character '") + c + "'");
    }
  }

  Token identOrKeyword(SourcePos pos) {
    std::string s;
    while (isalnum(static_cast<unsigned char>(peek())) || peek() == '_') s += advance();
    static const std::pair<const char*, Tok> keywords[] = {
        {"class", Tok::KwClass},     {"interface", Tok::KwInterface},
        {"implements", Tok::KwImplements}, {"test", Tok::KwTest},
        {"static", Tok::KwStatic},   {"public", Tok::KwPublic},
        {"private", Tok::KwPrivate}, {"int", Tok::KwInt},
        {"bool", Tok::KwBool},       {"string", Tok::KwString},
        {"void", Tok::KwVoid},       {"true", Tok::KwTrue},
        {"false", Tok::KwFalse},     {"null", Tok::KwNull},
        {"this", Tok::KwThis},       {"new", Tok::KwNew},
        {"if", Tok::KwIf},           {"else", Tok::KwElse},
        {"while", Tok::KwWhile},     {"for", Tok::KwFor},
        {"return", Tok::KwReturn},   {"break", Tok::KwBreak},
        {"continue", Tok::KwContinue}, {"try", Tok::KwTry},
        {"catch", Tok::KwCatch},     {"throw", Tok::KwThrow},
        {"assert", Tok::KwAssert},
    };
    for (const auto& [kw, tok] : keywords)
      if (s == kw) return {tok, s, 0, pos};
    return {Tok::Ident, s, 0, pos};
  }

  Token intLiteral(SourcePos pos) {
    std::string s;
    while (isdigit(static_cast<unsigned char>(peek()))) s += advance();
    try {
      return {Tok::IntLit, s, std::stoll(s), pos};
    } catch (const std::out_of_range&) {
      throw SyntaxError(pos, "integer literal out of range");
    }
  }

  Token stringLiteral(SourcePos pos) {
    advance();  // opening quote
    std::string s;
    for (;;) {
      char c = peek();
      if (c == '\0' || c == '\n') throw SyntaxError(pos, "unterminated string literal");
      advance();
      if (c == '"') break;
      if (c == '\\') {
        char esc = peek();
        advance();
        switch (esc) {
          case 'n': s += '\n'; break;
          case 't': s += '\t'; break;
          case '\\': s += '\\'; break;
          case '"': s += '"'; break;
          default: throw SyntaxError(pos, std::string("bad escape '\\") + esc + "'");
        }
      } else {
        s += c;
      }
    }
    Token t{Tok::StringLit, s, 0, pos};
    return t;
  }
};

}  // namespace nvgen

#endif  // NVGEN_LEXER_HPP
