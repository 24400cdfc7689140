#include "lexer.hpp"

#include <cctype>
#include <charconv>

namespace dcv::frontend::detail {

std::string_view describe(Tok t) {
  switch (t) {
  case Tok::Ident: return "identifier";
  case Tok::Int: return "integer";
  case Tok::Dot: return "'.'";
  case Tok::LParen: return "'('";
  case Tok::RParen: return "')'";
  case Tok::LBracket: return "'['";
  case Tok::RBracket: return "']'";
  case Tok::Comma: return "','";
  case Tok::Colon: return "':'";
  case Tok::Star: return "'*'";
  case Tok::Turnstile: return "':-'";
  case Tok::Assign: return "'='";
  case Tok::EqEq: return "'=='";
  case Tok::NotEq: return "'!='";
  case Tok::Lt: return "'<'";
  case Tok::Le: return "'<='";
  case Tok::Gt: return "'>'";
  case Tok::Ge: return "'>='";
  case Tok::Plus: return "'+'";
  case Tok::Minus: return "'-'";
  case Tok::Slash: return "'/'";
  case Tok::Underscore: return "'_'";
  case Tok::End: return "end of input";
  }
  return "token";
}

namespace {

class Lexer {
public:
  Lexer(std::string_view src, Diagnostics& diags) : src_(src), diags_(diags) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skipTrivia();
      if (pos_ >= src_.size()) break;
      SourceLoc loc{line_, col_};
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          advance();
        std::string text(src_.substr(start, pos_ - start));
        out.push_back({text == "_" ? Tok::Underscore : Tok::Ident, text, 0, loc});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
          advance();
        std::string text(src_.substr(start, pos_ - start));
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{}) {
          diags_.push_back({loc, Severity::Error, "integer literal out of range: " + text});
        }
        out.push_back({Tok::Int, text, v, loc});
        continue;
      }
      auto two = src_.substr(pos_, 2);
      auto emit = [&](Tok k, std::size_t n) {
        out.push_back({k, std::string(src_.substr(pos_, n)), 0, loc});
        for (std::size_t i = 0; i < n; ++i) advance();
      };
      if (two == ":-") { emit(Tok::Turnstile, 2); continue; }
      if (two == "==") { emit(Tok::EqEq, 2); continue; }
      if (two == "!=") { emit(Tok::NotEq, 2); continue; }
      if (two == "<=") { emit(Tok::Le, 2); continue; }
      if (two == ">=") { emit(Tok::Ge, 2); continue; }
      switch (c) {
      case '.': emit(Tok::Dot, 1); continue;
      case '(': emit(Tok::LParen, 1); continue;
      case ')': emit(Tok::RParen, 1); continue;
      case '[': emit(Tok::LBracket, 1); continue;
      case ']': emit(Tok::RBracket, 1); continue;
      case ',': emit(Tok::Comma, 1); continue;
      case ':': emit(Tok::Colon, 1); continue;
      case '*': emit(Tok::Star, 1); continue;
      case '=': emit(Tok::Assign, 1); continue;
      case '<': emit(Tok::Lt, 1); continue;
      case '>': emit(Tok::Gt, 1); continue;
      case '+': emit(Tok::Plus, 1); continue;
      case '-': emit(Tok::Minus, 1); continue;
      case '/': emit(Tok::Slash, 1); continue;
      default: break;
      }
      diags_.push_back({loc, Severity::Error,
                        std::string("unexpected character '") + c + "'"});
      advance();
    }
    out.push_back({Tok::End, "", 0, {line_, col_}});
    return out;
  }

private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skipTrivia() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (src_.substr(pos_, 2) == "//") {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (src_.substr(pos_, 2) == "/*") {
        SourceLoc loc{line_, col_};
        advance();
        advance();
        while (pos_ < src_.size() && src_.substr(pos_, 2) != "*/") advance();
        if (pos_ >= src_.size()) {
          diags_.push_back({loc, Severity::Error, "unterminated block comment"});
          return;
        }
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  Diagnostics& diags_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

} // namespace

std::vector<Token> lex(std::string_view src, Diagnostics& diags) {
  return Lexer(src, diags).run();
}

} // namespace dcv::frontend::detail
