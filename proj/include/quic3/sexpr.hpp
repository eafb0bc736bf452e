#pragma once

// Position-tracked s-expression reader shared by the problem frontend, the
// SMT-LIB2 process client and the bundled solver.

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace quic3 {

struct SExpr {
  bool is_list = false;
  std::string atom;           // valid when !is_list
  std::vector<SExpr> items;   // valid when is_list
  int line = 0, col = 0;

  bool is_atom(const std::string &s) const { return !is_list && atom == s; }
  const SExpr &operator[](size_t i) const { return items[i]; }
  size_t size() const { return items.size(); }
  std::string str() const {
    if (!is_list) return atom;
    std::string out = "(";
    for (size_t i = 0; i < items.size(); ++i) {
      if (i) out += " ";
      out += items[i].str();
    }
    return out + ")";
  }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string &msg, int line, int col)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
  int line, col;
};

class SExprReader {
 public:
  explicit SExprReader(const std::string &text) : text_(text) {}

  // returns false at end of input
  bool next(SExpr &out) {
    skip_ws();
    if (pos_ >= text_.size()) return false;
    out = read();
    return true;
  }

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    SExpr e;
    while (next(e)) out.push_back(e);
    return out;
  }

 private:
  SExpr read() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", line_, col_);
    SExpr e;
    e.line = line_;
    e.col = col_;
    char c = text_[pos_];
    if (c == '(') {
      advance();
      e.is_list = true;
      while (true) {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unbalanced '('", e.line, e.col);
        if (text_[pos_] == ')') {
          advance();
          return e;
        }
        e.items.push_back(read());
      }
    }
    if (c == ')') throw ParseError("unexpected ')'", line_, col_);
    if (c == '|') {  // quoted symbol
      advance();
      std::string sym;
      while (pos_ < text_.size() && text_[pos_] != '|') {
        sym.push_back(text_[pos_]);
        advance();
      }
      if (pos_ >= text_.size()) throw ParseError("unterminated quoted symbol", e.line, e.col);
      advance();
      e.atom = sym;
      return e;
    }
    if (c == '"') {  // string literal, kept verbatim with quotes
      std::string s = "\"";
      advance();
      while (pos_ < text_.size() && text_[pos_] != '"') {
        s.push_back(text_[pos_]);
        advance();
      }
      if (pos_ >= text_.size()) throw ParseError("unterminated string", e.line, e.col);
      advance();
      e.atom = s + "\"";
      return e;
    }
    std::string atom;
    while (pos_ < text_.size() && !isspace((unsigned char)text_[pos_]) &&
           text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != ';') {
      atom.push_back(text_[pos_]);
      advance();
    }
    e.atom = atom;
    return e;
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (isspace((unsigned char)c)) {
        advance();
      } else {
        return;
      }
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string &text_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

}  // namespace quic3
