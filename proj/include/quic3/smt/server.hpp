#pragma once

// SMT-LIB2 text protocol server for the bundled solver: reads commands from
// an input stream, answers on an output stream (one flush per command).
// Supports the subset the engine emits plus enough extras for hand use:
// set-logic/set-option/set-info, declare-const, declare-fun (0-ary), assert
// with (! t :named L), push/pop, check-sat, get-model, get-unsat-core,
// reset, echo, exit.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "quic3/parser.hpp"
#include "quic3/printer.hpp"
#include "quic3/sexpr.hpp"
#include "quic3/smt/ground_solver.hpp"
#include "quic3/solver.hpp"

namespace quic3::smt {

class Server {
 public:
  Server(std::istream &in, std::ostream &out) : in_(in), out_(out) { reset(); }

  int run() {
    std::string buffer;
    int depth = 0;
    char ch;
    bool in_comment = false;
    while (in_.get(ch)) {
      if (in_comment) {
        if (ch == '\n') in_comment = false;
        continue;
      }
      if (ch == ';' && depth == 0 && buffer.empty()) {
        in_comment = true;
        continue;
      }
      buffer.push_back(ch);
      if (ch == '(') ++depth;
      if (ch == ')') {
        --depth;
        if (depth == 0) {
          if (!dispatch(buffer)) return 0;
          buffer.clear();
        }
      }
    }
    return 0;
  }

 private:
  struct Frame {
    size_t n_asserts;
  };

  void reset() {
    asserts_.clear();
    frames_.clear();
    syms_ = SymbolTable{};
    decls_.clear();
    label_counter_ = 0;
    last_ = {};
    has_last_ = false;
  }

  bool dispatch(const std::string &text) {
    SExpr cmd;
    try {
      SExprReader r(text);
      if (!r.next(cmd)) return true;
      return exec(cmd);
    } catch (const ParseError &e) {
      error(e.what());
      return true;
    }
  }

  bool exec(const SExpr &cmd) {
    if (!cmd.is_list || cmd.size() == 0 || cmd[0].is_list) {
      error("malformed command");
      return true;
    }
    const std::string &head = cmd[0].atom;
    try {
      if (head == "exit") return false;
      if (head == "reset") {
        reset();
        return true;
      }
      if (head == "set-logic" || head == "set-option" || head == "set-info") return true;
      if (head == "echo") {
        out_ << (cmd.size() > 1 ? cmd[1].atom : "") << std::endl;
        return true;
      }
      if (head == "declare-const" || head == "declare-fun") {
        size_t sort_at = head == "declare-const" ? 2 : 3;
        if (cmd.size() != sort_at + 1 || (head == "declare-fun" && cmd[2].size() != 0)) {
          error("bad declaration");
          return true;
        }
        Sort s = parse_sort(cmd[sort_at]);
        const std::string &name = cmd[1].atom;
        syms_.declare(name, mk_const(name, s));
        decls_.push_back(name);
        return true;
      }
      if (head == "assert") {
        if (cmd.size() != 2) {
          error("assert expects one argument");
          return true;
        }
        const SExpr *body = &cmd[1];
        std::string label = "a!" + std::to_string(label_counter_++);
        if (body->is_list && body->size() >= 1 && (*body)[0].is_atom("!")) {
          for (size_t i = 2; i + 1 < body->size(); i += 2)
            if ((*body)[i].is_atom(":named")) label = (*body)[i + 1].atom;
          body = &(*body)[1];
        }
        TermParser p(syms_);
        asserts_.push_back(Assertion{label, p.parse(*body)});
        return true;
      }
      if (head == "push") {
        int n = cmd.size() > 1 ? std::stoi(cmd[1].atom) : 1;
        for (int i = 0; i < n; ++i) frames_.push_back(Frame{asserts_.size()});
        return true;
      }
      if (head == "pop") {
        int n = cmd.size() > 1 ? std::stoi(cmd[1].atom) : 1;
        for (int i = 0; i < n; ++i) {
          if (frames_.empty()) {
            error("pop without matching push");
            return true;
          }
          asserts_.resize(frames_.back().n_asserts);
          frames_.pop_back();
        }
        return true;
      }
      if (head == "check-sat") {
        GroundSolver gs;
        auto out = gs.solve(asserts_);
        has_last_ = true;
        last_ = out;
        switch (out.res) {
          case GroundSolver::Res::Sat: out_ << "sat" << std::endl; break;
          case GroundSolver::Res::Unsat: out_ << "unsat" << std::endl; break;
          case GroundSolver::Res::Unknown: out_ << "unknown" << std::endl; break;
        }
        return true;
      }
      if (head == "get-model") {
        if (!has_last_ || last_.res != GroundSolver::Res::Sat) {
          error("no model available");
          return true;
        }
        print_model();
        return true;
      }
      if (head == "get-unsat-core") {
        if (!has_last_ || last_.res != GroundSolver::Res::Unsat) {
          error("no core available");
          return true;
        }
        out_ << "(";
        for (size_t i = 0; i < asserts_.size(); ++i) out_ << (i ? " " : "") << asserts_[i].label;
        out_ << ")" << std::endl;
        return true;
      }
      error("unsupported command '" + head + "'");
      return true;
    } catch (const ParseError &e) {
      error(e.what());
      return true;
    } catch (const std::exception &e) {
      error(e.what());
      return true;
    }
  }

  void print_model() {
    out_ << "(model";
    for (const std::string &name : decls_) {
      TermRef c = syms_.lookup(name);
      switch (c->sort) {
        case Sort::Int: {
          auto it = last_.model.ints.find(name);
          int64_t v = it == last_.model.ints.end() ? 0 : it->second;
          out_ << " (define-fun " << name << " () Int " << lit(v) << ")";
          break;
        }
        case Sort::Bool: {
          auto it = last_.model.bools.find(name);
          bool v = it != last_.model.bools.end() && it->second;
          out_ << " (define-fun " << name << " () Bool " << (v ? "true" : "false") << ")";
          break;
        }
        case Sort::Array: {
          ArrayVal av;
          auto it = last_.model.arrays.find(name);
          if (it != last_.model.arrays.end()) av = it->second;
          std::string body = "((as const (Array Int Int)) " + lit(av.def) + ")";
          for (auto &[i, v] : av.exc)
            body = "(store " + body + " " + lit(i) + " " + lit(v) + ")";
          out_ << " (define-fun " << name << " () (Array Int Int) " << body << ")";
          break;
        }
      }
    }
    out_ << ")" << std::endl;
  }

  static std::string lit(int64_t v) {
    if (v < 0) return "(- " + std::to_string(-v) + ")";
    return std::to_string(v);
  }

  void error(const std::string &msg) {
    std::string safe = msg;
    for (char &c : safe)
      if (c == '"') c = '\'';
    out_ << "(error \"" << safe << "\")" << std::endl;
  }

  std::istream &in_;
  std::ostream &out_;
  std::vector<Assertion> asserts_;
  std::vector<Frame> frames_;
  SymbolTable syms_;
  std::vector<std::string> decls_;
  int label_counter_ = 0;
  GroundSolver::Outcome last_;
  bool has_last_ = false;
};

}  // namespace quic3::smt
