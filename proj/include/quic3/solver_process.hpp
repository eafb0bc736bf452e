#pragma once

// External solver session: spawns an SMT-LIB2 solver as a child process and
// talks to it over pipes.  Incremental (push/pop), named assertions for
// cores, per-check deadline enforced by killing the child.  Divisibility
// atoms are expanded to linear form before crossing the pipe.

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "quic3/parser.hpp"
#include "quic3/printer.hpp"
#include "quic3/sexpr.hpp"
#include "quic3/solver.hpp"
#include "quic3/solver_enum.hpp"

namespace quic3 {

class ProcessSession final : public SolverSession {
 public:
  ProcessSession(const std::string &path, const std::vector<std::string> &args,
                 int64_t timeout_ms)
      : path_(path), timeout_ms_(timeout_ms) {
    spawn(args);
    send("(set-option :produce-models true)");
    send("(set-option :produce-unsat-cores true)");
    send("(set-logic ALL)");
  }

  ~ProcessSession() override { shutdown(); }

  ProcessSession(const ProcessSession &) = delete;
  ProcessSession &operator=(const ProcessSession &) = delete;

  void push() override {
    scopes_.push_back({asserts_.size(), declare_order_.size()});
    send("(push 1)");
  }

  void pop() override {
    asserts_.resize(scopes_.back().first);
    // declarations made inside the scope are gone on the solver side too
    while (declare_order_.size() > scopes_.back().second) {
      declared_.erase(declare_order_.back());
      decl_sort_.erase(declare_order_.back());
      declare_order_.pop_back();
    }
    scopes_.pop_back();
    send("(pop 1)");
  }

  void add(const Assertion &a) override {
    check_engine_query_shape(a.term);
    std::vector<TermRef> defs;
    TermRef t = expand_mod_atoms(a.term, defs, mod_counter_);
    declare_consts(t);
    for (TermRef d : defs) declare_consts(d);
    std::ostringstream os;
    os << "(assert (! ";
    print_term(os, t);
    os << " :named " << a.label << "))";
    send(os.str());
    for (size_t i = 0; i < defs.size(); ++i) {
      std::ostringstream ds;
      ds << "(assert (! ";
      print_term(ds, defs[i]);
      ds << " :named " << a.label << "!mod" << i << "))";
      send(ds.str());
    }
    asserts_.push_back(a);
  }

  CheckResult check() override {
    CheckResult out;
    if (dead_) {
      out.res = SatResult::Unknown;
      out.reason = dead_reason_;
      return out;
    }
    deadline_ = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms_);
    try {
      send("(check-sat)");
      std::string verdict = read_token();
      if (verdict == "sat") {
        send("(get-model)");
        SExpr m = read_sexpr();
        out.model = parse_model(m);
        std::string why;
        if (!verify_model(out.model, asserts_, &why)) {
          out.res = SatResult::Unknown;
          out.reason = "backend model rejected: " + why;
          return out;
        }
        out.res = SatResult::Sat;
        return out;
      }
      if (verdict == "unsat") {
        send("(get-unsat-core)");
        SExpr core = read_sexpr();
        out.res = SatResult::Unsat;
        for (const SExpr &e : core.items)
          if (!e.is_list) out.core.push_back(e.atom);
        return out;
      }
      out.res = SatResult::Unknown;
      out.reason = verdict.rfind("(error", 0) == 0 ? verdict : "solver returned " + verdict;
      return out;
    } catch (const std::exception &e) {
      kill_child(std::string("protocol failure: ") + e.what());
      out.res = SatResult::Unknown;
      out.reason = dead_reason_;
      return out;
    }
  }

 private:
  void spawn(const std::vector<std::string> &args) {
    int to_child[2], from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0)
      throw std::runtime_error("pipe failed");
    pid_ = fork();
    if (pid_ < 0) throw std::runtime_error("fork failed");
    if (pid_ == 0) {
      dup2(to_child[0], STDIN_FILENO);
      dup2(from_child[1], STDOUT_FILENO);
      close(to_child[0]);
      close(to_child[1]);
      close(from_child[0]);
      close(from_child[1]);
      std::vector<char *> argv;
      argv.push_back(const_cast<char *>(path_.c_str()));
      for (const std::string &a : args) argv.push_back(const_cast<char *>(a.c_str()));
      argv.push_back(nullptr);
      execvp(path_.c_str(), argv.data());
      // exec failed; exit quietly, parent sees EOF
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    in_fd_ = to_child[1];
    out_fd_ = from_child[0];
  }

  void shutdown() {
    if (pid_ > 0) {
      if (!dead_) {
        const char *bye = "(exit)\n";
        ssize_t ignored = write(in_fd_, bye, strlen(bye));
        (void)ignored;
      }
      close(in_fd_);
      close(out_fd_);
      int status = 0;
      // give it a moment, then force
      for (int i = 0; i < 50; ++i) {
        pid_t r = waitpid(pid_, &status, WNOHANG);
        if (r == pid_) {
          pid_ = -1;
          break;
        }
        usleep(2000);
      }
      if (pid_ > 0) {
        kill(pid_, SIGKILL);
        waitpid(pid_, &status, 0);
        pid_ = -1;
      }
    }
  }

  void kill_child(const std::string &reason) {
    if (pid_ > 0) {
      kill(pid_, SIGKILL);
      int status;
      waitpid(pid_, &status, 0);
      pid_ = -1;
      close(in_fd_);
      close(out_fd_);
    }
    dead_ = true;
    dead_reason_ = reason;
  }

  void send(const std::string &line) {
    if (dead_) return;
    std::string payload = line + "\n";
    size_t off = 0;
    while (off < payload.size()) {
      ssize_t n = write(in_fd_, payload.data() + off, payload.size() - off);
      if (n < 0) {
        kill_child("solver pipe closed");
        throw std::runtime_error(dead_reason_);
      }
      off += size_t(n);
    }
  }

  char read_char() {
    if (pos_ < buf_.size()) return buf_[pos_++];
    struct pollfd pfd {
      out_fd_, POLLIN, 0
    };
    auto now = std::chrono::steady_clock::now();
    int64_t remain =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline_ - now).count();
    if (remain <= 0) {
      kill_child("query timeout");
      throw std::runtime_error("query timeout");
    }
    int pr = poll(&pfd, 1, int(remain));
    if (pr <= 0) {
      kill_child("query timeout");
      throw std::runtime_error("query timeout");
    }
    char tmp[4096];
    ssize_t n = read(out_fd_, tmp, sizeof tmp);
    if (n <= 0) {
      kill_child("solver exited");
      throw std::runtime_error("solver exited");
    }
    buf_.assign(tmp, size_t(n));
    pos_ = 0;
    return buf_[pos_++];
  }

  std::string read_token() {
    std::string tok;
    char c;
    do {
      c = read_char();
    } while (isspace((unsigned char)c));
    if (c == '(') {  // an s-expression answer (e.g. (error ...)); read balanced
      int depth = 1;
      tok.push_back(c);
      while (depth > 0) {
        c = read_char();
        tok.push_back(c);
        if (c == '(') ++depth;
        if (c == ')') --depth;
      }
      return tok;
    }
    tok.push_back(c);
    while (true) {
      c = read_char();
      if (isspace((unsigned char)c)) break;
      tok.push_back(c);
    }
    return tok;
  }

  SExpr read_sexpr() {
    std::string text;
    char c;
    do {
      c = read_char();
    } while (isspace((unsigned char)c));
    if (c != '(') throw std::runtime_error("expected s-expression, got '" + std::string(1, c) + "'");
    int depth = 1;
    text.push_back(c);
    while (depth > 0) {
      c = read_char();
      text.push_back(c);
      if (c == '(') ++depth;
      if (c == ')') --depth;
    }
    SExprReader r(text);
    SExpr e;
    if (!r.next(e)) throw std::runtime_error("empty solver answer");
    if (e.is_list && e.size() >= 1 && e[0].is_atom("error"))
      throw std::runtime_error("solver error: " + e.str());
    return e;
  }

  void declare_consts(TermRef t) {
    for (TermRef c : t->uconsts) {
      std::string n = const_display_name(c);
      if (declared_.count(n)) continue;
      declared_.insert(n);
      declare_order_.push_back(n);
      decl_sort_[n] = c->sort;
      send("(declare-const " + n + " " + sort_name(c->sort) + ")");
    }
  }

  Model parse_model(const SExpr &m) {
    Model out;
    size_t start = 0;
    if (m.size() > 0 && !m[0].is_list && m[0].atom == "model") start = 1;
    for (size_t i = start; i < m.size(); ++i) {
      const SExpr &d = m[i];
      if (!d.is_list || d.size() < 5 || !d[0].is_atom("define-fun")) continue;
      const std::string &name = d[1].atom;
      auto it = decl_sort_.find(name);
      if (it == decl_sort_.end()) continue;  // solver-internal symbol
      const SExpr &body = d[4];
      switch (it->second) {
        case Sort::Int: out.ints[name] = parse_int(body); break;
        case Sort::Bool: out.bools[name] = body.is_atom("true"); break;
        case Sort::Array: out.arrays[name] = parse_array(body); break;
      }
    }
    return out;
  }

  static int64_t parse_int(const SExpr &e) {
    if (!e.is_list) return std::stoll(e.atom);
    if (e.size() == 2 && e[0].is_atom("-")) return -parse_int(e[1]);
    throw std::runtime_error("unparseable integer value " + e.str());
  }

  ArrayVal parse_array(const SExpr &e) {
    // (store <array> i v) chains over ((as const (Array Int Int)) d)
    if (e.is_list && e.size() == 4 && e[0].is_atom("store")) {
      ArrayVal base = parse_array(e[1]);
      return base.write(parse_int(e[2]), parse_int(e[3]));
    }
    if (e.is_list && e.size() == 2 && e[0].is_list && e[0].size() == 3 &&
        e[0][0].is_atom("as") && e[0][1].is_atom("const")) {
      ArrayVal v;
      v.def = parse_int(e[1]);
      return v;
    }
    throw std::runtime_error("unparseable array value " + e.str());
  }

  std::string path_;
  int64_t timeout_ms_;
  pid_t pid_ = -1;
  int in_fd_ = -1, out_fd_ = -1;
  bool dead_ = false;
  std::string dead_reason_;
  std::string buf_;
  size_t pos_ = 0;
  std::chrono::steady_clock::time_point deadline_;
  struct Scope {
    size_t first;
    size_t second;
  };
  std::vector<Assertion> asserts_;
  std::vector<Scope> scopes_;
  std::set<std::string> declared_;
  std::vector<std::string> declare_order_;
  std::map<std::string, Sort> decl_sort_;
  int mod_counter_ = 0;
};

inline std::unique_ptr<SolverSession> SolverFactory::make() const {
  if (cfg_.kind == BackendConfig::Kind::Enumeration)
    return std::make_unique<EnumSession>(cfg_.bound);
  return std::make_unique<ProcessSession>(cfg_.solver_path, cfg_.solver_args,
                                          cfg_.query_timeout_ms);
}

}  // namespace quic3
