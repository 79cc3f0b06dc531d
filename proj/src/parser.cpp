#include "ccpslice/parser.hpp"

#include <cctype>
#include <charconv>
#include <set>

namespace ccpslice {

namespace {

enum class Tok { Ident, Int, Sym, End };

struct Lexeme {
  Tok kind = Tok::End;
  std::string text;
  SourcePos pos;
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw{"tell", "ask",  "local", "in",  "next", "unless", "skip", "exists",
                                        "true", "false", "def",  "var", "run",  "system", "rule", "timed"};
  return kw;
}

std::vector<Lexeme> lex(std::string_view src) {
  std::vector<Lexeme> out;
  int line = 1;
  int col = 1;
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
  static const char* const two_char[] = {"<=", ">=", "=>", "||", "/\\"};
  while (i < src.size()) {
    char ch = src[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(1);
      continue;
    }
    if (ch == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    SourcePos pos{line, col};
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), pos});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Int, std::string(src.substr(i, j - i)), pos});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (const char* op : two_char) {
      if (src.substr(i, 2) == op) {
        out.push_back({Tok::Sym, op, pos});
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("(),.+-*=<>!^").find(ch) != std::string_view::npos) {
      out.push_back({Tok::Sym, std::string(1, ch), pos});
      advance(1);
      continue;
    }
    throw SyntaxError(pos, std::string("unexpected character '") + ch + "'");
  }
  out.push_back({Tok::End, "", {line, col}});
  return out;
}

class Parser {
 public:
  Parser(std::string_view src, bool allow_hole) : toks_(lex(src)), allow_hole_(allow_hole) {}

  const Lexeme& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Tok::End; }
  bool is_sym(const char* s, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Sym && peek(ahead).text == s;
  }
  bool is_kw(const char* s, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Ident && peek(ahead).text == s;
  }
  bool is_name(std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Ident && !keywords().contains(peek(ahead).text);
  }

  [[noreturn]] void fail(const std::string& expected) const {
    const Lexeme& l = peek();
    std::string found = l.kind == Tok::End ? "end of input" : "'" + l.text + "'";
    throw SyntaxError(l.pos, "expected " + expected + ", found " + found);
  }

  void expect_sym(const char* s) {
    if (!is_sym(s)) fail(std::string("'") + s + "'");
    ++pos_;
  }
  void expect_kw(const char* s) {
    if (!is_kw(s)) fail(std::string("'") + s + "'");
    ++pos_;
  }
  std::string expect_name(const char* what) {
    if (!is_name()) fail(what);
    return toks_[pos_++].text;
  }
  VarName expect_var() { return parse_var_name(expect_name("a variable")); }

  std::int64_t expect_int() {
    if (peek().kind != Tok::Int) fail("an integer");
    const Lexeme& l = toks_[pos_++];
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(l.text.data(), l.text.data() + l.text.size(), v);
    if (ec != std::errc() || ptr != l.text.data() + l.text.size()) throw SyntaxError(l.pos, "integer out of range");
    return v;
  }

  std::vector<VarName> var_list_in_parens() {
    std::vector<VarName> out;
    expect_sym("(");
    if (!is_sym(")")) {
      out.push_back(expect_var());
      while (is_sym(",")) {
        ++pos_;
        out.push_back(expect_var());
      }
    }
    expect_sym(")");
    return out;
  }

  // ---- constraints ----

  Constraint constraint() {
    if (is_kw("exists")) {
      ++pos_;
      VarName v = expect_var();
      expect_sym(".");
      return Constraint::exists(std::move(v), constraint());
    }
    Constraint left = catom();
    if (is_sym("/\\")) {
      ++pos_;
      return Constraint::conj(std::move(left), constraint());
    }
    return left;
  }

  Constraint catom() {
    if (is_kw("true")) {
      ++pos_;
      return Constraint::truth();
    }
    if (is_kw("false")) {
      ++pos_;
      return Constraint::falsity();
    }
    if (is_sym("*")) {
      if (!allow_hole_) fail("a constraint ('*' only appears in sliced terms)");
      ++pos_;
      return Constraint::hole();
    }
    if (is_sym("(")) {
      ++pos_;
      Constraint inner = constraint();
      expect_sym(")");
      return inner;
    }
    if (peek().kind == Tok::Int || is_sym("-")) return comparison();
    if (is_name()) {
      if (is_sym("(", 1)) {
        std::string symbol = toks_[pos_++].text;
        return Constraint::token(std::move(symbol), var_list_in_parens());
      }
      if (is_sym("=", 1) || is_sym("<", 1) || is_sym("<=", 1) || is_sym(">", 1) || is_sym(">=", 1) ||
          is_sym("+", 1) || is_sym("-", 1)) {
        return comparison();
      }
      return Constraint::token(toks_[pos_++].text, {});
    }
    fail("a constraint");
  }

  LinearExpr term() {
    if (peek().kind == Tok::Int) {
      std::int64_t k = expect_int();
      if (is_sym("*")) {
        ++pos_;
        return LinearExpr::variable(expect_var(), k);
      }
      return LinearExpr::number(k);
    }
    if (is_name()) return LinearExpr::variable(expect_var());
    fail("a number or variable");
  }

  LinearExpr linear() {
    LinearExpr e;
    if (is_sym("-")) {
      ++pos_;
      e = term().scaled(-1);
    } else {
      e = term();
    }
    while (is_sym("+") || is_sym("-")) {
      bool minus = is_sym("-");
      ++pos_;
      LinearExpr t = term();
      e = minus ? e - t : e + t;
    }
    return e;
  }

  Constraint comparison() {
    LinearExpr lhs = linear();
    CmpOp op;
    if (is_sym("=")) {
      op = CmpOp::Eq;
    } else if (is_sym("<")) {
      op = CmpOp::Lt;
    } else if (is_sym("<=")) {
      op = CmpOp::Le;
    } else if (is_sym(">")) {
      op = CmpOp::Gt;
    } else if (is_sym(">=")) {
      op = CmpOp::Ge;
    } else {
      fail("a comparison operator");
    }
    ++pos_;
    return Constraint::compare(std::move(lhs), op, linear());
  }

  // ---- processes ----

  Process process() {
    Process left = sum_expr();
    if (is_sym("||")) {
      ++pos_;
      return Process::par(std::move(left), process());
    }
    return left;
  }

  Process sum_expr() {
    SourcePos start = peek().pos;
    Process first = prim();
    if (!is_sym("+")) return first;
    std::vector<Branch> branches;
    auto absorb = [&](const Process& p, SourcePos at) {
      if (p.is_hole()) {
        branches.push_back(elided_branch());
      } else if (const auto* s = p.as<Sum>()) {
        branches.insert(branches.end(), s->branches.begin(), s->branches.end());
      } else {
        throw SyntaxError(at, "operands of '+' must be ask processes");
      }
    };
    absorb(first, start);
    while (is_sym("+")) {
      ++pos_;
      SourcePos at = peek().pos;
      absorb(prim(), at);
    }
    return Process::sum(std::move(branches));
  }

  Process prim() {
    if (is_kw("skip")) {
      ++pos_;
      return Process::skip();
    }
    if (is_sym("*")) {
      if (!allow_hole_) fail("a process ('*' only appears in sliced terms)");
      ++pos_;
      return Process::hole();
    }
    if (is_kw("tell")) {
      ++pos_;
      expect_sym("(");
      Constraint c = constraint();
      expect_sym(")");
      return Process::tell(std::move(c));
    }
    if (is_kw("ask")) {
      ++pos_;
      expect_sym("(");
      Constraint g = constraint();
      expect_sym(",");
      Process body = process();
      expect_sym(")");
      return Process::ask(std::move(g), std::move(body));
    }
    if (is_kw("local")) {
      ++pos_;
      VarName v = expect_var();
      expect_kw("in");
      return Process::local(std::move(v), prim());
    }
    if (is_kw("next")) {
      ++pos_;
      unsigned times = 1;
      if (is_sym("^")) {
        ++pos_;
        SourcePos at = peek().pos;
        std::int64_t n = expect_int();
        if (n < 1 || n > 100000) throw SyntaxError(at, "next exponent must be between 1 and 100000");
        times = static_cast<unsigned>(n);
      }
      return Process::next(prim(), times);
    }
    if (is_kw("unless")) {
      ++pos_;
      Constraint g = constraint();
      expect_kw("next");
      return Process::unless(std::move(g), prim());
    }
    if (is_sym("!")) {
      ++pos_;
      return Process::bang(prim());
    }
    if (is_sym("(")) {
      ++pos_;
      Process inner = process();
      expect_sym(")");
      return inner;
    }
    if (is_name()) {
      std::string name = toks_[pos_++].text;
      if (is_sym("(")) return Process::call(std::move(name), var_list_in_parens());
      return Process::call(std::move(name));
    }
    fail("a process");
  }

  // ---- programs ----

  HornRule rule() {
    Constraint premises = constraint();
    expect_sym("=>");
    HornRule r;
    flatten_conj(premises, r.premises);
    std::erase(r.premises, Constraint::truth());
    r.head = catom();
    return r;
  }

  static void flatten_conj(const Constraint& c, std::vector<Constraint>& out) {
    if (const auto* cj = c.as<Conj>()) {
      flatten_conj(*cj->left, out);
      flatten_conj(*cj->right, out);
    } else {
      out.push_back(c);
    }
  }

  Program program() {
    Program prog;
    bool have_system = false;
    bool have_run = false;
    while (!at_end()) {
      SourcePos at = peek().pos;
      if (is_kw("system")) {
        ++pos_;
        if (have_system) throw SyntaxError(at, "duplicate system line");
        std::string kind = expect_name("token or interval");
        if (kind == "token") {
          prog.engine = EngineKind::Token;
        } else if (kind == "interval") {
          prog.engine = EngineKind::Interval;
        } else {
          throw SyntaxError(at, "unknown constraint system " + kind);
        }
        have_system = true;
      } else if (is_kw("timed")) {
        ++pos_;
        prog.timed = true;
      } else if (is_kw("rule")) {
        ++pos_;
        prog.rules.push_back(rule());
      } else if (is_kw("var")) {
        ++pos_;
        prog.globals.insert(expect_var());
        while (is_sym(",")) {
          ++pos_;
          prog.globals.insert(expect_var());
        }
      } else if (is_kw("def")) {
        ++pos_;
        ProcessDef d;
        d.pos = at;
        d.name = expect_name("a process name");
        if (is_sym("(")) d.params = var_list_in_parens();
        expect_sym("=");
        d.body = process();
        if (prog.defs.contains(d.name)) throw SyntaxError(at, "process " + d.name + " defined twice");
        prog.def_order.push_back(d.name);
        prog.defs.emplace(d.name, std::move(d));
      } else if (is_kw("run")) {
        ++pos_;
        if (have_run) throw SyntaxError(at, "duplicate run line");
        prog.entry_pos = peek().pos;
        prog.entry = process();
        have_run = true;
      } else {
        fail("system, timed, rule, var, def or run");
      }
    }
    if (!have_run) throw SyntaxError(peek().pos, "program has no run line");
    return prog;
  }

  void finish() {
    if (!at_end()) fail("end of input");
  }

 private:
  std::vector<Lexeme> toks_;
  std::size_t pos_ = 0;
  bool allow_hole_;
};

}  // namespace

VarName parse_var_name(std::string_view text) {
  auto us = text.rfind('_');
  if (us != std::string_view::npos && us > 0 && us + 1 < text.size() && text[us + 1] != '0') {
    unsigned suffix = 0;
    auto digits = text.substr(us + 1);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), suffix);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && suffix > 0) {
      return VarName(std::string(text.substr(0, us)), suffix);
    }
  }
  return VarName(std::string(text));
}

Program parse_program_unchecked(std::string_view text) {
  Parser p(text, false);
  return p.program();
}

Program parse_program(std::string_view text) {
  Program prog = parse_program_unchecked(text);
  check_program(prog);
  return prog;
}

Constraint parse_constraint(std::string_view text, bool allow_hole) {
  Parser p(text, allow_hole);
  Constraint c = p.constraint();
  p.finish();
  return c;
}

Process parse_process(std::string_view text, bool allow_hole) {
  Parser p(text, allow_hole);
  Process proc = p.process();
  p.finish();
  return proc;
}

HornRule parse_rule(std::string_view text) {
  Parser p(text, false);
  HornRule r = p.rule();
  p.finish();
  return r;
}

}  // namespace ccpslice
