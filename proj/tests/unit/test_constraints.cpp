#include <doctest.h>

#include "../support/gen.hpp"

using namespace ccpslice;

namespace {

Constraint C(const char* text) { return parse_constraint(text); }

Store S(std::initializer_list<const char*> atoms) {
  Store out;
  for (const char* a : atoms) out.insert(C(a));
  return out;
}

const TokenSystem kTokens;
const IntervalSystem kIntervals;

bool entails(const EntailmentEngine& e, const Constraint& d, const Constraint& c) {
  auto dec = atoms(d, free_vars(c));
  return entails_hidden(e, {dec.bound.begin(), dec.bound.end()}, dec.atoms, c);
}

}  // namespace

TEST_CASE("constraints print and parse back") {
  for (const char* text : {"true", "false", "a", "p(x,y)", "x=y", "z>x+4", "2*x-y<=3", "exists x. p(x) /\\ q(x)",
                           "(a /\\ b) /\\ c", "-x>=-3"}) {
    Constraint c = C(text);
    CAPTURE(text);
    CHECK(parse_constraint(to_string(c)) == c);
  }
  CHECK(to_string(C("x = -3")) == "x=-3");
  CHECK(C("x = y").is<Diag>());
  CHECK_THROWS_AS(C("*"), SyntaxError);
  CHECK(parse_constraint("exists x. *", true).as<Exists>() != nullptr);
}

TEST_CASE("atoms renames binders apart from the context") {
  auto dec = atoms(C("exists x. p(x)"), {VarName{"x", 0}});
  REQUIRE(dec.bound.size() == 1);
  CHECK(dec.bound[0] == VarName{"x", 1});
  CHECK(dec.atoms == S({"p(x_1)"}));
  CHECK(atoms(C("true /\\ a"), {}).atoms == S({"a"}));
}

TEST_CASE("substitution avoids capture") {
  VarMap sub{{VarName{"y", 0}, VarName{"x", 0}}};
  Constraint c = subst(C("exists x. p(x) /\\ q(y)"), sub);
  CHECK(free_vars(c) == VarSet{VarName{"x", 0}});
  CHECK(to_string(c) == "exists x_1. p(x_1) /\\ q(x)");
}

TEST_CASE("token system: Horn chaining and false heads") {
  TokenSystem rules({parse_rule("a /\\ b => c"), parse_rule("c => d"), parse_rule("e => false")});
  CHECK(rules.entails(S({"a", "b"}), C("d")));
  CHECK_FALSE(rules.entails(S({"a"}), C("d")));
  CHECK(rules.consistent(S({"a", "b"})));
  CHECK_FALSE(rules.consistent(S({"e"})));
  CHECK(rules.entails(S({"e"}), C("p(z)")));  // false entails everything
  CHECK(to_string(parse_rule("true => a")) == "true => a");
}

TEST_CASE("token system: diagonals by union-find") {
  CHECK(kTokens.entails(S({"x=y", "p(x)"}), C("p(y)")));
  CHECK(kTokens.entails(S({"x=y", "y=z"}), C("x=z")));
  CHECK(kTokens.entails({}, C("x=x")));
  CHECK_FALSE(kTokens.entails(S({"p(x)"}), C("p(y)")));
}

TEST_CASE("cylindric axioms") {
  const EntailmentEngine& e = kTokens;
  // c |= exists x. c
  CHECK(entails(e, C("p(x) /\\ q(y)"), C("exists x. p(x) /\\ q(y)")));
  // exists x. exists y. c == exists y. exists x. c
  CHECK(entails(e, C("exists x. exists y. p(x) /\\ q(y)"), C("exists y. exists x. p(x) /\\ q(y)")));
  CHECK(entails(e, C("exists y. exists x. p(x) /\\ q(y)"), C("exists x. exists y. p(x) /\\ q(y)")));
  // exists x. (c /\ exists x. d) == exists x. c /\ exists x. d
  CHECK(entails(e, C("exists x. (p(x) /\\ exists x. q(x))"), C("(exists x. p(x)) /\\ exists x. q(x)")));
  // hiding loses information
  CHECK_FALSE(entails(e, C("exists x. p(x)"), C("p(x)")));
  // exists x. false == false
  CHECK(entails(e, C("exists x. false"), C("a")));
}

TEST_CASE("diagonal axioms") {
  const EntailmentEngine& e = kTokens;
  CHECK(entails(e, C("true"), C("x=x")));
  // exists y.(x=y /\ y=z) == x=z
  CHECK(entails(e, C("exists y. x=y /\\ y=z"), C("x=z")));
  // x=y /\ exists x.(x=y /\ c) |= c
  CHECK(entails(e, C("x=y /\\ exists x. x=y /\\ p(x)"), C("p(x)")));
  CHECK(entails(e, C("x=y /\\ exists x. x=y /\\ p(x)"), C("p(y)")));
}

TEST_CASE("interval system: the ex1 final store") {
  Store s = S({"y<7", "x=-3", "z>x+4"});
  CHECK(kIntervals.entails(s, C("x<0")));
  CHECK(kIntervals.entails(s, C("z>1")));
  CHECK(kIntervals.entails(s, C("z>=2")));
  CHECK_FALSE(kIntervals.entails(s, C("z>2")));
  CHECK(kIntervals.entails(s, C("z>x+4")));  // syntactic match
  CHECK(kIntervals.consistent(s));
  CHECK_FALSE(kIntervals.consistent(S({"x>3", "x<2"})));
  CHECK_FALSE(kIntervals.entails(S({"y<7"}), C("x<0")));
}

TEST_CASE("entails_hidden renames hidden variables apart from the goal") {
  VarSet hidden{VarName{"x", 0}};
  CHECK_FALSE(entails_hidden(kTokens, hidden, S({"p(x)"}), C("p(x)")));
  CHECK(entails_hidden(kTokens, hidden, S({"p(x)"}), C("exists w. p(w)")));
  CHECK(entails_hidden(kTokens, hidden, S({"p(x)", "a"}), C("a")));
}
