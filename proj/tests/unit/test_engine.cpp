#include <doctest.h>

#include "../support/gen.hpp"

using namespace ccpslice;

namespace {

Store S(std::initializer_list<const char*> atoms) {
  Store out;
  for (const char* a : atoms) out.insert(parse_constraint(a));
  return out;
}

Machine machine_for(const std::string& text) { return Machine(parse_program(text)); }

}  // namespace

TEST_CASE("ex1 under leftmost scheduling") {
  Program program = gen::load("ex1.ccp");
  Machine m(program);
  Trace t = m.run(SchedulerPolicy::leftmost());
  REQUIRE(t.steps.size() == 5);
  CHECK_FALSE(t.exhausted);
  // initial ids: tell(y<7)=1, ask=2, tell(x=-3)=3
  std::vector<unsigned> ids;
  std::vector<RuleTag> rules;
  for (const auto& s : t.steps) {
    ids.push_back(s.label.id);
    rules.push_back(s.label.rule);
  }
  CHECK(ids == std::vector<unsigned>{1, 3, 2, 4, 5});
  CHECK(rules == std::vector<RuleTag>{RuleTag::Tell, RuleTag::Tell, RuleTag::Sum, RuleTag::Call, RuleTag::Tell});
  CHECK(t.steps[2].label.branch == 1u);
  CHECK(t.steps[2].label.created == std::vector<unsigned>{4});
  CHECK(t.steps[3].label.created == std::vector<unsigned>{5});
  CHECK(t.last().store == S({"y<7", "x=-3", "z>x+4"}));
  CHECK(t.last().procs.empty());
  CHECK(replay_check(m, t));
  CHECK(observables(m.engine(), t, parse_constraint("z>1")));
}

TEST_CASE("enabled steps and contract violations") {
  Machine m = machine_for("system token\nrun ask(a, tell(b)) + ask(c, skip) || tell(a)");
  unsigned next = 1;
  Configuration c = m.initial(m.program().entry, next);
  auto en = m.enabled(c);
  REQUIRE(en.size() == 1);
  CHECK(en[0].id == 2);
  CHECK_THROWS_AS(m.step(c, {1, 1}, next), ContractViolation);
  CHECK_THROWS_AS(m.step(c, {99, {}}, next), ContractViolation);
  Step s = m.step(c, {2, {}}, next);
  en = m.enabled(s.after);
  REQUIRE(en.size() == 1);
  CHECK(en[0].branch == 1u);
  CHECK_THROWS_AS(m.step(s.after, {1, 2}, next), ContractViolation);
}

TEST_CASE("sum bodies that are parallel compositions are flattened") {
  Machine m = machine_for("system token\nrun ask(true, tell(a) || skip || (tell(b) || tell(c)))");
  Trace t = m.run(SchedulerPolicy::leftmost());
  REQUIRE(t.steps.size() == 4);
  CHECK(t.steps[0].label.created == std::vector<unsigned>{2, 3, 4});
  CHECK(t.at(1).procs.size() == 3);
}

TEST_CASE("local hides a fresh variable and ids stay unique") {
  Machine m = machine_for(
      "system token\nvar y\ndef A(v) = local x in (tell(p(x)) || tell(q(v)))\nrun A(y) || local x in tell(p(x))");
  Trace t = m.run(SchedulerPolicy::leftmost());
  CHECK(t.last().hidden == VarSet{VarName{"x", 0}, VarName{"x", 1}});
  CHECK(t.last().store == S({"p(x)", "p(x_1)", "q(y)"}));
  std::set<unsigned> created;
  for (const auto& s : t.steps) {
    for (unsigned id : s.label.created) CHECK(created.insert(id).second);
  }
  CHECK(replay_check(m, t));
}

TEST_CASE("local never reuses a global or free name") {
  Machine m = machine_for("system token\nrun tell(p(x)) || local x in tell(q(x))");
  Trace t = m.run(SchedulerPolicy::leftmost());
  CHECK(t.last().store == S({"p(x)", "q(x_1)"}));
  CHECK_FALSE(observables(m.engine(), t, parse_constraint("q(x)")));
  CHECK(observables(m.engine(), t, parse_constraint("exists w. q(w)")));
}

TEST_CASE("seeded runs are deterministic and scripts replay them") {
  Program program = gen::load("ex2.ccp");
  Machine m(program);
  Trace a = m.run(SchedulerPolicy::seeded(5));
  Trace b = m.run(SchedulerPolicy::seeded(5));
  CHECK(a == b);
  Trace replay = m.run(SchedulerPolicy::scripted(a.choices()));
  CHECK(replay == a);
  CHECK(a.last().store == S({"a", "b", "c", "d"}));
  // every schedule ends in the same store
  for (std::uint64_t seed = 0; seed < 20; ++seed) CHECK(m.run(SchedulerPolicy::seeded(seed)).last().store == a.last().store);
}

TEST_CASE("budget exhaustion is reported, not hidden") {
  Machine m = machine_for("system token\ndef A = tell(a) || A\nrun A");
  Trace t = m.run(SchedulerPolicy::leftmost(), 50);
  CHECK(t.exhausted);
  CHECK(t.steps.size() == 50);
}

TEST_CASE("replay_check spots a tampered trace") {
  Program program = gen::load("ex1.ccp");
  Machine m(program);
  Trace t = m.run(SchedulerPolicy::leftmost());
  Trace bad = t;
  bad.steps[1].after.store.insert(parse_constraint("z<0"));
  CHECK_FALSE(replay_check(m, bad));
  bad = t;
  bad.steps[2].label.created = {1};
  CHECK_FALSE(replay_check(m, bad));
}

TEST_CASE("the empty program is immediately quiescent") {
  Program program = gen::load("empty.ccp");
  Trace t = Machine(program).run(SchedulerPolicy::leftmost());
  CHECK(t.steps.empty());
  CHECK(t.initial.procs.empty());
}

TEST_CASE("inconsistent stores are kept and observe everything") {
  Machine m = machine_for("system token\nrule a => false\nrun tell(a) || ask(b, tell(c))");
  Trace t = m.run(SchedulerPolicy::leftmost());
  CHECK(t.last().store.contains(parse_constraint("c")));
  CHECK(observables(m.engine(), t, parse_constraint("d")));
}
