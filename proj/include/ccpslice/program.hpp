#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ccpslice/entailment.hpp"
#include "ccpslice/error.hpp"
#include "ccpslice/process.hpp"

namespace ccpslice {

enum class EngineKind { Token, Interval };

std::string to_string(EngineKind kind);

struct ProcessDef {
  std::string name;
  std::vector<VarName> params;
  Process body;
  SourcePos pos{};

  bool operator==(const ProcessDef& other) const {
    return name == other.name && params == other.params && body == other.body;
  }
};

/// A parsed `.ccp` file. Equality ignores source positions.
struct Program {
  EngineKind engine = EngineKind::Token;
  bool timed = false;
  std::vector<HornRule> rules;
  VarSet globals;
  std::map<std::string, ProcessDef> defs;
  /// Definition names in source order, for printing.
  std::vector<std::string> def_order;
  Process entry;
  SourcePos entry_pos{};

  bool operator==(const Program& other) const {
    return engine == other.engine && timed == other.timed && rules == other.rules && globals == other.globals &&
           defs == other.defs && def_order == other.def_order && entry == other.entry;
  }

  const ProcessDef* find(const std::string& name) const;
  /// Declared globals plus the free variables of the entry process.
  VarSet visible_globals() const;
};

/// Canonical source text; parse_program(to_string(p)) == p.
std::string to_string(const Program& program);

/// FNV-1a 64 of the canonical text, as 16 lowercase hex digits.
std::string program_hash(const Program& program);

/// Throws StaticError on: undefined calls, arity mismatch, repeated parameters,
/// definition bodies with free variables outside params and globals, timed
/// constructs in untimed programs, atoms foreign to the engine, and (timed)
/// recursion not guarded by next/unless.
void check_program(const Program& program);

std::shared_ptr<const EntailmentEngine> make_engine(const Program& program);

}  // namespace ccpslice
