#include "ccpslice/cli.hpp"

#include <unistd.h>

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ccpslice/parser.hpp"
#include "ccpslice/render.hpp"

namespace ccpslice::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

void print_criterion_error(const CriterionError& e, std::ostream& err) {
  err << "error: " << e.what() << "\n";
  if (!e.available().empty()) {
    err << "available atoms:";
    for (const auto& a : e.available()) err << " " << a;
    err << "\n";
  }
}

std::vector<Choice> read_script(const std::string& path) {
  std::vector<Choice> out;
  std::istringstream in(read_file(path));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    long id = 0;
    if (!(fields >> id)) continue;
    Choice c;
    if (id <= 0) throw SyntaxError({lineno, 1}, "script ids are positive");
    c.id = static_cast<unsigned>(id);
    long k = 0;
    if (fields >> k) {
      if (k <= 0) throw SyntaxError({lineno, 1}, "script branches are positive");
      c.branch = static_cast<unsigned>(k);
    }
    out.push_back(c);
  }
  return out;
}

struct RunArgs {
  std::string program;
  std::string output;
  std::string format = "visual";
  std::optional<std::uint64_t> seed;
  std::string script;
  std::optional<std::size_t> budget;
  bool timed = false;
  std::optional<unsigned> horizon;
  std::vector<std::string> inputs;
  bool show_ids = false;
  bool full = false;
};

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
  std::string text = read_file(args.program);
  Program program;
  try {
    program = parse_program(text);
  } catch (const Error& e) {
    err << args.program << ":" << e.what() << "\n";
    return kStaticError;
  }
  if (program.timed && !args.timed) {
    err << args.program << ": timed program; pass --timed and -T\n";
    return kStaticError;
  }
  if (!program.timed && (args.timed || args.horizon || !args.inputs.empty())) {
    err << args.program << ": --timed, -T and --input apply to timed programs only\n";
    return kStaticError;
  }

  TraceFile file;
  file.program = program;
  file.timed = program.timed;
  file.budget = args.budget.value_or(budget_from_env());
  SchedulerPolicy policy = SchedulerPolicy::leftmost();
  if (!args.script.empty()) {
    policy = SchedulerPolicy::scripted(read_script(args.script));
  } else if (args.seed) {
    policy = SchedulerPolicy::seeded(*args.seed);
  }
  file.policy = policy.describe();
  Machine machine(program);
  RenderOptions ropts{args.show_ids, args.full};
  std::string shown;
  int code = kOk;
  if (!program.timed) {
    file.trace = machine.run(policy, file.budget);
    if (file.trace.exhausted) {
      err << "warning: step budget of " << file.budget << " exhausted before quiescence\n";
      code = kBudgetExhausted;
    }
    shown = args.format == "trace" ? write_trace(file) : render_trace(file.trace, ropts);
  } else {
    unsigned horizon = args.horizon.value_or(1);
    std::vector<Constraint> inputs(horizon, Constraint::truth());
    for (const auto& spec : args.inputs) {
      auto colon = spec.find(':');
      if (colon == std::string::npos) {
        err << "error: --input expects UNIT:CONSTRAINT, got '" << spec << "'\n";
        return kFailure;
      }
      unsigned t = 0;
      try {
        t = static_cast<unsigned>(std::stoul(spec.substr(0, colon)));
      } catch (const std::exception&) {
        t = 0;
      }
      if (t < 1 || t > horizon) {
        err << "error: --input unit must lie in 1.." << horizon << "\n";
        return kFailure;
      }
      try {
        Constraint c = parse_constraint(spec.substr(colon + 1));
        inputs[t - 1] = inputs[t - 1].is<TrueC>() ? c : Constraint::conj(inputs[t - 1], c);
      } catch (const SyntaxError& e) {
        err << "error: --input " << spec << ": " << e.what() << "\n";
        return kStaticError;
      }
    }
    try {
      file.timed_trace = run_time_units(machine, inputs, horizon, policy, file.budget);
    } catch (const BudgetExhausted& e) {
      err << "error: " << e.what() << "\n";
      return kBudgetExhausted;
    }
    shown = args.format == "trace" ? write_trace(file) : render_timed(file.timed_trace, ropts);
  }
  if (!args.output.empty()) {
    write_file(args.output, write_trace(file));
  } else {
    out << shown;
  }
  return code;
}

}  // namespace

std::string slice_output(const TraceFile& file, const SliceRequest& request, std::vector<std::string>& warnings) {
  std::vector<Criterion> criteria;
  for (const auto& m : request.marks) criteria.push_back(parse_criterion(m));
  std::string crit_text;
  for (const auto& c : criteria) crit_text += (crit_text.empty() ? "" : "; ") + to_string(c);
  auto engine = make_engine(file.program);
  SliceOptions options;
  options.causal = request.causal;
  if (request.exact) options.cap.reset();
  RenderOptions ropts{request.show_ids, request.full};

  if (!file.timed) {
    if (request.unit) throw CriterionError("--unit applies to timed traces only", {});
    MarkResult marked = mark_all(*engine, file.trace.last(), criteria, options.cap);
    warnings.insert(warnings.end(), marked.warnings.begin(), marked.warnings.end());
    SlicedTrace slice = slice_trace(*engine, file.trace, marked.marked, options);
    if (slice.capped) warnings.push_back("causal subset search was capped; the slice may miss guard support");
    if (request.format == "trace") return write_sliced(file, slice, crit_text, request.causal);
    return render_slice(file.trace, slice, ropts);
  }
  const TimedTrace& tt = file.timed_trace;
  unsigned unit = request.unit.value_or(static_cast<unsigned>(tt.units.size()));
  if (unit < 1 || unit > tt.units.size()) {
    throw CriterionError("time-unit " + std::to_string(unit) + " is out of range 1.." + std::to_string(tt.units.size()),
                         {});
  }
  MarkResult marked = mark_all(*engine, tt.units[unit - 1].internal.last(), criteria, options.cap);
  warnings.insert(warnings.end(), marked.warnings.begin(), marked.warnings.end());
  TimedSlice slice = slice_timed_trace(*engine, tt, unit, marked.marked, options);
  for (const auto& u : slice.units) {
    if (u.capped) {
      warnings.push_back("causal subset search was capped; the slice may miss guard support");
      break;
    }
  }
  if (request.format == "trace") return write_sliced(file, slice, crit_text, request.causal);
  return render_timed_slice(tt, slice, ropts);
}

int repl(const TraceFile& file, std::istream& in, std::ostream& out, std::ostream& err, bool prompt) {
  static const char* const help =
      "commands:\n"
      "  show store [unit]      final store (of a time-unit)\n"
      "  mark <criterion>       atoms a, b | vars x | entails c | inconsistent-with c\n"
      "  marks                  list the current criteria\n"
      "  undo                   drop the last criterion\n"
      "  slice [--causal] [--exact] [--show-ids] [--full] [--unit N]\n"
      "  save <path>            write the last slice in trace format\n"
      "  help, quit\n";
  std::vector<std::string> marks;
  std::optional<SliceRequest> last_request;
  auto engine = make_engine(file.program);
  auto final_of = [&](std::optional<unsigned> unit) -> const Configuration& {
    if (!file.timed) {
      if (unit) throw CriterionError("this trace has no time-units", {});
      return file.trace.last();
    }
    unsigned u = unit.value_or(static_cast<unsigned>(file.timed_trace.units.size()));
    if (u < 1 || u > file.timed_trace.units.size()) throw CriterionError("no time-unit " + std::to_string(u), {});
    return file.timed_trace.units[u - 1].internal.last();
  };

  std::string line;
  while (true) {
    if (prompt) out << "ccpslice> " << std::flush;
    if (!std::getline(in, line)) break;
    std::istringstream words(line);
    std::string cmd;
    if (!(words >> cmd)) continue;
    std::string rest;
    std::getline(words, rest);
    if (!rest.empty() && rest.front() == ' ') rest.erase(0, rest.find_first_not_of(' '));
    try {
      if (cmd == "quit" || cmd == "exit") {
        break;
      } else if (cmd == "help") {
        out << help;
      } else if (cmd == "show") {
        std::istringstream args(rest);
        std::string what;
        args >> what;
        if (what != "store") {
          out << help;
          continue;
        }
        std::optional<unsigned> unit;
        unsigned u = 0;
        if (args >> u) unit = u;
        const Configuration& c = final_of(unit);
        out << (c.store.empty() ? "(empty)" : to_string(c.store, ", ")) << "\n";
      } else if (cmd == "mark") {
        Criterion c = parse_criterion(rest);
        // timed traces pick the unit at slice time, so only untimed ones resolve here
        if (!file.timed) mark(*engine, file.trace.last(), c);
        marks.push_back(to_string(c));
        out << "marked: " << marks.back() << "\n";
      } else if (cmd == "marks") {
        for (const auto& m : marks) out << m << "\n";
      } else if (cmd == "undo") {
        if (marks.empty()) {
          out << "nothing to undo\n";
        } else {
          out << "dropped: " << marks.back() << "\n";
          marks.pop_back();
        }
      } else if (cmd == "slice") {
        SliceRequest req;
        req.marks = marks;
        std::istringstream args(rest);
        std::string flag;
        bool ok = true;
        while (args >> flag) {
          if (flag == "--causal") {
            req.causal = true;
          } else if (flag == "--exact") {
            req.exact = true;
          } else if (flag == "--show-ids") {
            req.show_ids = true;
          } else if (flag == "--full") {
            req.full = true;
          } else if (flag == "--unit") {
            unsigned u = 0;
            if (!(args >> u)) ok = false;
            req.unit = u;
          } else {
            ok = false;
          }
        }
        if (!ok) {
          out << help;
          continue;
        }
        std::vector<std::string> warnings;
        std::string text = slice_output(file, req, warnings);
        for (const auto& w : warnings) err << "warning: " << w << "\n";
        out << text;
        last_request = req;
      } else if (cmd == "save") {
        if (rest.empty() || !last_request) {
          out << (rest.empty() ? "usage: save <path>\n" : "nothing sliced yet\n");
          continue;
        }
        SliceRequest req = *last_request;
        req.format = "trace";
        std::vector<std::string> warnings;
        write_file(rest, slice_output(file, req, warnings));
        out << "saved " << rest << "\n";
      } else {
        out << "unknown command '" << cmd << "'\n" << help;
      }
    } catch (const CriterionError& e) {
      print_criterion_error(e, err);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
    }
  }
  return kOk;
}

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Run concurrent constraint programs and slice their traces", "ccpslice"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "execute a program and record its trace");
  run_cmd->add_option("program", run_args.program, ".ccp file")->required();
  run_cmd->add_option("-o,--output", run_args.output, "write the trace file here");
  run_cmd->add_option("--format", run_args.format, "stdout format")->check(CLI::IsMember({"visual", "trace"}));
  run_cmd->add_option("--seed", run_args.seed, "random scheduler seed");
  run_cmd->add_option("--script", run_args.script, "file of `id [branch]` choices to replay");
  run_cmd->add_option("--budget", run_args.budget, "step budget (default CCPSLICE_BUDGET or 10000)");
  run_cmd->add_flag("--timed", run_args.timed, "run time-units of a timed program");
  run_cmd->add_option("-T,--horizon", run_args.horizon, "number of time-units");
  run_cmd->add_option("--input", run_args.inputs, "UNIT:CONSTRAINT environment input (repeatable)");
  run_cmd->add_flag("--show-ids", run_args.show_ids, "print process ids");
  run_cmd->add_flag("--full", run_args.full, "keep repeated configurations");

  std::string slice_path;
  std::string slice_out;
  SliceRequest req;
  unsigned unit = 0;
  auto* slice_cmd = app.add_subcommand("slice", "slice a recorded trace");
  slice_cmd->add_option("trace", slice_path, "trace file")->required();
  slice_cmd->add_option("--mark", req.marks, "criterion (repeatable)");
  slice_cmd->add_flag("--causal", req.causal, "keep the asks that enabled relevant steps");
  slice_cmd->add_flag("--exact", req.exact, "no size cap on minimal subsets");
  slice_cmd->add_flag("--show-ids", req.show_ids, "print process ids");
  slice_cmd->add_flag("--full", req.full, "keep repeated configurations");
  auto* unit_opt = slice_cmd->add_option("--unit", unit, "time-unit to slice (timed traces)");
  slice_cmd->add_option("--format", req.format, "output format")->check(CLI::IsMember({"visual", "trace"}));
  slice_cmd->add_option("-o,--output", slice_out, "write output here instead of stdout");

  std::string repl_path;
  auto* repl_cmd = app.add_subcommand("repl", "interactive re-slicing of a trace");
  repl_cmd->add_option("trace", repl_path, "trace file")->required();

  std::string check_path;
  auto* check_cmd = app.add_subcommand("check", "parse and check a program");
  check_cmd->add_option("program", check_path, ".ccp file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kOk : kFailure;
  }

  auto load_trace = [&](const std::string& path) { return read_trace(read_file(path)); };

  try {
    if (*run_cmd) return cmd_run(run_args, out, err);
    if (*check_cmd) {
      try {
        Program p = parse_program(read_file(check_path));
        out << check_path << ": ok (" << to_string(p.engine) << (p.timed ? ", timed" : "") << ", "
            << p.defs.size() << " definitions)\n";
        return kOk;
      } catch (const Error& e) {
        err << check_path << ":" << e.what() << "\n";
        return kStaticError;
      }
    }
    if (*slice_cmd) {
      TraceFile file;
      try {
        file = load_trace(slice_path);
      } catch (const SyntaxError& e) {
        err << slice_path << ":" << e.what() << "\n";
        return kStaticError;
      }
      if (unit_opt->count() > 0) req.unit = unit;
      std::vector<std::string> warnings;
      std::string text;
      try {
        text = slice_output(file, req, warnings);
      } catch (const CriterionError& e) {
        print_criterion_error(e, err);
        return kCriterionError;
      }
      for (const auto& w : warnings) err << "warning: " << w << "\n";
      if (slice_out.empty()) {
        out << text;
      } else {
        write_file(slice_out, text);
      }
      return kOk;
    }
    if (*repl_cmd) {
      TraceFile file;
      try {
        file = load_trace(repl_path);
      } catch (const SyntaxError& e) {
        err << repl_path << ":" << e.what() << "\n";
        return kStaticError;
      }
      return repl(file, in, out, err, &in == &std::cin && isatty(0));
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace ccpslice::cli
