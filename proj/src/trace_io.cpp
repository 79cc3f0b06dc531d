#include "ccpslice/trace_io.hpp"

#include <charconv>
#include <sstream>

#include "ccpslice/parser.hpp"

namespace ccpslice {

namespace {

constexpr std::string_view kMagic = "CCPSLICE-TRACE v1";

std::string join_ids(const std::vector<unsigned>& ids) {
  if (ids.empty()) return "-";
  std::string out;
  for (unsigned id : ids) out += (out.empty() ? "" : ",") + std::to_string(id);
  return out;
}

void write_config(std::string& out, std::size_t index, const VarSet& hidden, const std::vector<IndexedProcess>& procs,
                  const Store& store) {
  out += "CONFIG " + std::to_string(index) + "\n";
  out += "X: " + to_string(hidden, ", ") + "\n";
  out += "S: " + to_string(store, " ; ") + "\n";
  for (const auto& ip : procs) out += "G: " + std::to_string(ip.id) + ": " + to_string(ip.proc) + "\n";
  out += "END\n";
}

void write_label(std::string& out, const StepLabel& label, bool full) {
  out += "STEP i=" + std::to_string(label.id) + " k=" + (label.branch ? std::to_string(*label.branch) : "-") +
         " rule=" + to_string(label.rule) + " created=" + join_ids(label.created) + "\n";
  if (!full) return;
  out += "A: " + to_string(label.added, " ; ") + "\n";
  out += "Y: " + to_string(label.new_hidden, ", ") + "\n";
}

void write_internal(std::string& out, const Trace& trace) {
  write_config(out, 0, trace.initial.hidden, trace.initial.procs, trace.initial.store);
  for (std::size_t l = 0; l < trace.steps.size(); ++l) {
    write_label(out, trace.steps[l].label, true);
    const Configuration& c = trace.steps[l].after;
    write_config(out, l + 1, c.hidden, c.procs, c.store);
  }
}

void write_header(std::string& out, const TraceFile& file) {
  out += "program " + program_hash(file.program) + "\n";
  out += "engine " + to_string(file.program.engine) + "\n";
  out += "mode " + std::string(file.timed ? "timed" : "untimed") + "\n";
  out += "policy " + file.policy + "\n";
  out += "budget " + std::to_string(file.budget) + "\n";
}

void write_sliced_internal(std::string& out, const SlicedTrace& s) {
  for (std::size_t l = 0; l < s.configs.size(); ++l) {
    if (l > 0) write_label(out, s.labels[l - 1], false);
    const SlicedConfig& c = s.configs[l];
    write_config(out, l, c.hidden, c.procs, c.store);
  }
}

class Reader {
 public:
  explicit Reader(std::string_view text) {
    std::size_t start = 0;
    while (start < text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(start, end - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      lines_.emplace_back(line);
      start = end + 1;
    }
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError({static_cast<int>(pos_) + 1, 1}, "trace: " + msg);
  }
  bool done() const { return pos_ >= lines_.size(); }
  const std::string& peek() const {
    if (done()) fail("unexpected end of file");
    return lines_[pos_];
  }
  bool starts(std::string_view prefix) const { return !done() && lines_[pos_].rfind(prefix, 0) == 0; }
  std::string take(std::string_view prefix) {
    if (!starts(prefix)) fail("expected '" + std::string(prefix) + "'");
    return lines_[pos_++].substr(prefix.size());
  }
  // `key` alone (trailing blank stripped) or `key value`.
  std::string take_field(std::string_view key) {
    if (!done() && lines_[pos_] == key) {
      ++pos_;
      return "";
    }
    return take(std::string(key) + " ");
  }

  static unsigned to_unsigned(std::string_view s, const Reader& r) {
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) r.fail("bad number '" + std::string(s) + "'");
    return v;
  }

  template <class F>
  auto guarded(F&& f) {
    try {
      return f();
    } catch (const SyntaxError& e) {
      fail(e.what());
    }
  }

  VarSet read_vars(std::string_view body) {
    VarSet out;
    if (body.empty()) return out;
    std::size_t start = 0;
    while (true) {
      auto comma = body.find(", ", start);
      out.insert(parse_var_name(body.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 2;
    }
    return out;
  }

  Store read_store(std::string_view body) {
    Store out;
    if (body.empty()) return out;
    std::size_t start = 0;
    while (true) {
      auto sep = body.find(" ; ", start);
      auto piece = body.substr(start, sep - start);
      out.insert(guarded([&] { return parse_constraint(piece); }));
      if (sep == std::string_view::npos) break;
      start = sep + 3;
    }
    return out;
  }

  Configuration read_config(std::size_t expected) {
    std::string head = take("CONFIG ");
    if (to_unsigned(head, *this) != expected) fail("configurations out of order");
    Configuration c;
    c.hidden = read_vars(take_field("X:"));
    c.store = read_store(take_field("S:"));
    while (starts("G: ")) {
      std::string body = take("G: ");
      auto colon = body.find(": ");
      if (colon == std::string::npos) fail("malformed process line");
      IndexedProcess ip;
      ip.id = to_unsigned(std::string_view(body).substr(0, colon), *this);
      ip.proc = guarded([&] { return parse_process(std::string_view(body).substr(colon + 2)); });
      c.procs.push_back(std::move(ip));
    }
    take("END");
    return c;
  }

  StepLabel read_label() {
    std::string body = take("STEP ");
    std::istringstream in(body);
    std::string i_part, k_part, rule_part, created_part;
    in >> i_part >> k_part >> rule_part >> created_part;
    auto value = [&](const std::string& field, const char* key) {
      std::string prefix = std::string(key) + "=";
      if (field.rfind(prefix, 0) != 0) fail("STEP line lacks " + prefix);
      return field.substr(prefix.size());
    };
    StepLabel label;
    label.id = to_unsigned(value(i_part, "i"), *this);
    std::string k = value(k_part, "k");
    if (k != "-") label.branch = to_unsigned(k, *this);
    try {
      label.rule = parse_rule_tag(value(rule_part, "rule"));
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    std::string created = value(created_part, "created");
    if (created != "-") {
      std::size_t start = 0;
      while (true) {
        auto comma = created.find(',', start);
        label.created.push_back(to_unsigned(std::string_view(created).substr(start, comma - start), *this));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    }
    label.added = read_store(take_field("A:"));
    label.new_hidden = read_vars(take_field("Y:"));
    return label;
  }

  Trace read_internal(const std::string& status) {
    Trace t;
    t.initial = read_config(0);
    while (starts("STEP ")) {
      Step s;
      s.label = read_label();
      s.after = read_config(t.steps.size() + 1);
      t.steps.push_back(std::move(s));
    }
    t.exhausted = status == "exhausted";
    return t;
  }

  std::size_t pos_ = 0;
  std::vector<std::string> lines_;
};

}  // namespace

std::string write_trace(const TraceFile& file) {
  std::string out(kMagic);
  out += "\n";
  write_header(out, file);
  bool exhausted = !file.timed && file.trace.exhausted;
  out += std::string("status ") + (exhausted ? "exhausted" : "quiescent") + "\n";
  std::istringstream src(to_string(file.program));
  for (std::string line; std::getline(src, line);) out += "source " + line + "\n";
  if (!file.timed) {
    write_internal(out, file.trace);
    return out;
  }
  const TimedTrace& tt = file.timed_trace;
  out += "horizon " + std::to_string(tt.horizon) + "\n";
  for (std::size_t t = 0; t < tt.units.size(); ++t) {
    const TimeUnit& u = tt.units[t];
    out += "TIMEUNIT " + std::to_string(t + 1) + "/" + std::to_string(tt.horizon) + "\n";
    out += "INPUT " + to_string(u.input) + "\n";
    write_internal(out, u.internal);
    for (const auto& ip : u.continuation.procs) out += "CONT: " + std::to_string(ip.id) + ": " + to_string(ip.proc) + "\n";
    for (const auto& o : u.continuation.origins) {
      out += "ORIGIN id=" + std::to_string(o.id) + " from=" + std::to_string(o.from) + " slot=" +
             std::to_string(o.slot) + "\n";
    }
    out += "ENDUNIT\n";
  }
  return out;
}

TraceFile read_trace(std::string_view text) {
  Reader r(text);
  if (r.done() || r.peek() != kMagic) r.fail("not a CCPSLICE-TRACE v1 file");
  r.pos_++;
  TraceFile file;
  std::string hash = r.take("program ");
  std::string engine = r.take("engine ");
  std::string mode = r.take("mode ");
  file.policy = r.take("policy ");
  file.budget = Reader::to_unsigned(r.take("budget "), r);
  std::string status = r.take("status ");
  if (mode != "timed" && mode != "untimed") r.fail("unknown mode " + mode);
  if (status != "quiescent" && status != "exhausted") r.fail("unknown status " + status);
  file.timed = mode == "timed";
  std::string source;
  while (r.starts("source ")) source += r.take("source ") + "\n";
  try {
    file.program = parse_program(source);
  } catch (const std::exception& e) {
    r.fail(std::string("embedded program: ") + e.what());
  }
  if (program_hash(file.program) != hash) r.fail("program hash mismatch");
  if (to_string(file.program.engine) != engine) r.fail("engine line disagrees with the program");
  if (file.program.timed != file.timed) r.fail("mode line disagrees with the program");

  if (!file.timed) {
    file.trace = r.read_internal(status);
  } else {
    TimedTrace& tt = file.timed_trace;
    tt.horizon = Reader::to_unsigned(r.take("horizon "), r);
    while (r.starts("TIMEUNIT ")) {
      std::string head = r.take("TIMEUNIT ");
      std::string expected = std::to_string(tt.units.size() + 1) + "/" + std::to_string(tt.horizon);
      if (head != expected) r.fail("expected TIMEUNIT " + expected);
      TimeUnit u;
      std::string input = r.take("INPUT ");
      u.input = r.guarded([&] { return parse_constraint(input); });
      u.internal = r.read_internal("quiescent");
      while (r.starts("CONT: ")) {
        std::string body = r.take("CONT: ");
        auto colon = body.find(": ");
        if (colon == std::string::npos) r.fail("malformed continuation line");
        IndexedProcess ip;
        ip.id = Reader::to_unsigned(std::string_view(body).substr(0, colon), r);
        ip.proc = r.guarded([&] { return parse_process(std::string_view(body).substr(colon + 2)); });
        u.continuation.procs.push_back(std::move(ip));
      }
      while (r.starts("ORIGIN ")) {
        std::istringstream in(r.take("ORIGIN "));
        std::string a, b, c;
        in >> a >> b >> c;
        if (a.rfind("id=", 0) != 0 || b.rfind("from=", 0) != 0 || c.rfind("slot=", 0) != 0) r.fail("malformed ORIGIN");
        u.continuation.origins.push_back({Reader::to_unsigned(a.substr(3), r), Reader::to_unsigned(b.substr(5), r),
                                          Reader::to_unsigned(c.substr(5), r)});
      }
      r.take("ENDUNIT");
      tt.units.push_back(std::move(u));
    }
  }
  while (!r.done() && r.peek().empty()) r.pos_++;
  if (!r.done()) r.fail("unexpected line '" + r.peek() + "'");
  return file;
}

std::string write_sliced(const TraceFile& file, const SlicedTrace& slice, const std::string& criterion, bool causal) {
  std::string out(kMagic);
  out += "\nSLICE criterion=" + criterion + " causal=" + (causal ? "1" : "0") + "\n";
  write_header(out, file);
  write_sliced_internal(out, slice);
  return out;
}

std::string write_sliced(const TraceFile& file, const TimedSlice& slice, const std::string& criterion, bool causal) {
  std::string out(kMagic);
  out += "\nSLICE criterion=" + criterion + " causal=" + (causal ? "1" : "0") + " unit=" + std::to_string(slice.unit) +
         "\n";
  write_header(out, file);
  out += "horizon " + std::to_string(file.timed_trace.horizon) + "\n";
  for (std::size_t t = 0; t < slice.units.size(); ++t) {
    out += "TIMEUNIT " + std::to_string(t + 1) + "/" + std::to_string(file.timed_trace.horizon) + "\n";
    write_sliced_internal(out, slice.units[t]);
    out += "ENDUNIT\n";
  }
  return out;
}

}  // namespace ccpslice
