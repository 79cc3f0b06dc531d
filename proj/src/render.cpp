#include "ccpslice/render.hpp"

namespace ccpslice {

Process collapse_holes(const Process& p) {
  if (p.is<Par>()) {
    std::vector<Process> out;
    for (const auto& part : flatten_par(p)) {
      Process c = collapse_holes(part);
      if (c.is_hole() && !out.empty() && out.back().is_hole()) continue;
      out.push_back(std::move(c));
    }
    return out.size() == 1 ? out.front() : Process::par_all(out);
  }
  return std::visit(
      [&](const auto& n) -> Process {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Sum>) {
          std::vector<Branch> out;
          for (const auto& b : n.branches) {
            if (b.elided()) {
              if (!out.empty() && out.back().elided()) continue;
              out.push_back(b);
            } else {
              out.push_back(make_branch(b.guard, collapse_holes(*b.body)));
            }
          }
          return Process::sum(std::move(out));
        } else if constexpr (std::is_same_v<T, Local>) {
          return Process::local(n.var, collapse_holes(*n.body));
        } else if constexpr (std::is_same_v<T, Next>) {
          return Process::next(collapse_holes(*n.body));
        } else if constexpr (std::is_same_v<T, Unless>) {
          return Process::unless(n.guard, collapse_holes(*n.body));
        } else if constexpr (std::is_same_v<T, Bang>) {
          return Process::bang(collapse_holes(*n.body));
        } else {
          return p;
        }
      },
      p.node());
}

namespace {

std::string render_procs(const std::vector<IndexedProcess>& procs, const RenderOptions& options, bool sliced) {
  std::string out;
  bool last_hole = false;
  for (const auto& ip : procs) {
    Process p = collapse_holes(ip.proc);
    bool hole = p.is_hole();
    if (hole && last_hole && !options.show_ids) continue;
    last_hole = hole;
    if (!out.empty()) out += " || ";
    std::string text = to_string(p);
    if (p.is<Par>()) text = "(" + text + ")";
    out += text;
    if (options.show_ids) out += "[" + std::to_string(ip.id) + "]";
  }
  if (out.empty()) return sliced ? "*" : "skip";
  return out;
}

std::string render_store(const Store& shown, std::size_t original_size) {
  if (shown.empty()) return "*";
  std::string out = to_string(shown, ",");
  if (original_size > shown.size()) out += ",*";
  return out;
}

std::string render_config(const VarSet& hidden, const std::vector<IndexedProcess>& procs, const Store& store,
                          std::size_t original_store_size, const RenderOptions& options, bool sliced, bool timed) {
  std::string x = hidden.empty() ? "0" : to_string(hidden, ",");
  std::string body = render_procs(procs, options, sliced) + " ; " + render_store(store, original_store_size);
  if (timed && hidden.empty()) return "[" + body + "]";
  return "[" + x + " ; " + body + "]";
}

// Joins rendered configurations with `-->`, dropping consecutive repeats.
std::string chain(const std::vector<std::string>& rendered, const RenderOptions& options) {
  std::string out;
  const std::string* prev = nullptr;
  for (const auto& r : rendered) {
    if (prev && *prev == r && !options.full) continue;
    if (prev) out += " -->\n";
    out += r;
    prev = &r;
  }
  return out;
}

std::vector<std::string> plain_configs(const Trace& trace, const RenderOptions& options, bool timed) {
  std::vector<std::string> out;
  for (std::size_t l = 0; l < trace.length(); ++l) {
    const Configuration& c = trace.at(l);
    out.push_back(render_config(c.hidden, c.procs, c.store, c.store.size(), options, false, timed));
  }
  return out;
}

std::vector<std::string> sliced_configs(const Trace& original, const SlicedTrace& slice, const RenderOptions& options,
                                        bool timed) {
  std::vector<std::string> out;
  for (std::size_t l = 0; l < slice.configs.size(); ++l) {
    const SlicedConfig& c = slice.configs[l];
    out.push_back(render_config(c.hidden, c.procs, c.store, original.at(l).store.size(), options, true, timed));
  }
  return out;
}

std::string unit_block(std::size_t t, unsigned horizon, const std::vector<std::string>& configs,
                       const RenderOptions& options) {
  return "{" + std::to_string(t) + " / " + std::to_string(horizon) + " > " + chain(configs, options) + "}";
}

}  // namespace

std::string render_trace(const Trace& trace, const RenderOptions& options) {
  return chain(plain_configs(trace, options, false), options) + " --> " + (trace.exhausted ? "..." : "stop") + "\n";
}

std::string render_timed(const TimedTrace& trace, const RenderOptions& options) {
  std::string out;
  for (std::size_t t = 0; t < trace.units.size(); ++t) {
    if (t > 0) out += " ==>\n";
    out += unit_block(t + 1, trace.horizon, plain_configs(trace.units[t].internal, options, true), options);
  }
  return out + "\n";
}

std::string render_slice(const Trace& original, const SlicedTrace& slice, const RenderOptions& options) {
  return chain(sliced_configs(original, slice, options, false), options) + " --> stop\n";
}

std::string render_timed_slice(const TimedTrace& original, const TimedSlice& slice, const RenderOptions& options) {
  std::string out;
  for (std::size_t t = 0; t < slice.units.size(); ++t) {
    if (t > 0) out += " ==>\n";
    out += unit_block(t + 1, original.horizon, sliced_configs(original.units[t].internal, slice.units[t], options, true),
                      options);
  }
  return out + "\n";
}

}  // namespace ccpslice
