// mmnet: run, step through, explore and lint multimedia nets.

#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mmnet/error.hpp"
#include "mmnet/net_text.hpp"
#include "mmnet/patterns.hpp"
#include "mmnet/runtime.hpp"

namespace fs = std::filesystem;
using namespace mmnet;

namespace {

enum Exit { kOk = 0, kInvalid = 2, kRuntime = 3, kIo = 4 };

struct Inputs {
  std::string net;
  std::string triples;
  std::string objects;
  std::string supply;
};

void add_inputs(CLI::App* cmd, Inputs& in) {
  cmd->add_option("--net", in.net, "net definition file")->required();
  cmd->add_option("--triples", in.triples, "N-Triples file replacing the initial metadata");
  cmd->add_option("--objects", in.objects, "JSON object store replacing the initial objects");
  cmd->add_option("--supply", in.supply,
                  R"(external-input values as JSON, e.g. {"n": ["face"]})");
}

struct Loaded {
  MMNet net;
  Snapshot init;
  Supply supply;
};

const DataType* external_type(const MMNet& net, const std::string& var) {
  for (const auto& t : net.transitions)
    for (const auto& p : t.external)
      if (p.name == var) return &p.type;
  return nullptr;
}

Value supply_value(const MMNet& net, const std::string& var, const nlohmann::json& j) {
  const DataType* type = external_type(net, var);
  DataType t = type ? *type : DataType::str();
  if (j.is_number_integer()) return cast(Value::integer(j.get<std::int64_t>()), t);
  if (!j.is_string()) throw LiteralSyntax("supply values must be strings or integers");
  std::string s = j.get<std::string>();
  if (t.kind() == Kind::String) return Value::str(s);
  return parse_value(s, t, net.prefixes);
}

Supply parse_supply(const MMNet& net, const std::string& text) {
  Supply out;
  if (text.empty()) return out;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw LiteralSyntax(std::string("--supply: ") + e.what());
  }
  if (!j.is_object()) throw LiteralSyntax("--supply must be a JSON object");
  for (const auto& [var, vals] : j.items()) {
    auto& dst = out[var];
    if (vals.is_array())
      for (const auto& v : vals) dst.push_back(supply_value(net, var, v));
    else
      dst.push_back(supply_value(net, var, vals));
  }
  return out;
}

// Parses and validates; prints problems and returns false on invalid nets.
bool load(const Inputs& in, Loaded& out) {
  out.net = load_net(in.net);
  auto errors = validate(out.net);
  if (!errors.empty()) {
    for (const auto& e : errors) std::cerr << e.to_string() << "\n";
    return false;
  }
  StorageInstance storage = out.net.init.storage;
  if (!in.triples.empty()) storage.metadata = parse_ntriples(read_file(in.triples), out.net.prefixes);
  if (!in.objects.empty()) storage.objects = store_from_json(read_file(in.objects));
  out.init = initial_snapshot(out.net, std::move(storage));
  out.supply = parse_supply(out.net, in.supply);
  return true;
}

// Runs `body` and maps exceptions to exit codes.
template <typename F>
int guarded(F body) {
  try {
    return body();
  } catch (const FileError& e) {
    std::cerr << e.what() << "\n";
    return kIo;
  } catch (const SyntaxError& e) {
    std::cerr << e.what() << "\n";
    return kInvalid;
  } catch (const LiteralSyntax& e) {
    std::cerr << e.what() << "\n";
    return kInvalid;
  } catch (const UnboundAnswerVariable& e) {
    std::cerr << e.what() << "\n";
    return kInvalid;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kRuntime;
  }
}

// One value per external variable: the next one in its supplied list.
Supply round_robin(const Supply& supply, const std::map<std::string, std::size_t>& cursor) {
  Supply out;
  for (const auto& [var, vals] : supply) {
    if (vals.empty()) continue;
    auto it = cursor.find(var);
    out[var] = {vals[(it == cursor.end() ? 0 : it->second) % vals.size()]};
  }
  return out;
}

void write_storage(const Snapshot& s, const PrefixMap& px, const std::string& dir) {
  fs::create_directories(dir);
  write_file(fs::path(dir) / "final.nt", write_ntriples(s.storage.metadata, px));
  write_file(fs::path(dir) / "final.json", store_to_json(s.storage.objects));
  std::cout << "wrote " << (fs::path(dir) / "final.nt").string() << " and "
            << (fs::path(dir) / "final.json").string() << "\n";
}

int cmd_run(const Inputs& in, std::size_t max_steps, std::optional<unsigned> seed,
            bool canonical, const std::string& out_dir) {
  Loaded l;
  if (!load(in, l)) return kInvalid;
  Snapshot s = l.init;
  std::mt19937 rng(seed.value_or(0));
  std::map<std::string, std::size_t> cursor;
  std::size_t step = 0;
  for (; step < max_steps; ++step) {
    auto firings = enabled_firings(l.net, s, round_robin(l.supply, cursor));
    if (firings.empty()) break;
    std::size_t pick = 0;
    if (seed) pick = std::uniform_int_distribution<std::size_t>(0, firings.size() - 1)(rng);
    const Firing& f = firings[pick];
    s = fire(l.net, s, f.transition, f.binding);
    for (const auto& p : l.net.transition(f.transition).external) ++cursor[p.name];
    if (canonical) canonicalize(s);
    std::cout << trace_line(step + 1, f, s) << "\n";
  }
  std::cout << (step == max_steps ? "stopped: step limit" : "stopped: no enabled transition")
            << " after " << step << " steps\n";
  std::cout << "final: " << marking_summary(s) << "\n";
  std::cout << "triples: " << s.storage.metadata.size() << ", objects: " << s.storage.objects.size()
            << "\n";
  if (!out_dir.empty()) write_storage(s, l.net.prefixes, out_dir);
  return kOk;
}

void print_marking(const Snapshot& s) {
  for (const auto& [p, ms] : s.marking)
    for (const auto& [t, n] : ms.entries())
      std::cout << "  " << p << ": " << tuple_to_string(t) << (n > 1 ? " x" + std::to_string(n) : "")
                << "\n";
}

void print_storage(const Snapshot& s, const PrefixMap& px) {
  for (const auto& t : s.storage.metadata.triples()) std::cout << "  " << t.to_string(px) << " .\n";
  for (const auto& [addr, img] : s.storage.objects.objects())
    std::cout << "  @" << addr << " " << image_to_json(img) << "\n";
}

int cmd_step(const Inputs& in) {
  Loaded l;
  if (!load(in, l)) return kInvalid;
  std::vector<Snapshot> history{l.init};
  std::size_t step = 0;
  std::string line;
  while (true) {
    const Snapshot& s = history.back();
    std::vector<Firing> firings;
    while (true) {
      try {
        firings = enabled_firings(l.net, s, l.supply);
        break;
      } catch (const NoSupply& e) {
        // Ask for the missing external input once and keep it for later steps.
        std::string msg = e.what();
        std::string var = msg.substr(msg.rfind(' ') + 1);
        const DataType* type = external_type(l.net, var);
        std::cout << "value for " << var << " (" << (type ? type->name() : "str") << "): "
                  << std::flush;
        if (!std::getline(std::cin, line)) return kOk;
        l.supply[var].push_back(supply_value(l.net, var, nlohmann::json(line)));
      }
    }
    std::cout << "state " << history.size() - 1 << ": " << marking_summary(s) << "\n";
    for (std::size_t i = 0; i < firings.size(); ++i)
      std::cout << "  [" << i << "] " << firings[i].transition << " ["
                << binding_to_string(firings[i].binding) << "]\n";
    if (firings.empty()) std::cout << "  no enabled transition\n";
    std::cout << "> " << std::flush;
    if (!std::getline(std::cin, line) || line == "q") return kOk;
    if (line == "u") {
      if (history.size() > 1) {
        history.pop_back();
        --step;
      }
    } else if (line == "m") {
      print_marking(s);
    } else if (line == "s") {
      print_storage(s, l.net.prefixes);
    } else {
      std::size_t idx = 0;
      std::istringstream ss(line);
      if (!(ss >> idx) || idx >= firings.size()) {
        std::cout << "enter an index, u (undo), m (marking), s (storage) or q (quit)\n";
        continue;
      }
      try {
        Snapshot next = fire(l.net, s, firings[idx].transition, firings[idx].binding);
        std::cout << trace_line(++step, firings[idx], next) << "\n";
        history.push_back(std::move(next));
      } catch (const Error& e) {
        std::cout << "firing failed: " << e.what() << "\n";
      }
    }
  }
}

ExploreOptions explore_options(const Loaded& l, std::size_t max_states, std::size_t max_depth,
                               bool canonical) {
  ExploreOptions o;
  o.bounds.max_states = max_states;
  o.bounds.max_depth = max_depth;
  o.canonicalize = canonical;
  o.supply = l.supply;
  return o;
}

int cmd_explore(const Inputs& in, std::size_t max_states, std::size_t max_depth, bool canonical,
                bool parallel, const std::string& dot) {
  Loaded l;
  if (!load(in, l)) return kInvalid;
  ExploreOptions o = explore_options(l, max_states, max_depth, canonical);
  LTS lts = parallel ? explore_parallel(l.net, l.init, o) : explore(l.net, l.init, o);
  std::cout << "states: " << lts.states.size() << "\n";
  std::cout << "edges: " << lts.edges.size() << "\n";
  std::cout << "errors: " << lts.errors.size() << "\n";
  std::cout << "truncated: " << lts.truncated.to_string() << "\n";
  auto terminal = lts.terminal_states();
  std::cout << "terminal states: " << terminal.size() << "\n";
  for (auto t : terminal) std::cout << "  s" << t << ": " << marking_summary(lts.states[t]) << "\n";
  for (const auto& e : lts.errors)
    std::cout << "  error at s" << e.from << " " << e.firing.transition << ": " << e.message << "\n";
  if (!dot.empty()) write_file(dot, to_dot(lts));
  return kOk;
}

int cmd_reach(const Inputs& in, const std::string& place, std::size_t max_states,
              std::size_t max_depth, bool canonical) {
  Loaded l;
  if (!load(in, l)) return kInvalid;
  ReachResult r = reachable_nonempty(l.net, l.init, place,
                                     explore_options(l, max_states, max_depth, canonical));
  std::cout << verdict_name(r.verdict) << " (" << r.states_seen << " states)\n";
  for (std::size_t i = 0; i < r.witness.size(); ++i)
    std::cout << "  #" << i + 1 << " " << r.witness[i].transition << " ["
              << binding_to_string(r.witness[i].binding) << "]\n";
  return kOk;
}

int cmd_lint(const std::string& file) {
  MMNet net = load_net(file);
  auto errors = validate(net);
  for (const auto& e : errors) std::cout << "error " << e.to_string() << "\n";
  for (const auto& a : net.actions)
    for (const auto& w : lint_consistency(a)) std::cout << "warning " << w << "\n";
  if (errors.empty()) std::cout << "ok: " << net.name << "\n";
  return errors.empty() ? kOk : kInvalid;
}

int cmd_emit(const std::string& name, const std::string& out_dir) {
  MMNet net = demo_net(name);
  if (out_dir.empty()) {
    std::cout << write_net(net);
    return kOk;
  }
  fs::create_directories(out_dir);
  write_file(fs::path(out_dir) / (name + ".nt"), write_ntriples(net.init.storage.metadata, net.prefixes));
  write_file(fs::path(out_dir) / (name + ".json"), store_to_json(net.init.storage.objects));
  net.init.triples_file = name + ".nt";
  net.init.objects_file = name + ".json";
  write_file(fs::path(out_dir) / (name + ".mmnet"), write_net(net));
  std::cout << "wrote " << (fs::path(out_dir) / (name + ".mmnet")).string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multimedia net runner"};
  app.require_subcommand(1);

  Inputs in;
  std::size_t max_steps = 1000, max_states = 100000, max_depth = Bounds::kUnbounded;
  std::optional<unsigned> seed;
  bool canonical = false, parallel = false;
  std::string dot, place, out_dir, pattern;

  auto* run = app.add_subcommand("run", "fire the least enabled firing until none is left");
  add_inputs(run, in);
  run->add_option("--max-steps", max_steps, "step limit");
  run->add_option("--seed", seed, "pick firings at random with this seed");
  run->add_flag("--canonicalize", canonical, "rename fresh values after each step");
  run->add_option("--out-dir", out_dir, "write the final storage as final.nt and final.json");

  auto* step = app.add_subcommand("step", "fire interactively");
  add_inputs(step, in);

  auto* exp = app.add_subcommand("explore", "breadth-first state-space exploration");
  add_inputs(exp, in);
  exp->add_option("--max-states", max_states, "state bound");
  exp->add_option("--max-depth", max_depth, "depth bound");
  exp->add_flag("--canonicalize", canonical, "identify states up to fresh-value renaming");
  exp->add_flag("--parallel", parallel, "expand each level with OpenMP");
  exp->add_option("--dot", dot, "write the LTS as Graphviz");

  auto* reach = app.add_subcommand("reach", "is some state with a token on PLACE reachable");
  add_inputs(reach, in);
  reach->add_option("--place", place, "target place")->required();
  reach->add_option("--max-states", max_states, "state bound");
  reach->add_option("--max-depth", max_depth, "depth bound");
  reach->add_flag("--canonicalize", canonical, "identify states up to fresh-value renaming");

  std::string lint_file;
  auto* lint = app.add_subcommand("lint", "validate a net and report consistency warnings");
  lint->add_option("--net", lint_file, "net definition file")->required();

  auto* pats = app.add_subcommand("patterns", "built-in pattern nets");
  pats->require_subcommand(1);
  auto* list = pats->add_subcommand("list", "list pattern names");
  auto* emit = pats->add_subcommand("emit", "print a pattern net with demo data");
  emit->add_option("name", pattern, "pattern name")->required();
  emit->add_option("--out-dir", out_dir, "write <name>.mmnet, .nt and .json here");

  CLI11_PARSE(app, argc, argv);

  return guarded([&] {
    if (*run) return cmd_run(in, max_steps, seed, canonical, out_dir);
    if (*step) return cmd_step(in);
    if (*exp) return cmd_explore(in, max_states, max_depth, canonical, parallel, dot);
    if (*reach) return cmd_reach(in, place, max_states, max_depth, canonical);
    if (*lint) return cmd_lint(lint_file);
    if (*list) {
      for (const auto& n : pattern_names()) std::cout << n << "\n";
      return static_cast<int>(kOk);
    }
    if (*emit) return cmd_emit(pattern, out_dir);
    return static_cast<int>(kInvalid);
  });
}
