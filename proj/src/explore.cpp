#include <algorithm>
#include <deque>
#include <functional>
#include <unordered_map>
#include <variant>

#include "mmnet/error.hpp"
#include "mmnet/runtime.hpp"

namespace mmnet {

std::string Truncation::to_string() const {
  std::string out;
  auto flag = [&](bool on, const char* name) {
    if (!on) return;
    if (!out.empty()) out += ",";
    out += name;
  };
  flag(depth, "depth");
  flag(states, "states");
  flag(tokens, "tokens");
  flag(triples, "triples");
  flag(objects, "objects");
  return out.empty() ? "none" : out;
}

std::vector<std::size_t> LTS::terminal_states() const {
  std::vector<bool> busy(states.size(), false);
  for (const auto& e : edges) busy[e.from] = true;
  for (const auto& e : errors) busy[e.from] = true;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < states.size(); ++i)
    if (!busy[i]) out.push_back(i);
  return out;
}

std::vector<Firing> LTS::path_to(std::size_t state) const {
  std::vector<Firing> out;
  while (state < parent.size() && parent[state] != kNoParent) {
    const Edge& e = edges[parent[state]];
    out.push_back(e.firing);
    state = e.from;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Reachable: return "Reachable";
    case Verdict::NotReachableWithinBounds: return "NotReachableWithinBounds";
    case Verdict::Truncated: return "Truncated";
  }
  return "";
}

namespace {

struct Successor {
  Firing firing;
  std::variant<Snapshot, std::string> result;  // state or error message
};

struct Expansion {
  std::vector<Successor> successors;
  Truncation flags;
};

// Successors of one state under the bounds; shared by every explorer so that
// truncation is decided the same way everywhere.
Expansion expand(const MMNet& net, const Snapshot& s, std::size_t depth,
                 const ExploreOptions& opts) {
  Expansion out;
  std::vector<Firing> firings;
  std::vector<std::string> names;
  for (const auto& t : net.transitions) names.push_back(t.name);
  std::sort(names.begin(), names.end());
  for (const auto& n : names) {
    try {
      for (auto& b : enabled_bindings(net, s, n, opts.supply)) firings.push_back({n, std::move(b)});
    } catch (const Error& e) {
      out.successors.push_back({{n, {}}, std::string(e.what())});
    }
  }
  if (depth >= opts.bounds.max_depth) {
    if (!firings.empty() || !out.successors.empty()) out.flags.depth = true;
    out.successors.clear();
    return out;
  }
  const Bounds& b = opts.bounds;
  for (auto& f : firings) {
    try {
      Snapshot next = fire(net, s, f.transition, f.binding);
      bool over = false;
      for (const auto& [p, ms] : next.marking)
        if (ms.size() > b.max_tokens_per_place) {
          out.flags.tokens = true;
          over = true;
        }
      if (next.storage.metadata.size() > b.max_triples) {
        out.flags.triples = true;
        over = true;
      }
      if (next.storage.objects.size() > b.max_objects) {
        out.flags.objects = true;
        over = true;
      }
      if (over) continue;
      if (opts.canonicalize) canonicalize(next);
      out.successors.push_back({std::move(f), std::move(next)});
    } catch (const Error& e) {
      out.successors.push_back({std::move(f), std::string(e.what())});
    }
  }
  return out;
}

void merge_flags(Truncation& into, const Truncation& f) {
  into.depth |= f.depth;
  into.states |= f.states;
  into.tokens |= f.tokens;
  into.triples |= f.triples;
  into.objects |= f.objects;
}

class Explorer {
 public:
  using Stop = std::function<bool(const Snapshot&)>;

  Explorer(const MMNet& net, const ExploreOptions& opts, bool parallel)
      : net_(net), opts_(opts), parallel_(parallel) {}

  // Explores level by level; returns the index of the first state satisfying
  // `stop`, or nullopt.
  std::optional<std::size_t> run(Snapshot init, const Stop& stop = nullptr) {
    if (opts_.canonicalize) canonicalize(init);
    add_state(std::move(init), 0, LTS::kNoParent);
    if (stop && stop(lts_.states[0])) return 0;
    std::vector<std::size_t> frontier{0};
    while (!frontier.empty()) {
      std::vector<Expansion> results(frontier.size());
      const long n = static_cast<long>(frontier.size());
#pragma omp parallel for schedule(dynamic) if (parallel_ && n > 1)
      for (long i = 0; i < n; ++i) {
        std::size_t idx = frontier[i];
        results[i] = expand(net_, lts_.states[idx], lts_.depth[idx], opts_);
      }
      std::vector<std::size_t> next;
      for (std::size_t i = 0; i < frontier.size(); ++i) {
        std::size_t from = frontier[i];
        merge_flags(lts_.truncated, results[i].flags);
        for (auto& succ : results[i].successors) {
          if (auto* err = std::get_if<std::string>(&succ.result)) {
            lts_.errors.push_back({from, std::move(succ.firing), std::move(*err)});
            continue;
          }
          Snapshot& s = std::get<Snapshot>(succ.result);
          std::string key = s.serialize();
          auto it = index_.find(key);
          std::size_t to;
          if (it != index_.end()) {
            to = it->second;
            lts_.edges.push_back({from, to, std::move(succ.firing)});
          } else {
            if (lts_.states.size() >= opts_.bounds.max_states) {
              lts_.truncated.states = true;
              continue;
            }
            lts_.edges.push_back({from, 0, std::move(succ.firing)});
            to = add_state(std::move(s), lts_.depth[from] + 1, lts_.edges.size() - 1, &key);
            lts_.edges.back().to = to;
            next.push_back(to);
            if (stop && stop(lts_.states[to])) return to;
          }
        }
      }
      frontier = std::move(next);
    }
    return std::nullopt;
  }

  LTS take() { return std::move(lts_); }

 private:
  std::size_t add_state(Snapshot s, std::size_t depth, std::size_t parent,
                        const std::string* key = nullptr) {
    std::size_t idx = lts_.states.size();
    index_.emplace(key ? *key : s.serialize(), idx);
    lts_.states.push_back(std::move(s));
    lts_.depth.push_back(depth);
    lts_.parent.push_back(parent);
    return idx;
  }

  const MMNet& net_;
  const ExploreOptions& opts_;
  bool parallel_;
  LTS lts_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace

LTS explore(const MMNet& net, const Snapshot& init, const ExploreOptions& opts) {
  Explorer ex(net, opts, false);
  ex.run(init);
  return ex.take();
}

LTS explore_parallel(const MMNet& net, const Snapshot& init, const ExploreOptions& opts) {
  Explorer ex(net, opts, true);
  ex.run(init);
  return ex.take();
}

ReachResult reachable_nonempty(const MMNet& net, const Snapshot& init, const std::string& place,
                               const ExploreOptions& opts) {
  net.place(place);
  Explorer ex(net, opts, false);
  auto hit = ex.run(init, [&](const Snapshot& s) { return !s.tokens(place).empty(); });
  LTS lts = ex.take();
  ReachResult r;
  r.states_seen = lts.states.size();
  if (hit) {
    r.verdict = Verdict::Reachable;
    r.witness = lts.path_to(*hit);
  } else {
    r.verdict = lts.truncated.any() ? Verdict::Truncated : Verdict::NotReachableWithinBounds;
  }
  return r;
}

std::string to_dot(const LTS& lts) {
  auto esc = [](const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out;
  };
  std::string out = "digraph lts {\n  node [shape=box];\n";
  for (std::size_t i = 0; i < lts.states.size(); ++i)
    out += "  s" + std::to_string(i) + " [label=\"s" + std::to_string(i) + "\\n" +
           esc(marking_summary(lts.states[i])) + "\"];\n";
  for (const auto& e : lts.edges)
    out += "  s" + std::to_string(e.from) + " -> s" + std::to_string(e.to) + " [label=\"" +
           esc(e.firing.transition) + "\"];\n";
  out += "}\n";
  return out;
}

}  // namespace mmnet
