#include "mmnet/prefixes.hpp"

#include <cctype>

namespace mmnet {

std::optional<std::string> PrefixMap::expand(std::string_view pname) const {
  auto colon = pname.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  auto it = prefixes_.find(std::string(pname.substr(0, colon)));
  if (it == prefixes_.end()) return std::nullopt;
  return it->second + std::string(pname.substr(colon + 1));
}

namespace {

// Local names we emit must lex back as a single prefixed-name token.
bool plain_local(std::string_view local) {
  if (local.empty()) return false;
  for (char c : local) {
    auto u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || c == '_' || c == '-')) return false;
  }
  return true;
}

}  // namespace

std::optional<std::string> PrefixMap::compact(std::string_view iri) const {
  std::optional<std::string> best;
  for (const auto& [prefix, ns] : prefixes_) {
    if (iri.size() > ns.size() && iri.substr(0, ns.size()) == ns) {
      auto local = iri.substr(ns.size());
      if (!plain_local(local)) continue;
      std::string candidate = prefix + ":" + std::string(local);
      if (!best || candidate.size() < best->size()) best = candidate;
    }
  }
  return best;
}

std::string format_iri(std::string_view iri, const PrefixMap& prefixes) {
  if (auto c = prefixes.compact(iri)) return *c;
  return "<" + std::string(iri) + ">";
}

}  // namespace mmnet
