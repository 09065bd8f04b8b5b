#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace mmnet {

inline constexpr std::string_view kMmdbNamespace = "http://example.org/mmdb#";

/// Prefix table for `prefix:local` names. `mmdb:` is always declared.
class PrefixMap {
 public:
  PrefixMap() { prefixes_["mmdb"] = std::string(kMmdbNamespace); }

  void declare(const std::string& prefix, const std::string& ns) { prefixes_[prefix] = ns; }

  /// Expands `prefix:local`; nullopt when the prefix is undeclared.
  std::optional<std::string> expand(std::string_view pname) const;

  /// Shortest `prefix:local` form of an IRI, or nullopt when no prefix fits.
  std::optional<std::string> compact(std::string_view iri) const;

  const std::map<std::string, std::string>& entries() const { return prefixes_; }

 private:
  std::map<std::string, std::string> prefixes_;
};

/// Writes an IRI as `prefix:local` when possible, else as `<...>`.
std::string format_iri(std::string_view iri, const PrefixMap& prefixes);

}  // namespace mmnet
