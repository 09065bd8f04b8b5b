#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mmnet/net.hpp"

namespace mmnet {

/// Reads the net-definition format. `triples` and `objects` file references
/// in the init section resolve against `base_dir`. Throws SyntaxError,
/// FileError and the literal errors of the value parser.
MMNet parse_net(std::string_view text, const std::filesystem::path& base_dir = {});

/// Reads a net file; throws FileError when it cannot be opened.
MMNet load_net(const std::filesystem::path& file);

/// Canonical text form with inline initial storage.
/// parse_net(write_net(n)) writes back to the same text.
std::string write_net(const MMNet& net);

std::string read_file(const std::filesystem::path& file);
void write_file(const std::filesystem::path& file, std::string_view content);

}  // namespace mmnet
