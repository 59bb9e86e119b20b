#pragma once

// Versioned text format for density matrices:
//
//   qdiscord-state 1
//   labels A:2 B:2 C:2
//   entries <count>
//   <row> <col> <re> <im>
//   ...
//
// Entries not listed are zero. Lines starting with '#' are comments.
// Values are written with 17 significant digits so that load(save(rho))
// reproduces rho exactly.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "qdiscord/qstate.hpp"

namespace qdiscord {

inline constexpr int kStateFileVersion = 1;

void write_state(std::ostream& out, const DensityMatrix& rho, const std::string& comment = {});
DensityMatrix read_state(std::istream& in);

void save_state(const std::filesystem::path& path, const DensityMatrix& rho, const std::string& comment = {});
DensityMatrix load_state(const std::filesystem::path& path);

}  // namespace qdiscord
