#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "morandim/schedule.hpp"
#include "morandim/util.hpp"

namespace morandim {

struct LoadedSpec {
  std::variant<MoranSpec, CantorLikeSpec> spec;
  std::string canonical;  // normalized serialization
  std::uint64_t hash = 0;

  const MoranSpec* moran() const { return std::get_if<MoranSpec>(&spec); }
  const CantorLikeSpec* cantor() const { return std::get_if<CantorLikeSpec>(&spec); }
};

// Parses the spec-file schema. Field errors throw SpecParseError naming the
// offending path; syntax errors carry the line number.
LoadedSpec parse_spec_json(const std::string& text);
LoadedSpec load_spec_file(const std::string& path);

std::string to_canonical_json(const MoranSpec& spec);
std::string to_canonical_json(const CantorLikeSpec& spec);

}  // namespace morandim
