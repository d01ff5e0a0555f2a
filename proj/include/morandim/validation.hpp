#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "morandim/schedule.hpp"

namespace morandim {

enum class Severity { Info, Warning, Error };

struct ValidationEntry {
  Severity severity = Severity::Info;
  std::string check;
  std::optional<std::uint64_t> level;  // 1-based level index when applicable
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationEntry> entries;

  bool ok() const {
    for (const auto& e : entries)
      if (e.severity == Severity::Error) return false;
    return true;
  }
  std::size_t error_count() const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.severity == Severity::Error;
    return n;
  }
};

ValidationReport validate(const MoranSpec& spec);
ValidationReport validate(const CantorLikeSpec& spec);

std::string to_text(const ValidationReport& report);

}  // namespace morandim
