#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hypsweep {

enum class Errc {
  NegativeRadius,
  NegativeArea,
  OutOfRange,
  DegenerateCorner,
  DegenerateEdge,
  InvalidGenus,
  GenusMismatch,
  BadEdgeId,
  NotFlippable,
  NotAdjacent,
  BudgetExceeded,
  Unreachable,
  RelationViolated,
  MarkingOverflow,
  OpenRegion,
  NonConvergence,
  InfeasibleStart,
  InvalidConfig,
  InvalidInput,
};

constexpr std::string_view errc_name(Errc e) {
  switch (e) {
    case Errc::NegativeRadius: return "NegativeRadius";
    case Errc::NegativeArea: return "NegativeArea";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::DegenerateCorner: return "DegenerateCorner";
    case Errc::DegenerateEdge: return "DegenerateEdge";
    case Errc::InvalidGenus: return "InvalidGenus";
    case Errc::GenusMismatch: return "GenusMismatch";
    case Errc::BadEdgeId: return "BadEdgeId";
    case Errc::NotFlippable: return "NotFlippable";
    case Errc::NotAdjacent: return "NotAdjacent";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::Unreachable: return "Unreachable";
    case Errc::RelationViolated: return "RelationViolated";
    case Errc::MarkingOverflow: return "MarkingOverflow";
    case Errc::OpenRegion: return "OpenRegion";
    case Errc::NonConvergence: return "NonConvergence";
    case Errc::InfeasibleStart: return "InfeasibleStart";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

/// Domain error carrying a machine-readable code. Every library failure is
/// reported through this type; the CLI maps it to exit status 1.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace hypsweep
