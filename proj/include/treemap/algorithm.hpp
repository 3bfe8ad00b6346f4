#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace treemap {

enum class Algorithm {
  SliceAndDice,   // SND
  Squarified,     // SQR
  Approximation,  // APP
  Strip,          // STR
  Split,          // SPL
  PivotMiddle,    // PBM
  PivotSize,      // PBZ
  PivotSplit,     // PBS
  Spiral,         // SPI
  Hilbert,        // HIL
  Moore,          // MOO
  LocalMoves0,    // LM0
  LocalMoves4,    // LM4
  Git,            // GIT
};

inline constexpr std::array<Algorithm, 14> kAllAlgorithms = {
    Algorithm::SliceAndDice, Algorithm::Squarified, Algorithm::Approximation, Algorithm::PivotMiddle,
    Algorithm::PivotSize,    Algorithm::PivotSplit, Algorithm::Strip,         Algorithm::Split,
    Algorithm::Spiral,       Algorithm::Hilbert,    Algorithm::Moore,         Algorithm::LocalMoves0,
    Algorithm::LocalMoves4,  Algorithm::Git};

std::string_view short_name(Algorithm a);

/// Case-insensitive lookup of the three-letter code.
std::optional<Algorithm> parse_algorithm(std::string_view name);

/// Parses "ALL" or a comma-separated list; throws std::invalid_argument on
/// an unknown name.
std::vector<Algorithm> parse_algorithm_list(std::string_view list);

bool is_state_aware(Algorithm a);
bool is_ordered(Algorithm a);

}  // namespace treemap
