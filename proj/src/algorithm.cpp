#include "treemap/algorithm.hpp"

#include <cctype>
#include <stdexcept>

namespace treemap {

std::string_view short_name(Algorithm a) {
  switch (a) {
    case Algorithm::SliceAndDice: return "SND";
    case Algorithm::Squarified: return "SQR";
    case Algorithm::Approximation: return "APP";
    case Algorithm::Strip: return "STR";
    case Algorithm::Split: return "SPL";
    case Algorithm::PivotMiddle: return "PBM";
    case Algorithm::PivotSize: return "PBZ";
    case Algorithm::PivotSplit: return "PBS";
    case Algorithm::Spiral: return "SPI";
    case Algorithm::Hilbert: return "HIL";
    case Algorithm::Moore: return "MOO";
    case Algorithm::LocalMoves0: return "LM0";
    case Algorithm::LocalMoves4: return "LM4";
    case Algorithm::Git: return "GIT";
  }
  return "???";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  std::string upper;
  for (char c : name) upper += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (Algorithm a : kAllAlgorithms)
    if (short_name(a) == upper) return a;
  return std::nullopt;
}

std::vector<Algorithm> parse_algorithm_list(std::string_view list) {
  std::string trimmed;
  for (char c : list)
    if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
  if (trimmed.empty() || parse_algorithm(trimmed) == std::nullopt) {
    std::string upper;
    for (char c : trimmed) upper += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (upper == "ALL") return {kAllAlgorithms.begin(), kAllAlgorithms.end()};
  }
  std::vector<Algorithm> out;
  std::size_t start = 0;
  while (start <= trimmed.size()) {
    std::size_t comma = trimmed.find(',', start);
    if (comma == std::string::npos) comma = trimmed.size();
    std::string_view token(trimmed.data() + start, comma - start);
    auto a = parse_algorithm(token);
    if (!a) throw std::invalid_argument("unknown algorithm '" + std::string(token) + "'");
    out.push_back(*a);
    start = comma + 1;
  }
  return out;
}

bool is_state_aware(Algorithm a) {
  return a == Algorithm::LocalMoves0 || a == Algorithm::LocalMoves4 || a == Algorithm::Git;
}

bool is_ordered(Algorithm a) {
  return a != Algorithm::Squarified && a != Algorithm::Approximation && !is_state_aware(a);
}

}  // namespace treemap
