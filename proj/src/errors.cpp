#include "typel/errors.hpp"

#include <charconv>
#include <sstream>
#include <utility>

#include "typel/tolerances.hpp"

namespace typel {

DimensionCapError::DimensionCapError(int m)
    : Error("half-dimension m=" + std::to_string(m) + " outside supported range [2, 6]"),
      m_(m) {}

EnumerationCapError::EnumerationCapError(std::size_t requested, std::size_t budget)
    : Error("word enumeration needs " + std::to_string(requested) +
            " words, budget is " + std::to_string(budget)),
      requested_(requested),
      budget_(budget) {}

NotLimitPlaneError::NotLimitPlaneError(int rank, const std::string& detail)
    : Error("compound limit has rank " + std::to_string(rank) + ": " + detail), rank_(rank) {}

UnboundedBlockError::UnboundedBlockError(const std::string& what, std::vector<int> word)
    : Error(what), word_(std::move(word)) {}

void Tolerances::apply_overrides(const std::string& spec) {
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("tolerance override '" + item + "' lacks '='");
    const std::string key = item.substr(0, eq);
    const std::string text = item.substr(eq + 1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !(value > 0.0))
      throw UsageError("tolerance override '" + item + "' has an invalid value");
    if (key == "algebraic") algebraic = value;
    else if (key == "rank") rank = value;
    else if (key == "cauchy") cauchy = value;
    else if (key == "rank1_gap") rank1_gap = value;
    else if (key == "boundary") boundary = value;
    else if (key == "singular") singular = value;
    else if (key == "mu_denominator") mu_denominator = value;
    else if (key == "quadric") quadric = value;
    else throw UsageError("unknown tolerance key '" + key + "'");
  }
}

}  // namespace typel
