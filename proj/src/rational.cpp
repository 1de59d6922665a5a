#include "tml/rational.hpp"

namespace tml {

Rational tree_sum(std::span<const Rational> terms) {
  if (terms.empty()) return Rational(0);
  std::vector<Rational> level(terms.begin(), terms.end());
  while (level.size() > 1) {
    std::vector<Rational> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(level[i] + level[i + 1]);
    if (level.size() % 2 == 1) next.push_back(std::move(level.back()));
    level = std::move(next);
  }
  return level.front();
}

}  // namespace tml
