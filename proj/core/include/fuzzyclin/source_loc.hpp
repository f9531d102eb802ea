#ifndef FUZZYCLIN_SOURCE_LOC_HPP_
#define FUZZYCLIN_SOURCE_LOC_HPP_

#include <cstddef>

namespace fuzzyclin {

// 1-based; line 0 means "no position" (programmatically built values).
struct SourceLoc {
  std::size_t line = 0;
  std::size_t column = 0;

  bool known() const { return line != 0; }
  friend bool operator==(const SourceLoc&, const SourceLoc&) = default;
};

}  // namespace fuzzyclin

#endif  // FUZZYCLIN_SOURCE_LOC_HPP_
