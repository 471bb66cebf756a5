#include "pcfi/errors.hpp"

#include <sstream>
#include <utility>

namespace pcfi {
namespace {

std::string no_source_message(const std::vector<int>& channels) {
  std::ostringstream os;
  os << "no reachable source node in channel(s):";
  for (int c : channels) os << ' ' << c;
  return os.str();
}

}  // namespace

NoSourceError::NoSourceError(std::vector<int> channels)
    : InputError(no_source_message(channels)), channels_(std::move(channels)) {}

}  // namespace pcfi
