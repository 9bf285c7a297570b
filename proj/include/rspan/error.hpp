#ifndef RSPAN_ERROR_HPP
#define RSPAN_ERROR_HPP

#include <stdexcept>
#include <string>

namespace rspan {

/// All precondition and input failures in the library throw this.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rspan

#endif  // RSPAN_ERROR_HPP
