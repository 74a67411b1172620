#pragma once

#include <stdexcept>
#include <string>

namespace seekbench {

/// A caller broke an operation's precondition (e.g. stepping a finished episode).
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A task specification names a (family, variant) pair that does not exist,
/// or carries parameters the family cannot honor.
class InvalidTask : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace seekbench
