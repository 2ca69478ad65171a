#pragma once

#include <stdexcept>
#include <string>

namespace dualks {

enum class ErrorCode {
  Config,
  UnknownNeuron,
  UnknownConcept,
  NoFreeNeuron,
  RoleBusy,
  RoleUnbound,
  InvalidParams,
  AlreadyStarted,
  GoalOutOfRange,
  AtEnd,
  UnknownLetter,
  DuplicateSymbol,
  NotFound,
  DuplicateTemplate,
  NoTemplate,
  NoCandidates,
  Ambiguous,
  Incomplete,
};

const char* to_string(ErrorCode code);

// Every module reports failures through this one exception type; the code
// selects the CLI exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// 2 config, 3 domain (bounds / unknown / precondition), 4 ambiguity or
// incompleteness of a parse.
int exit_code_for(ErrorCode code);

}  // namespace dualks
