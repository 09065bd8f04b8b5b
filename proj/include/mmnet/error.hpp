#pragma once

#include <stdexcept>
#include <string>

namespace mmnet {

/// Root of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define MMNET_DEFINE_ERROR(Name, Base)            \
  class Name : public Base {                      \
   public:                                        \
    explicit Name(const std::string& what_arg)    \
        : Base(#Name ": " + what_arg) {}          \
  }

// type system
MMNET_DEFINE_ERROR(NoCastRule, Error);
MMNET_DEFINE_ERROR(CastFailure, Error);
MMNET_DEFINE_ERROR(UnknownPredicate, Error);
MMNET_DEFINE_ERROR(UnknownFunction, Error);
MMNET_DEFINE_ERROR(ArityMismatch, Error);
MMNET_DEFINE_ERROR(TypeMismatch, Error);
MMNET_DEFINE_ERROR(EmptySetAccess, Error);
MMNET_DEFINE_ERROR(NotSubset, Error);
MMNET_DEFINE_ERROR(LiteralSyntax, Error);

// object store
MMNET_DEFINE_ERROR(DanglingAddress, Error);
MMNET_DEFINE_ERROR(OutOfBounds, Error);
MMNET_DEFINE_ERROR(UnknownShape, Error);
MMNET_DEFINE_ERROR(UnknownColor, Error);

// actions
MMNET_DEFINE_ERROR(MissingParameter, Error);
MMNET_DEFINE_ERROR(AddressConflict, Error);
MMNET_DEFINE_ERROR(FunctionFailure, Error);

// net structure and runtime
MMNET_DEFINE_ERROR(UnknownTransition, Error);
MMNET_DEFINE_ERROR(UnknownPlace, Error);
MMNET_DEFINE_ERROR(NotEnabled, Error);
MMNET_DEFINE_ERROR(NoSupply, Error);
MMNET_DEFINE_ERROR(ChannelTypeMismatch, Error);

// files
MMNET_DEFINE_ERROR(FileError, Error);

#undef MMNET_DEFINE_ERROR

/// Text-level failure with a source position (1-based).
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, int line, int column)
      : Error("SyntaxError at " + std::to_string(line) + ":" +
              std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class UnboundAnswerVariable : public Error {
 public:
  explicit UnboundAnswerVariable(const std::string& var)
      : Error("UnboundAnswerVariable: " + var + " does not occur in the pattern"),
        variable(var) {}
  std::string variable;
};

}  // namespace mmnet
