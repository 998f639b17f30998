#pragma once

#include <stdexcept>
#include <string>

namespace heightlab {

// Exit-status classes used by the CLI: 1 parse/validation, 2 precondition, 3 budget.
class Error : public std::runtime_error {
  public:
	using std::runtime_error::runtime_error;
	virtual int exit_code() const noexcept { return 1; }
};

class ParseError : public Error {
  public:
	using Error::Error;
};

class ValidationError : public Error {
  public:
	using Error::Error;
};

class PreconditionError : public Error {
  public:
	using Error::Error;
	int exit_code() const noexcept override { return 2; }
};

class BudgetError : public Error {
  public:
	using Error::Error;
	int exit_code() const noexcept override { return 3; }
};

} // namespace heightlab
