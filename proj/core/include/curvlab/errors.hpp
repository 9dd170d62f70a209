#pragma once

#include <stdexcept>
#include <string>

namespace curvlab {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error { public: using Error::Error; };
class SizeError : public Error { public: using Error::Error; };
class StepError : public Error { public: using Error::Error; };
class ParameterError : public Error { public: using Error::Error; };
class RangeError : public Error { public: using Error::Error; };
class CriticalPointError : public Error { public: using Error::Error; };
class EvaluationError : public Error { public: using Error::Error; };
class UnknownIdError : public Error { public: using Error::Error; };
class BranchMismatchError : public Error { public: using Error::Error; };
class InsufficientDataError : public Error { public: using Error::Error; };
class QuadratureBudgetError : public Error { public: using Error::Error; };

// solver failures
class NonConvergenceError : public Error { public: using Error::Error; };
class BracketViolationError : public Error { public: using Error::Error; };
class NewtonDivergenceError : public Error { public: using Error::Error; };

}  // namespace curvlab
