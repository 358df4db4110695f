#pragma once

#include <stdexcept>
#include <string>

namespace qmat {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShapeError : Error { using Error::Error; };
struct RangeError : Error { using Error::Error; };
struct EmptyError : Error { using Error::Error; };
struct ContainmentError : Error { using Error::Error; };
struct ScaleError : Error { using Error::Error; };
struct FieldError : Error { using Error::Error; };
struct SingularError : Error { using Error::Error; };
struct AxiomError : Error { using Error::Error; };
struct ConsistencyError : Error { using Error::Error; };
struct IrreducibilityError : Error { using Error::Error; };
struct PrimitivityError : Error { using Error::Error; };
struct DivisionByZero : Error { using Error::Error; };
struct NotCyclicFlatError : Error { using Error::Error; };
struct NotWhitneyError : Error { using Error::Error; };
struct LatticeError : Error { using Error::Error; };
struct LabelError : Error { using Error::Error; };
struct CondensationError : Error { using Error::Error; };
struct OrderError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

}  // namespace qmat
