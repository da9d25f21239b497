#pragma once

#include <stdexcept>
#include <string>

namespace pisotcs
{
//! Base class for every error raised by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! Deformation parameters that collapse to p = q = 1.
class DegenerateSpec : public Error
{
  public:
    using Error::Error;
};

//! Parameters outside the admissible set of a construction.
class InvalidSpec : public Error
{
  public:
    using Error::Error;
};

//! Argument outside the domain of convergence or definition.
class OutOfDomain : public Error
{
  public:
    using Error::Error;
};

//! A vanishing factor in the denominator of a q-Pochhammer ratio.
class DivergentProduct : public Error
{
  public:
    using Error::Error;
};

//! Series, product or quadrature failed its termination test.
class NonConvergent : public Error
{
  public:
    using Error::Error;
};

//! Malformed request: unknown target, bad specifier or grid.
class UsageError : public Error
{
  public:
    using Error::Error;
};

}  // namespace pisotcs
