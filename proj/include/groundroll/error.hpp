#pragma once

#include <stdexcept>
#include <string>

namespace grl {

struct Error : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct FileError : Error
{
  using Error::Error;
};

// Malformed GRL1/GRM1 payloads and config files.
struct FormatError : Error
{
  using Error::Error;
};

struct ArgumentError : Error
{
  using Error::Error;
};

struct DegenerateInputError : Error
{
  using Error::Error;
};

struct NumericalError : Error
{
  using Error::Error;
};

struct ConsistencyError : Error
{
  using Error::Error;
};

struct DivergenceError : Error
{
  DivergenceError(std::string const &what, int iteration)
    : Error(what)
    , iteration{iteration}
  {
  }
  int iteration;
};

} // namespace grl
