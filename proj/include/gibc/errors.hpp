#pragma once

#include <stdexcept>
#include <string>

namespace gibc
{

// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class InvalidCurve : public Error
{
public:
  using Error::Error;
};

// The updated polygon crosses itself; callers shrink the step and retry.
class SelfIntersection : public Error
{
public:
  using Error::Error;
};

class ClearanceViolation : public Error
{
public:
  using Error::Error;
};

class QualityFailure : public Error
{
public:
  using Error::Error;
};

class SolveFailure : public Error
{
public:
  using Error::Error;
};

class MeshMismatch : public Error
{
public:
  using Error::Error;
};

class ModeResonance : public Error
{
public:
  using Error::Error;
};

class ConfigError : public Error
{
public:
  using Error::Error;
};

}  // namespace gibc
