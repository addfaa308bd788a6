// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace adspec
{

// Two families: bad input (ConfigError) and numerics that did not deliver
// (ComputeError). The CLI maps them to distinct exit codes.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
  virtual const char *kind() const noexcept = 0;
  virtual bool is_config() const noexcept { return false; }
};

class ConfigError : public Error
{
public:
  using Error::Error;
  const char *kind() const noexcept override { return "ConfigError"; }
  bool is_config() const noexcept override { return true; }
};

class ComputeError : public Error
{
public:
  using Error::Error;
  const char *kind() const noexcept override { return "ComputeError"; }
};

#define ADSPEC_ERROR(Name, Base)                                      \
  class Name : public Base                                            \
  {                                                                   \
  public:                                                             \
    using Base::Base;                                                 \
    const char *kind() const noexcept override { return #Name; }      \
  }

ADSPEC_ERROR(DimensionMismatch, ConfigError);
ADSPEC_ERROR(InvalidSystem, ConfigError);
ADSPEC_ERROR(PreconditionError, ConfigError);
ADSPEC_ERROR(ResolutionError, ConfigError);
ADSPEC_ERROR(DomainError, ConfigError);

ADSPEC_ERROR(ConstantRankViolation, ComputeError);
ADSPEC_ERROR(DegenerateSymbol, ComputeError);
ADSPEC_ERROR(InterpolationFailure, ComputeError);
ADSPEC_ERROR(CayleyHamiltonResidual, ComputeError);
ADSPEC_ERROR(ExactSequenceFailure, ComputeError);
ADSPEC_ERROR(ContourThroughZero, ComputeError);
ADSPEC_ERROR(NonConvergence, ComputeError);
ADSPEC_ERROR(UnstableAbsorber, ComputeError);
ADSPEC_ERROR(FactorizationSingular, ComputeError);
ADSPEC_ERROR(NoConvergence, ComputeError);
ADSPEC_ERROR(NearSingularSolve, ComputeError);
ADSPEC_ERROR(ContourNearEigenvalue, ComputeError);
ADSPEC_ERROR(QuadratureNotConverged, ComputeError);
ADSPEC_ERROR(PathLost, ComputeError);
ADSPEC_ERROR(StepRejected, ComputeError);
ADSPEC_ERROR(BasepointRegular, ComputeError);
ADSPEC_ERROR(TruncationInconclusive, ComputeError);
ADSPEC_ERROR(CircleHitsSingularity, ComputeError);

#undef ADSPEC_ERROR

}  // namespace adspec
