#pragma once

#include <stdexcept>
#include <string>

namespace hpdg {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define HPDG_DEFINE_ERROR(Name)                                                \
  class Name : public Error {                                                  \
  public:                                                                      \
    explicit Name(const std::string &what) : Error(#Name ": " + what) {}       \
  }

// mesh
HPDG_DEFINE_ERROR(InvalidIndex);
HPDG_DEFINE_ERROR(DuplicateTriangle);
HPDG_DEFINE_ERROR(HangingNode);
HPDG_DEFINE_ERROR(DegenerateTriangle);
HPDG_DEFINE_ERROR(NonManifoldEdge);
HPDG_DEFINE_ERROR(ClosureNonTermination);
HPDG_DEFINE_ERROR(ParseError);

// fe space
HPDG_DEFINE_ERROR(UnsupportedDegree);

// problem / system
HPDG_DEFINE_ERROR(NonpositiveWavenumber);
HPDG_DEFINE_ERROR(InvalidParameter);
HPDG_DEFINE_ERROR(QuadratureUnavailable);
HPDG_DEFINE_ERROR(EmptyMesh);
HPDG_DEFINE_ERROR(SingularSystem);
HPDG_DEFINE_ERROR(ResidualTooLarge);
HPDG_DEFINE_ERROR(NormUndefined);
HPDG_DEFINE_ERROR(EvaluationAtOrigin);

#undef HPDG_DEFINE_ERROR

} // namespace hpdg
