#pragma once

#include <stdexcept>
#include <string>

namespace nlcurv {

/// Base class of every error raised by the library. `kind()` is the stable
/// machine-readable name written into CLI error records.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define NLCURV_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& what) : Error(#Name, what) {}  \
  };

NLCURV_DEFINE_ERROR(ParseError)
NLCURV_DEFINE_ERROR(NonManifoldError)
NLCURV_DEFINE_ERROR(OrientationError)
NLCURV_DEFINE_ERROR(InvalidParams)
NLCURV_DEFINE_ERROR(UnsupportedMode)
NLCURV_DEFINE_ERROR(DegenerateGeometry)
NLCURV_DEFINE_ERROR(DegeneratePatch)
NLCURV_DEFINE_ERROR(NonGraphical)
NLCURV_DEFINE_ERROR(DisconnectedMesh)
NLCURV_DEFINE_ERROR(StallError)
NLCURV_DEFINE_ERROR(MeshDegenerationError)
NLCURV_DEFINE_ERROR(UsageError)

#undef NLCURV_DEFINE_ERROR

}  // namespace nlcurv
