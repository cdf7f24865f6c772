#ifndef FLUXHERM_ERRORS_HPP
#define FLUXHERM_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace fluxherm {

/// Base class for all fluxherm errors. Carries a stable machine-readable name
/// (used by the CLI for stderr reporting and exit-code classification) next to
/// the human-readable what() message.
class Error : public std::runtime_error {
 public:
  Error(std::string_view name, const std::string& what)
      : std::runtime_error(what), name_(name) {}
  std::string_view name() const noexcept { return name_; }

 private:
  std::string_view name_;  // points at a string literal
};

#define FLUXHERM_DEFINE_ERROR(ClassName)                       \
  class ClassName : public Error {                             \
   public:                                                     \
    explicit ClassName(const std::string& what)                \
        : Error(#ClassName, std::string(#ClassName ": ") + what) {} \
  }

// Grid / field-dump layer
FLUXHERM_DEFINE_ERROR(BadMagic);
FLUXHERM_DEFINE_ERROR(HeaderMismatch);
FLUXHERM_DEFINE_ERROR(NonFinitePayload);
FLUXHERM_DEFINE_ERROR(DegenerateGrid);
FLUXHERM_DEFINE_ERROR(NonPositiveSafetyFactor);
FLUXHERM_DEFINE_ERROR(Unsupported);

// Piecewise-polynomial layer
FLUXHERM_DEFINE_ERROR(OutOfDomain);
FLUXHERM_DEFINE_ERROR(UnsupportedOrder);
FLUXHERM_DEFINE_ERROR(MismatchedSpacing);
FLUXHERM_DEFINE_ERROR(MismatchedDegree);
FLUXHERM_DEFINE_ERROR(StencilDoesNotFit);

// Potential / field-evaluation layer
FLUXHERM_DEFINE_ERROR(MismatchedGrids);
FLUXHERM_DEFINE_ERROR(CenterOutOfDomain);
FLUXHERM_DEFINE_ERROR(InsufficientSmoothness);

// Integration / dynamics layer
FLUXHERM_DEFINE_ERROR(NonFiniteRHS);
FLUXHERM_DEFINE_ERROR(MinStepReached);
FLUXHERM_DEFINE_ERROR(VanishingBstarPar);
FLUXHERM_DEFINE_ERROR(VanishingBphi);

#undef FLUXHERM_DEFINE_ERROR

}  // namespace fluxherm

#endif  // FLUXHERM_ERRORS_HPP
