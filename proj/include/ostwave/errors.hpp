#pragma once

#include <stdexcept>
#include <string>

namespace ostwave {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// spectral basis
struct GridMismatch : Error {
  explicit GridMismatch(const std::string& msg) : Error(msg) {}
};
struct MeanNotZero : Error {
  explicit MeanNotZero(const std::string& msg) : Error(msg) {}
};

// wave family
struct DegenerateStokes : Error {
  explicit DegenerateStokes(const std::string& msg) : Error(msg) {}
};
struct NoConvergence : Error {
  explicit NoConvergence(const std::string& msg) : Error(msg) {}
};
struct SingularJacobian : Error {
  explicit SingularJacobian(const std::string& msg) : Error(msg) {}
};
struct ContinuationStalled : Error {
  explicit ContinuationStalled(const std::string& msg) : Error(msg) {}
};

// modulation matrices
struct BetaZero : Error {
  explicit BetaZero(const std::string& msg) : Error(msg) {}
};
struct BetaNonZero : Error {
  explicit BetaNonZero(const std::string& msg) : Error(msg) {}
};

// bloch pencil
struct XiZeroDeflationFailed : Error {
  explicit XiZeroDeflationFailed(const std::string& msg) : Error(msg) {}
};
struct NormalizationViolated : Error {
  explicit NormalizationViolated(const std::string& msg) : Error(msg) {}
};
struct WindowAmbiguous : Error {
  explicit WindowAmbiguous(const std::string& msg) : Error(msg) {}
};
struct WaveMismatch : Error {
  explicit WaveMismatch(const std::string& msg) : Error(msg) {}
};
struct StiffIntegrationFailure : Error {
  explicit StiffIntegrationFailure(const std::string& msg) : Error(msg) {}
};

// cli / store
struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};
struct CacheInvalid : Error {
  explicit CacheInvalid(const std::string& msg) : Error(msg) {}
};

}  // namespace ostwave
