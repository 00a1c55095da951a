#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bnmix {

enum class Errc {
  DisconnectedGraph,
  MissingMark,
  BottleneckNotSeparating,
  SizeOverflow,
  InvalidParams,
  SingularSystem,
  DimensionMismatch,
  BudgetExceeded,
  HorizonTooShort,
  EmptyS,
  FullS,
  StepBudgetExceeded,
  PhiTooLarge,
  EpsilonOutOfRange,
  MissingInput,
  ConfigError,
  IoError,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Thrown by mixing_time when the profile never reaches epsilon.
class HorizonTooShort : public Error {
 public:
  HorizonTooShort(long horizon, double d_at_horizon)
      : Error(Errc::HorizonTooShort,
              "d(" + std::to_string(horizon) + ") = " + std::to_string(d_at_horizon)),
        horizon_(horizon),
        d_at_horizon_(d_at_horizon) {}

  long horizon() const noexcept { return horizon_; }
  double d_at_horizon() const noexcept { return d_at_horizon_; }

 private:
  long horizon_;
  double d_at_horizon_;
};

// Config problems carry the offending key (and line when known).
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(Errc::ConfigError, key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace bnmix
