#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace tactile {

/// Base of every domain error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NegativeRadicand : public Error {
 public:
  explicit NegativeRadicand(float value);
  float value() const { return value_; }

 private:
  float value_;
};

/// Target position outside the workspace (an acos argument left [-1, 1] by
/// more than the reach tolerance). Carries the sample index when raised from
/// inside a pipeline run.
class Unreachable : public Error {
 public:
  explicit Unreachable(const std::string& what,
                       std::optional<std::int64_t> sample = std::nullopt);
  std::optional<std::int64_t> sample() const { return sample_; }
  Unreachable at_sample(std::int64_t n) const;

 private:
  std::optional<std::int64_t> sample_;
};

class OutOfOrderSample : public Error {
 public:
  OutOfOrderSample(std::int64_t expected, std::int64_t got);
};

class SeriesLengthMismatch : public Error {
 public:
  SeriesLengthMismatch(std::size_t a, std::size_t b);
};

class CyclicGraph : public Error {
 public:
  using Error::Error;
};

class CalibrationDegenerate : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration or input file. `field` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace tactile
