#include "tactile/errors.hpp"

#include <sstream>

namespace tactile {

NegativeRadicand::NegativeRadicand(float value)
    : Error("NegativeRadicand: square root of " + std::to_string(value)),
      value_(value) {}

Unreachable::Unreachable(const std::string& what,
                         std::optional<std::int64_t> sample)
    : Error(sample ? "Unreachable at sample " + std::to_string(*sample) +
                         ": " + what
                   : "Unreachable: " + what),
      sample_(sample) {}

Unreachable Unreachable::at_sample(std::int64_t n) const {
  std::string detail = what();
  // Strip our own prefix so the message is not nested.
  const auto colon = detail.find(": ");
  if (colon != std::string::npos) detail = detail.substr(colon + 2);
  return Unreachable(detail, n);
}

OutOfOrderSample::OutOfOrderSample(std::int64_t expected, std::int64_t got)
    : Error("OutOfOrderSample: expected n=" + std::to_string(expected) +
            ", got n=" + std::to_string(got)) {}

SeriesLengthMismatch::SeriesLengthMismatch(std::size_t a, std::size_t b)
    : Error("SeriesLengthMismatch: " + std::to_string(a) + " vs " +
            std::to_string(b) + " samples") {}

ConfigError::ConfigError(std::string field, const std::string& message)
    : Error(field + ": " + message), field_(std::move(field)) {}

}  // namespace tactile
