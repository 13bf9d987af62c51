#pragma once

#include <stdexcept>
#include <string>

namespace satnc {

/// Invalid numeric input to a pure model function (non-positive distance, etc.).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Scenario configuration could not be parsed or failed validation.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input files or path sets that disagree with the graph they describe.
class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The paths line-graph has a directed cycle; only a convolutional code could
/// serve this path set.
class CyclicPlgError : public std::runtime_error {
public:
    explicit CyclicPlgError(const std::string& what, std::string cycle)
        : std::runtime_error(what), cycle_(std::move(cycle)) {}
    const std::string& cycle() const noexcept { return cycle_; }

private:
    std::string cycle_;
};

/// No coefficient choice over the configured field keeps every sink decodable.
class FieldExhaustedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace satnc
