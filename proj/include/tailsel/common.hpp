#pragma once

#include <stdexcept>
#include <string>

namespace tailsel {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// argument outside the mathematical domain of an operation
class DomainError : public Error {
    using Error::Error;
};

// malformed or unusable input data (CSV layout, labels, degenerate columns)
class DataError : public Error {
    using Error::Error;
};

// statistic undefined for the given sample (constant margin, single class)
class StatError : public Error {
    using Error::Error;
};

// numerical routine failed to converge or produced non-finite values
class NumericError : public Error {
    using Error::Error;
};

// bad run configuration (flags or config file)
class ConfigError : public Error {
    using Error::Error;
};

}  // namespace tailsel
