#pragma once

#include <stdexcept>
#include <string>

namespace mvgl {

// Every library failure derives from Error. The CLI maps the category to
// an exit code (config -> 2, data -> 3, numerical -> 4).
enum class ErrorCategory { Config, Data, Numerical };

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

struct InvalidMatrix : Error {
    explicit InvalidMatrix(const std::string& w) : Error(ErrorCategory::Data, w) {}
};

struct InvalidData : Error {
    explicit InvalidData(const std::string& w) : Error(ErrorCategory::Data, w) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& w) : Error(ErrorCategory::Data, w) {}
};

struct InvalidHyperparameter : Error {
    explicit InvalidHyperparameter(const std::string& w) : Error(ErrorCategory::Config, w) {}
};

struct InvalidConfig : Error {
    explicit InvalidConfig(const std::string& w) : Error(ErrorCategory::Config, w) {}
};

struct EmptyGraph : Error {
    explicit EmptyGraph(const std::string& w) : Error(ErrorCategory::Numerical, w) {}
};

} // namespace mvgl
