#pragma once

#include <stdexcept>
#include <string>

namespace egonet {

// Fatal error categories. The CLI maps these onto process exit codes:
// validation/domain -> 1, usage -> 2, I/O -> 3.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace egonet
