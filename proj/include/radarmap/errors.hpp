#pragma once

#include <stdexcept>
#include <string>

namespace radarmap {

// Error taxonomy shared across the toolkit. The CLI maps these onto
// stable exit codes (see tools/radarmap_main.cpp).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

class ExtrapolationError : public std::runtime_error {
public:
    explicit ExtrapolationError(const std::string& msg) : std::runtime_error(msg) {}
};

class BoundsError : public std::out_of_range {
public:
    explicit BoundsError(const std::string& msg) : std::out_of_range(msg) {}
};

class AlignmentError : public std::runtime_error {
public:
    explicit AlignmentError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace radarmap
