#pragma once

#include <stdexcept>
#include <string>

namespace nilbal {

struct ParseError : std::runtime_error {
    int line, col;
    ParseError(int line_, int col_, const std::string& msg)
        : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                             std::to_string(col_) + ": " + msg),
          line(line_), col(col_) {}
};

struct NotAutomorphism : std::runtime_error {
    explicit NotAutomorphism(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotUnipotent : std::runtime_error {
    explicit NotUnipotent(const std::string& msg) : std::runtime_error(msg) {}
};

struct CosetLimitExceeded : std::runtime_error {
    explicit CosetLimitExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

struct SizeLimit : std::runtime_error {
    explicit SizeLimit(const std::string& msg) : std::runtime_error(msg) {}
};

struct LiftFailure : std::runtime_error {
    explicit LiftFailure(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonCommuting : std::runtime_error {
    explicit NonCommuting(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParameterInvalid : std::runtime_error {
    explicit ParameterInvalid(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotCoprime : std::runtime_error {
    explicit NotCoprime(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidTower : std::runtime_error {
    explicit InvalidTower(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace nilbal
