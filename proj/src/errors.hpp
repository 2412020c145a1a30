#pragma once

#include <stdexcept>
#include <string>

namespace locgate {

enum class ErrorKind {
    validation,  // domain invariant violated (ranges, ordering, thresholds)
    parse,       // malformed input (JSONL, config)
    io,          // filesystem failures
    argument,    // bad call arguments (unknown scenario, empty sets)
    state,       // operation invalid for current state (latch misuse)
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void throw_validation(const std::string& msg) { throw Error(ErrorKind::validation, msg); }
[[noreturn]] inline void throw_parse(const std::string& msg) { throw Error(ErrorKind::parse, msg); }
[[noreturn]] inline void throw_io(const std::string& msg) { throw Error(ErrorKind::io, msg); }
[[noreturn]] inline void throw_argument(const std::string& msg) { throw Error(ErrorKind::argument, msg); }
[[noreturn]] inline void throw_state(const std::string& msg) { throw Error(ErrorKind::state, msg); }

}  // namespace locgate
