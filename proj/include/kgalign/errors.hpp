#pragma once

#include <stdexcept>
#include <string>

namespace kgalign {

// Input data could not be parsed. Carries the 1-based line number of the
// offending row (0 when the whole stream is at fault, e.g. empty input).
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                      : what),
          line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// An entity or key was referenced that does not exist in the given graph/table.
class LookupError : public std::runtime_error {
public:
    explicit LookupError(const std::string& what) : std::runtime_error(what) {}
};

// A file could not be opened or written.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kgalign
