#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace derham {

// Base class for all errors raised by the library.
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Mismatched rings, bad constraint declarations, malformed configs.
struct config_error : error {
    explicit config_error(const std::string& what) : error(what) {}
};

// Violated structural preconditions (non-quadratic relation words, bad
// matrix dimensions, unknown generators).
struct structural_error : error {
    explicit structural_error(const std::string& what) : error(what) {}
};

// Expression syntax errors; `offset` is the byte position in the source.
struct parse_error : error {
    parse_error(const std::string& what, std::size_t offset)
        : error(what + " (at byte " + std::to_string(offset) + ")"), offset(offset) {}
    std::size_t offset;
};

// A checked precondition failed; `failures` lists every violated identity.
struct precondition_error : error {
    precondition_error(const std::string& what, std::vector<std::string> failures)
        : error(join(what, failures)), failures(std::move(failures)) {}
    std::vector<std::string> failures;

  private:
    static std::string join(const std::string& what, const std::vector<std::string>& fs) {
        std::string s = what;
        for (const auto& f : fs) {
            s += "\n  - ";
            s += f;
        }
        return s;
    }
};

} // namespace derham
