#pragma once

#include <stdexcept>
#include <string>

namespace knotfield {

enum class ErrorKind {
    parse,       // malformed input text
    validation,  // input violates a structural precondition
    resolution,  // curve too coarse for the requested quantity
    degenerate,  // evaluation point in a non-generic configuration
    domain,      // argument outside its admissible range
    io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace knotfield
