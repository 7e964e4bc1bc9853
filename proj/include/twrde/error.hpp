#pragma once

#include <stdexcept>
#include <string>

namespace twrde {

// Runtime failure with a stable machine-checkable kind, e.g. "bracket-failure".
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}

    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

}  // namespace twrde
