#pragma once

#include <stdexcept>
#include <string>

namespace tricons {

// Library-wide exception. `code` is a short machine-readable tag used by
// the CLI for its ERROR:<code>: prefix (io, schema, usage, domain, numeric).
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

} // namespace tricons
