#pragma once

#include <stdexcept>
#include <string>

namespace remixsig {

/// Base class for all typed errors thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Argument outside a function's mathematical domain (|x| > 1, df <= 0, ...).
struct DomainError final : Error {
    using Error::Error;
};

/// Invalid user-facing configuration (generator config, CLI option values).
struct ConfigError final : Error {
    using Error::Error;
};

}  // namespace remixsig
