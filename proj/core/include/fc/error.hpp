#pragma once

#include <stdexcept>
#include <string>

namespace fc {

// Domain failures (a checker rejected, a precondition on user data) map to
// CLI exit code 1; infrastructure failures (missing runner, unwritable
// directory, provider outage) map to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class InfraError : public Error {
public:
    using Error::Error;
};

}  // namespace fc
