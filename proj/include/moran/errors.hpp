#pragma once

#include <stdexcept>
#include <string>

namespace moran {

/// Invalid input or parameters outside the defined domain (CLI exit code 1).
class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

/// A computation refused because it would exceed a configured budget
/// (node counts, enumeration caps); CLI exit code 2.
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

/// A cross-check between two independent computation paths disagreed
/// (CLI exit code 3). This reports a bug, not a result.
class verification_error : public std::runtime_error {
public:
    explicit verification_error(const std::string& what) : std::runtime_error(what) {}
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int domain = 1;
inline constexpr int resource = 2;
inline constexpr int verification = 3;
}  // namespace exit_code

}  // namespace moran
