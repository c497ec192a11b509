#ifndef RRP_ERRORS_HPP
#define RRP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rrp {

// Violated mathematical invariant or certificate (CLI exit status 2).
struct certificate_error : std::runtime_error {
    explicit certificate_error(const std::string& what) : std::runtime_error(what) {}
};

// Input outside the supported hypotheses (parity at 2, split-ness, ...).
struct unsupported_error : std::runtime_error {
    explicit unsupported_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rrp

#endif
