#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ricbox {

// Invalid run configuration; the message names the offending field.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A documented precondition was broken by the caller (shape mismatch,
// out-of-range index, reused rollout buffer, ...).
class contract_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// NaN/Inf detected in numeric state; never propagated silently.
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed bytes on the wire; carries the offset of the first violation.
class codec_error : public std::runtime_error {
public:
    codec_error(const std::string& msg, std::size_t offset)
        : std::runtime_error(msg + " (offset " + std::to_string(offset) + ")"),
          offset(offset) {}
    std::size_t offset;
};

// The xApp could not act on an indication (e.g. required KPI ids missing).
class decision_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Filesystem failures.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ricbox
