#pragma once

#include <stdexcept>
#include <string>

namespace ikl {

/// Malformed caller input: bad files, out-of-range indices, mismatched
/// alphabets or widths.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The system under test misbehaved (protocol violation, early exit, ...).
class TeacherError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A broken internal precondition. Never expected in a correct build.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace ikl
