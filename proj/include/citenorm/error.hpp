#pragma once

#include <stdexcept>

namespace citenorm {

/// Fatal problem with user-supplied input: missing file, bad header,
/// inconsistent journal table. The CLI maps it to exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace citenorm
