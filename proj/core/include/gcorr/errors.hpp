#pragma once

#include <stdexcept>
#include <string>

namespace gcorr {

/// A root bracket with no sign change, or one that could not be expanded to
/// enclose a sign change.
class bracketing_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Iteration or evaluation budget exhausted before reaching tolerance.
class convergence_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The requested configuration cannot exist; the message names the violated
/// limit value.
class infeasible_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Region mass below the threshold where the requested quantity is
/// numerically meaningful.
class degenerate_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace gcorr
