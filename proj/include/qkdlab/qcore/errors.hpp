#pragma once

#include <stdexcept>
#include <string>

namespace qkdlab {

/// Subsystem dimensions, basis indices or gate sizes that do not fit together.
class DimensionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Unknown, duplicate or otherwise invalid subsystem labels.
class LayoutError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A computation left the region where double precision results are trustworthy
/// (zero-probability projection, non-unitary input, lost normalization).
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace qkdlab
