#pragma once

#include <stdexcept>
#include <string>

namespace mapex {

// Malformed .grid text or sidecar metadata.
class FormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A caller violated an operation's documented precondition.
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Invalid generator, threshold, or mission configuration.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Two sources of map knowledge disagree on a cell (impossible with noise-free sensing).
class ConsistencyError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

// Weight-file decoding failure; no partially decoded model is ever returned.
class CodecError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Tensor or grid dimensions do not line up.
class ShapeError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace mapex
