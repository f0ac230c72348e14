#pragma once

#include <stdexcept>
#include <string>

namespace lexi {

// Base for every failure caused by input data (files, streams, headers).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A bitstream or container that cannot be decoded.
class CorruptStream : public DataError {
 public:
  using DataError::DataError;
};

// Flit or container structure (counts, lengths, padding) is inconsistent.
class FramingError : public CorruptStream {
 public:
  using CorruptStream::CorruptStream;
};

class UnsupportedVersion : public DataError {
 public:
  using DataError::DataError;
};

// Caller broke a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace lexi
