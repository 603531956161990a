// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace btf {

// Malformed or inconsistent input data (parse failures, curation conflicts,
// out-of-range coordinates read from disk).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A matrix that must be symmetric positive definite was not, even after the
// jitter retry.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace btf
