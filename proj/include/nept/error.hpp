/* Copyright 2026 The Nept Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef NEPT_ERROR_HPP_
#define NEPT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace nept {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Domain or shape violation in the soft-value algebra.
class SoftError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration (bad flags, inconsistent options).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Perception-boundary failure: unknown predicate, arity mismatch, bad scene
/// data, or a remote transport/protocol error.
class GroundError : public Error {
 public:
  using Error::Error;
};

}  // namespace nept

#endif  // NEPT_ERROR_HPP_
