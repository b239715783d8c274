/*
 Copyright 2026 The cyclopoly Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#pragma once

#include <stdexcept>
#include <string>

namespace cyclopoly {

/// Matrix or vector sizes that do not agree with the declared (n, m, q).
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A signal is too short for the requested Hankel depth / data window.
class LengthError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Data does not support the requested model order (rank collapse).
class DegenerateDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A similarity transform could not be built or inverted reliably.
class SingularTransformError : public std::runtime_error {
public:
    SingularTransformError(const std::string& what, double condition)
        : std::runtime_error(what), condition_(condition) {}

    [[nodiscard]] double condition_estimate() const noexcept { return condition_; }

private:
    double condition_;
};

/// Neither transform route recovered the cyclic pattern.
class UnrecoverableStructureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// FIT reference channel is constant, so the normalizer vanishes.
class DegenerateReferenceError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Report or model files could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace cyclopoly
