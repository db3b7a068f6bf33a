// Copyright 2026 The nlsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nlsim {

enum class ErrorCode {
    InvalidMatrix,
    ShapeMismatch,
    NotNormalized,
    SizeLimit,
    InvalidDecomposition,
    InvalidWitness,
    NotIsometry,
    InvalidParameter,
    DegenerateVector,
    CapExceeded,
    MalformedProtocol,
    InvalidProtocol,
    UnknownMeasurement,
    InvalidScenario,
    EstimationFailure,
    InvalidFormat,
};

inline std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidMatrix: return "InvalidMatrix";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::SizeLimit: return "SizeLimit";
        case ErrorCode::InvalidDecomposition: return "InvalidDecomposition";
        case ErrorCode::InvalidWitness: return "InvalidWitness";
        case ErrorCode::NotIsometry: return "NotIsometry";
        case ErrorCode::InvalidParameter: return "InvalidParameter";
        case ErrorCode::DegenerateVector: return "DegenerateVector";
        case ErrorCode::CapExceeded: return "CapExceeded";
        case ErrorCode::MalformedProtocol: return "MalformedProtocol";
        case ErrorCode::InvalidProtocol: return "InvalidProtocol";
        case ErrorCode::UnknownMeasurement: return "UnknownMeasurement";
        case ErrorCode::InvalidScenario: return "InvalidScenario";
        case ErrorCode::EstimationFailure: return "EstimationFailure";
        case ErrorCode::InvalidFormat: return "InvalidFormat";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {
    }

    ErrorCode code() const noexcept {
        return code_;
    }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &message) {
    throw Error(code, message);
}

}  // namespace nlsim
