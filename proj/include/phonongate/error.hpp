// Copyright 2026 The PhononGate Authors
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

namespace phonongate {

enum class ErrorCode {
    invalid_dimension,
    dimension_mismatch,
    slot_out_of_range,
    invalid_state,
    invalid_keep_set,
    not_hermitian,
    quadrature_error,
    buckling_threshold,
    invalid_argument,
    truncation_too_small,
    resonance_proximity,
    integration_failure,
    dark_transition,
    unnormalized_input,
    grid_mismatch,
    degenerate_grid,
    invalid_config,
    unknown_figure,
    io_error,
};

/// Kebab-case identifier used in machine-readable error reports.
std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &message);

    ErrorCode code() const noexcept {
        return code_;
    }
    /// Message without the code prefix.
    const std::string &detail() const noexcept {
        return detail_;
    }

   private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace phonongate
