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

#include "phonongate/error.hpp"

namespace phonongate {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_dimension:
            return "invalid-dimension";
        case ErrorCode::dimension_mismatch:
            return "dimension-mismatch";
        case ErrorCode::slot_out_of_range:
            return "slot-out-of-range";
        case ErrorCode::invalid_state:
            return "invalid-state";
        case ErrorCode::invalid_keep_set:
            return "invalid-keep-set";
        case ErrorCode::not_hermitian:
            return "non-hermitian";
        case ErrorCode::quadrature_error:
            return "quadrature-error";
        case ErrorCode::buckling_threshold:
            return "buckling-threshold";
        case ErrorCode::invalid_argument:
            return "invalid-argument";
        case ErrorCode::truncation_too_small:
            return "truncation-too-small";
        case ErrorCode::resonance_proximity:
            return "resonance-proximity";
        case ErrorCode::integration_failure:
            return "integration-failure";
        case ErrorCode::dark_transition:
            return "dark-transition";
        case ErrorCode::unnormalized_input:
            return "unnormalized-input";
        case ErrorCode::grid_mismatch:
            return "grid-mismatch";
        case ErrorCode::degenerate_grid:
            return "degenerate-grid";
        case ErrorCode::invalid_config:
            return "invalid-config";
        case ErrorCode::unknown_figure:
            return "unknown-figure";
        case ErrorCode::io_error:
            return "io-error";
    }
    return "unknown";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {
}

}  // namespace phonongate
