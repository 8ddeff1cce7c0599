/*
 * error.hpp - error codes and exception type shared by the core
 *
 *  Copyright (c) 2026 panosynth contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace panosynth {

// Values are mirrored one-to-one by ps_status in the C API.
enum class ErrorCode {
    InvalidArgument = 1,
    Io,
    UnsupportedFormat,
    CorruptData,
    DimensionMismatch,
    Singularity,
    PaletteMismatch,
    ClassOutOfRange,
    InvalidRegion,
    NoCandidates,
    CoverageGap,
    EmptyInput,
    Config,
};

const char *error_code_name (ErrorCode code) noexcept;

class Error : public std::runtime_error
{
public:
    Error (ErrorCode code, const std::string &what)
        : std::runtime_error (what)
        , _code (code)
    {}

    ErrorCode code () const noexcept {
        return _code;
    }

private:
    ErrorCode _code;
};

}
