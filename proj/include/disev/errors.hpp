#pragma once

#include <stdexcept>
#include <string>

namespace disev {

// Exit-code contract shared by the library and the CLI:
// 0 success, 1 usage, 2 validation findings, 3 I/O, 4 coverage mismatch.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Prediction/gold item or annotator sets do not line up.
struct CoverageError : std::runtime_error {
    explicit CoverageError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace disev
