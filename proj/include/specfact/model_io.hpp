#pragma once

#include <filesystem>
#include <string>

#include "specfact/verify.hpp"

namespace specfact {

// Parses {"A": [[...]], "B": ..., "C": ..., "D": ...} (row-major nested
// arrays of numbers).  ParseError messages name the offending field and
// index; dimension inconsistencies raise DimensionMismatch.
StateSpaceModel model_from_json(const std::string& text);

// Canonical serialization: keys in alphabetical order, row-major arrays,
// shortest round-trip-exact number formatting.  Byte-identical for
// identical models.
std::string model_to_json(const StateSpaceModel& m);

StateSpaceModel load_model(const std::filesystem::path& path);

// Writes via a temporary file in the same directory plus an atomic rename,
// so a crash never leaves a half-written document.
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& text);
void save_model_atomic(const std::filesystem::path& path,
                       const StateSpaceModel& m);

std::string report_to_json(const FlipReport& report);

}  // namespace specfact
