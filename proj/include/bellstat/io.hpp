#pragma once

#include <string>

#include "bellstat/counts.hpp"

namespace bellstat {

enum class Format { json, csv };

// Parses a dataset from text. JSON carries name and outcome labels; CSV
// carries counts only (name empty, labels defaulting to +/-). Validation
// failures throw ParseError naming the offending row or field.
BellDataset parse_dataset(const std::string& input, Format format);

// Inverse of parse_dataset for the same format. CSV serialization drops
// name and labels by design of the schema.
std::string serialize_dataset(const BellDataset& ds, Format format);

// Reads a dataset file, picking the format from the extension
// (.json / .csv); anything else throws ParseError.
BellDataset load_dataset_file(const std::string& path);

}  // namespace bellstat
