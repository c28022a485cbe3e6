#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "smr/attributes.hpp"

namespace smr {

/// One row of an attribute table; the label is present once queries are labelled.
struct AttributeRecord {
  AttributeVector attrs;
  std::optional<int> label;
};

// CSV: header "query,rank,a1,a2,a3,a4" with an optional trailing ",label"
// column; every row must then carry a label in 0..3.
void write_attributes_csv(const std::vector<AttributeRecord>& records, std::ostream& out);
std::vector<AttributeRecord> read_attributes_csv(std::istream& in);

// Binary: "SMRA" | u16 version=1 | u32 count | u8 has_labels | records of
// u32 query, u32 rank, 4 x f64 little-endian, then i8 label when has_labels.
void write_attributes_binary(const std::vector<AttributeRecord>& records, std::ostream& out);
std::vector<AttributeRecord> read_attributes_binary(std::istream& in);

/// Binary unless the extension is ".csv".
void save_attributes(const std::vector<AttributeRecord>& records, const std::filesystem::path& path);
std::vector<AttributeRecord> load_attributes(const std::filesystem::path& path);

}  // namespace smr
