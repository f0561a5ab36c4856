#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "frontlab/geometry.hpp"

namespace frontlab {

using Json = nlohmann::ordered_json;

/// Serializes with insertion-ordered keys, two-space indentation and every
/// float printed with 17 significant digits. Non-finite floats become null.
void write_json(std::ostream& out, const Json& j);
std::string to_json_text(const Json& j);

Json vec_json(const Vec& v, int dim);
Json points_json(const std::vector<Vec>& pts, int dim);
Json polytope_json(const Polytope& p);

/// Comma-separated rows with a fixed header; floats use 17 significant digits.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(const std::vector<double>& row);
  [[nodiscard]] std::size_t rows() const { return rows_.size(); }
  void write(std::ostream& out) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

}  // namespace frontlab
